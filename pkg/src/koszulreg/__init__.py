"""Betti tables and Koszul regularity over weighted and class-group graded
polynomial rings."""

from .core import (GF, QQ, Field, FreeModule, Grading, GradingError, HomogeneityError,
                   ModuleMap, Polynomial, Ring, ZeroModuleError, graded_piece_dim,
                   koszul_degree_bounds, monomial_compare, sigma, weighted_degree)
from .groebner import (ResourceError, groebner_basis, kernel, normal_form, syzygies,
                       torsion_submodule)
from .resolution import (BettiTable, ChainComplex, PresentedModule, betti_table, depth,
                         free_resolution, hilbert_function, is_cohen_macaulay, koszul_complex,
                         krull_dimension, minimize, projective_dimension, tor_via_koszul)
from .regularity import (RegularityReport, VerificationReport, koszul_regularity,
                         local_cohomology_maxdeg, local_cohomology_support,
                         min_koszul_zero_regular_truncation, regularity_report, truncate, twist,
                         verify_cor16, verify_cor17, verify_symonds, verify_theorem_a,
                         verify_theorem_b, weighted_regularity)
from .bgg import ExteriorAlgebra, OmegaE, WindowError, bgg_R, dm_homology, omega_E
from .toric import (CoxData, FanData, FanError, betti_polytope, check_containment,
                    class_group_grading, hirzebruch_fan, irrelevant_ideal,
                    lemma_technical_check, multigraded_truncate, primitive_collections, w_I)

__version__ = "0.1.0"
