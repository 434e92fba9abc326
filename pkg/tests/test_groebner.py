import pytest
from hypothesis import given, settings, strategies as st

from helpers import ideal_piece_rank, random_homogeneous, seeded
from koszulreg import QQ, GF, Ring, PresentedModule
from koszulreg.core import FreeModule, vec_add, vec_mul_poly
from koszulreg.groebner import (SubmoduleBasis, groebner_basis, normal_form, syzygies,
                                torsion_submodule)


def _ideal_gb(ring, polys):
    F = FreeModule(ring, [0])
    return groebner_basis(SubmoduleBasis(F, [{(0, e): c for e, c in f.items()} for f in polys]))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_hilbert_function_matches_linear_algebra(seed):
    rng = seeded(seed)
    ws = [rng.randint(1, 3) for _ in range(rng.randint(2, 3))]
    R = Ring(ws)
    polys = [f for f in (random_homogeneous(rng, R, rng.randint(1, 5)) for _ in range(rng.randint(1, 3))) if f]
    if not polys:
        return
    M = PresentedModule.quotient(R, polys)
    for d in range(0, 9):
        expected = len(R.grading.monomials(d)) - ideal_piece_rank(R, polys, d)
        assert M.hilbert_function(d) == expected


def test_generators_reduce_to_zero():
    R = Ring([1, 1, 1])
    x, y, z = R.gens
    polys = [(x * y - z * z).terms, (y * y * y - x * z * z).terms]
    gb = _ideal_gb(R, polys)
    for f in polys:
        assert not normal_form({(0, e): c for e, c in f.items()}, gb)
    assert normal_form({(0, (0, 0, 1)): QQ.one}, gb)


def test_normal_form_rejects_foreign_vector():
    R = Ring([1, 1])
    gb = _ideal_gb(R, [R.gens[0].terms])
    with pytest.raises(ValueError):
        normal_form({(3, (0, 0)): QQ.one}, gb)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_syzygies_compose_to_zero(seed):
    rng = seeded(seed)
    field = GF(101) if seed % 2 else QQ
    R = Ring([rng.randint(1, 3) for _ in range(3)], field)
    polys = [f for f in (random_homogeneous(rng, R, rng.randint(1, 4), field=field) for _ in range(3)) if f]
    if not polys:
        return
    F = FreeModule(R, [0])
    gens = [{(0, e): c for e, c in f.items()} for f in polys]
    S = syzygies(gens, F)
    for s in S:
        total = {}
        for (p, e), c in s.items():
            total = vec_add(total, vec_mul_poly(gens[p], {e: c}, field.red), field.red)
        assert total == {}


def test_koszul_syzygies_of_variables():
    R = Ring([1, 2, 3])
    F = FreeModule(R, [0])
    gens = [{(0, e): QQ.one} for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    S = syzygies(gens, F)
    assert sorted(S.degrees()) == [3, 4, 5]


def test_torsion_of_residue_field_plus_free():
    R = Ring([1, 1])
    x, y = R.gens
    # S/(x^2, xy): torsion generated by x, in degree 1
    M = PresentedModule.quotient(R, [(x * x).terms, (x * y).terms])
    tor = torsion_submodule(M, R.gens)
    assert [M.free.element_degree(v) for v in tor.generators] == [1]
