import pytest
from hypothesis import given, settings, strategies as st

from helpers import seeded
from koszulreg import PresentedModule, Ring, ZeroModuleError
from koszulreg.regularity import (NEG_INF, ext_modules, koszul_regularity,
                                  local_cohomology_support, min_koszul_zero_regular_truncation,
                                  predicted_truncation_support, random_monomial_quotient,
                                  regularity_report, truncate, verify_cor16, verify_cor17,
                                  verify_symonds, verify_theorem_a, verify_theorem_b,
                                  weighted_regularity)
from koszulreg.resolution import betti_table, depth, krull_dimension


def test_free_ring_regularities():
    R = Ring([2, 3, 5])
    S = PresentedModule.free_module(R)
    lcs = local_cohomology_support(S)
    assert lcs.nonzero_indices() == [3]
    assert lcs[3] == -10
    assert koszul_regularity(S) == -1
    assert weighted_regularity(S) == -7


def test_maximal_ideal_weights_12_from_exact_sequence():
    R = Ring([1, 2])
    m = PresentedModule.ideal(R, R.gens)
    lcs = local_cohomology_support(m)
    # 0 -> m -> S -> k -> 0 gives H^1(m) = k in degree 0 and H^2(m) = H^2(S)
    assert lcs.maxdeg == [NEG_INF, 0, -3]


def test_ext_of_regular_sequence_quotient():
    R = Ring([2, 3, 5, 7])
    x = R.gens
    M = PresentedModule.quotient(R, [x[2], x[3]])
    exts = ext_modules(M)
    ranks = [E.free.rank if not E.is_zero() else 0 for E in exts]
    assert ranks == [0, 0, 1, 0, 0]
    assert exts[2].free.degrees == (-12,)


def test_regular_sequence_quotient_2357():
    R = Ring([2, 3, 5, 7])
    x = R.gens
    M = PresentedModule.quotient(R, [x[2], x[3]])
    rep = regularity_report(M)
    assert local_cohomology_support(M).nonzero_indices() == [2]
    assert local_cohomology_support(M)[2] == -5
    assert rep.weighted == -3 and rep.koszul == 3
    assert rep.koszul_witness == (2, -5)


def test_zero_module_raises():
    R = Ring([1, 1])
    Z = PresentedModule.quotient(R, [R.const(1)])
    with pytest.raises(ZeroModuleError):
        regularity_report(Z)


def test_truncation_weights_1_10():
    R = Ring([1, 10])
    S = PresentedModule.free_module(R)
    assert sorted(truncate(S, 1).twist(1).free.degrees) == [0, 9]
    assert sorted(truncate(S, 7).twist(7).free.degrees) == [0, 3]


def test_min_truncation_of_free_ring_is_its_bottom():
    R = Ring([2, 3, 5])
    assert min_koszul_zero_regular_truncation(PresentedModule.free_module(R)) == 0


def test_min_truncation_of_finite_length_is_top_plus_one():
    for ws in ([1, 2], [2, 3], [1, 1, 3]):
        R = Ring(ws)
        x = R.gens
        M = PresentedModule.quotient(R, [g * g for g in x])
        top = max(d for d in range(0, 4 * sum(ws)) if M.hilbert_function(d))
        assert min_koszul_zero_regular_truncation(M, verify=True) == top + 1


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_grothendieck_vanishing_and_depth(seed):
    M, _ = random_monomial_quotient(seeded(seed), max_vars=3, max_weight=4, max_degree=10)
    lcs = local_cohomology_support(M)
    nz = lcs.nonzero_indices()
    assert min(nz) == depth(M)
    assert max(nz) == krull_dimension(M)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 6))
def test_truncation_predictor_matches_direct_computation(seed, dr):
    M, _ = random_monomial_quotient(seeded(seed), max_vars=3, max_weight=3, max_degree=8)
    r = dr
    T = truncate(M, r).twist(r)
    if T.is_zero():
        return
    assert predicted_truncation_support(M, r) == local_cohomology_support(T).maxdeg


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 6))
def test_truncation_hilbert_function(seed, r):
    M, _ = random_monomial_quotient(seeded(seed), max_vars=3, max_weight=3, max_degree=8)
    T = truncate(M, r)
    for d in range(-2, r + 10):
        assert T.hilbert_function(d) == (M.hilbert_function(d) if d >= r else 0)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_bound_theorems_on_random_quotients(seed):
    M, _ = random_monomial_quotient(seeded(seed), max_vars=3, max_weight=5, max_degree=12)
    for check in (verify_theorem_a, verify_theorem_b, verify_symonds, verify_cor16):
        assert check(M).ok, check(M).violations


def test_cor17_on_maximal_ideal():
    R = Ring([2, 3, 5])
    m = PresentedModule.ideal(R, R.gens)
    rep = verify_cor17(m)
    assert rep.ok and rep.details["r"] == 2


def test_standard_graded_matches_eisenbud_goto():
    for seed in range(8):
        M, _ = random_monomial_quotient(seeded(seed), max_vars=3, max_weight=1, max_degree=6)
        B = betti_table(M)
        classical = max(a - i for (i, a) in B.entries)
        assert koszul_regularity(M) == weighted_regularity(M) == classical


def _finite_length_weighted_zero_regular(rng):
    R = Ring([3, 3])
    a, b = rng.randint(1, 4), rng.randint(1, 4)
    extra = [(i, j) for i in range(a) for j in range(b) if (i, j) != (0, 0) and rng.random() < 0.3]
    exps = [(a, 0), (0, b)] + extra
    M = PresentedModule.quotient(R, [{e: R.field.one} for e in exps])
    top = max(d for d in range(0, 3 * (a + b) + 1) if M.hilbert_function(d))
    return M.twist(top + rng.choice([0, 3]))


def test_finite_length_relations_weights_33():
    rng = seeded(24)
    for _ in range(10):
        M = _finite_length_weighted_zero_regular(rng)
        assert weighted_regularity(M) <= 0
        assert all(a < 4 for a in betti_table(M).degrees(1))


def _rescaling_modules():
    rng = seeded(10)
    return [random_monomial_quotient(rng, max_vars=3, max_weight=4, max_degree=10)[0] for _ in range(10)]


def test_rescaling_preserves_the_regularity_threshold():
    for M in _rescaling_modules():
        g = M.grading
        lcs = local_cohomology_support(M)
        r = koszul_regularity(M)
        for lam in (2, 3):
            r_lam = koszul_regularity(M.rescale(lam))
            # M is Koszul r-regular exactly when its rescaling is Koszul (lam r)-regular
            assert r_lam <= lam * r and not r_lam <= lam * (r - 1)
            # the least integer: H^0 scales plainly, i >= 1 contributes lam (d + w^{i-1}) + 1
            terms = [lam * lcs[0] if i == 0 else lam * (lcs[i] + g.w_upper(i - 1)) + 1
                     for i in lcs.nonzero_indices()]
            assert r_lam == max(terms)


def test_weighted_regularity_does_not_rescale():
    S = PresentedModule.free_module(Ring([1, 1]))
    assert weighted_regularity(S) == 0
    assert weighted_regularity(S.rescale(2)) == -2
