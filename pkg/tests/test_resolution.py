from hypothesis import given, settings, strategies as st

from helpers import seeded
from koszulreg import PresentedModule, QQ, Ring
from koszulreg.core import FreeModule
from koszulreg.regularity import random_monomial_quotient
from koszulreg.resolution import (BettiTable, betti_table, depth, is_cohen_macaulay,
                                  koszul_complex, krull_dimension, tor_via_koszul)


def maximal_ideal(weights):
    R = Ring(weights)
    return R, PresentedModule.ideal(R, R.gens)


def same_table_pair():
    R = Ring([1, 2])
    x0, x1 = R.gens
    m = PresentedModule.ideal(R, R.gens)
    M = PresentedModule.coker(R, [1, 2], [[x1, 0]])
    return R, m, M


def test_resolution_of_maximal_ideal_235():
    _, m = maximal_ideal([2, 3, 5])
    C = m.resolution()
    assert C.twists() == [[2, 3, 5], [5, 7, 8], [10]]
    assert C.check() and C.is_minimal()
    assert depth(m) == 1


def test_betti_format_same_table_pair():
    _, m, M = same_table_pair()
    assert betti_table(m).format() == "   0 1\n1: 1 .\n2: 1 1"
    assert betti_table(M) == betti_table(m)


def test_redundant_presentation_minimizes():
    R = Ring([1, 2])
    x0, x1 = R.gens
    # generators e1 (deg 1), e2, e3 (deg 2) with e3 = x0 e1 and x1 e1 = 0
    M = PresentedModule.coker(R, [1, 2, 2], [[x1, 0, 0], [-x0, 0, R.const(1)]])
    _, m, _ = same_table_pair()
    assert betti_table(M) == betti_table(m)


def test_koszul_pattern_of_regular_sequence():
    R = Ring([2, 3, 5, 7])
    x = R.gens
    M = PresentedModule.quotient(R, [x[2], x[3]])
    B = betti_table(M)
    assert B.entries == {(0, 0): 1, (1, 5): 1, (1, 7): 1, (2, 12): 1}
    assert depth(M) == 2 and krull_dimension(M) == 2 and is_cohen_macaulay(M)
    # 2a + 3b = 5 has the single solution x0*x1
    assert M.hilbert_function(5) == 1
    assert M.hilbert_function(6) == 2


def test_koszul_complex_degrees_and_square_zero():
    R = Ring([2, 3, 5])
    K = koszul_complex(R)
    assert sorted(K.modules[2].degrees) == [5, 7, 8]
    assert K.check()


def test_tor_via_koszul_agrees_on_same_table_pair():
    _, m, M = same_table_pair()
    for N in (m, M):
        B = betti_table(N)
        for i in range(3):
            for a in range(11):
                assert tor_via_koszul(N, i, a) == B[(i, a)]


def test_betti_json_round_trip():
    _, m = maximal_ideal([2, 3, 5])
    B = betti_table(m)
    data = B.to_json("QQ")
    assert data["field"] == "QQ"
    assert BettiTable.from_json(data, m.grading) == B


def test_multigraded_flat_print_sorted():
    R = Ring([(1, 0), (0, 1)])
    B = betti_table(PresentedModule.ideal(R, R.gens))
    assert B.entries == {(0, (1, 0)): 1, (0, (0, 1)): 1, (1, (1, 1)): 1}


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_euler_characteristic_reproduces_hilbert_function(seed):
    M, _ = random_monomial_quotient(seeded(seed), max_vars=3, max_weight=4, max_degree=10)
    g = M.grading
    B = betti_table(M)
    for d in range(0, 16):
        alt = sum((-1) ** i * c * len(g.monomials(d - a)) for (i, a), c in B.entries.items() if d >= a)
        assert alt == M.hilbert_function(d)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_resolution_is_a_minimal_complex(seed):
    M, _ = random_monomial_quotient(seeded(seed), max_vars=3, max_weight=4, max_degree=10)
    C = M.resolution()
    assert C.check() and C.is_minimal()
    assert 0 <= depth(M) <= krull_dimension(M) <= M.ring.nvars


def test_free_module_resolution_is_trivial():
    R = Ring([1, 3])
    M = PresentedModule.free_module(R, [0, 2])
    assert betti_table(M).entries == {(0, 0): 1, (0, 2): 1}
    assert depth(M) == 2
