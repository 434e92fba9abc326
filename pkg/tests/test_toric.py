import itertools

import pytest

from koszulreg import PresentedModule, GradingError
from koszulreg.resolution import betti_table
from koszulreg.toric import (CoxData, FanData, FanError, betti_polytope, check_containment,
                             hirzebruch_example_module, hirzebruch_fan, lemma_technical_check,
                             multigraded_truncate, primitive_collections, product_fan,
                             projective_space_fan, weighted_projective_fan)


def brute_primitive_collections(fan):
    n = len(fan.rays)
    cones = [set(c) for c in fan.cones]
    in_cone = lambda s: any(s <= c for c in cones)
    out = []
    for k in range(1, n + 1):
        for s in itertools.combinations(range(n), k):
            s = set(s)
            if not in_cone(s) and all(in_cone(s - {i}) for i in s):
                out.append(tuple(sorted(s)))
    return sorted(out)


@pytest.fixture(scope="module")
def hirz():
    return CoxData(hirzebruch_fan())


def test_hirzebruch_cox_data(hirz):
    assert hirz.degrees == [(1, 0), (-3, 1), (1, 0), (0, 1)]
    assert hirz.collections == [(0, 2), (1, 3)]
    assert sorted(hirz.irrelevant) == sorted([(1, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 1), (1, 0, 0, 1)])
    assert hirz.functionals == {(0, 2): (1, 0), (1, 3): (0, 1)}
    assert [hirz.w_I((0, 2), j) for j in range(5)] == [0, 1, 2, 2, 2]
    assert [hirz.w_I((1, 3), j) for j in range(5)] == [0, 1, 2, 2, 2]


@pytest.mark.parametrize("fan", [hirzebruch_fan(), product_fan([1, 1]), projective_space_fan(3),
                                 product_fan([1, 2]), weighted_projective_fan([2, 3, 5])])
def test_primitive_collections_brute_force(fan):
    assert sorted(primitive_collections(fan)) == brute_primitive_collections(fan)


def test_deg_functional_positive_exactly_on_collection():
    for fan in (hirzebruch_fan(), product_fan([1, 2])):
        cox = CoxData(fan)
        for I in cox.collections:
            lam = cox.functionals[I]
            vals = [sum(a * b for a, b in zip(lam, d)) for d in cox.degrees]
            assert all(v > 0 for i, v in enumerate(vals) if i in I)


def test_weighted_projective_recovers_weights():
    cox = CoxData(weighted_projective_fan([2, 3, 5]))
    assert cox.degrees == [(2,), (3,), (5,)]
    assert cox.w_I(cox.collections[0], 2) == 8


def test_torsion_class_group_rejected():
    with pytest.raises(GradingError):
        CoxData(FanData([(2, -1), (-1, 2), (-1, -1)], [(0, 1), (1, 2), (2, 0)]))


def test_bad_fans_rejected():
    with pytest.raises(FanError):
        FanData([(1, 0), (0, 1), (1, 1)], [(0, 1, 2)])
    with pytest.raises(FanError):
        FanData([(1, 0), (0, 1), (-1, 0)], [(0, 1)])


def test_product_space_truncation_closed_form():
    cox = CoxData(product_fan([1, 1]))
    S = PresentedModule.free_module(cox.ring, [(0, 0)])
    for a, b in [(1, 1), (2, 1), (2, 3)]:
        T = multigraded_truncate(S, (a, b))
        assert T.free.rank == (a + 1) * (b + 1)
        assert set(T.free.degrees) == {(0, 0)}
        assert T.heuristic


def test_hirzebruch_example_resolution(hirz):
    M = hirzebruch_example_module(hirz)
    C = M.resolution()
    from collections import Counter
    assert [Counter(F.degrees) for F in C.modules] == [
        Counter({(0, 0): 6}),
        Counter({(-3, 1): 2, (0, 1): 3, (1, 0): 5}),
        Counter({(-2, 1): 1, (1, 1): 3}),
    ]
    rep = check_containment(M, hirz)
    assert rep.ok and rep.torsion_free
    for I in hirz.collections:
        assert lemma_technical_check(M, I)["ok"]


def test_polytope_for_hirzebruch(hirz):
    P = betti_polytope(hirz, 1)
    assert P.upper == [((1, 0), 1), ((0, 1), 1)]
    assert P.contains((1, 1)) and not P.contains((2, 0))
