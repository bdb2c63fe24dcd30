import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricgauss.families import box_points, hexagon, pnN_points, simplex_points, singular_surface
from toricgauss.gauss import BudgetExceeded, NotGenericallySpanned, compute_Bk
from toricgauss.linalg import det_exact
from toricgauss.oracle import (
    Mismatch,
    brute_force_Bk,
    brute_force_subsets,
    cofactor_det,
    cross_check,
    elimination_det,
    monomial_jet,
)
from toricgauss.polytope import PointConfiguration

from conftest import corpus_fixtures

small = st.integers(-4, 4)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n),
                                                    min_size=n, max_size=n)))
def test_determinants_agree(m):
    assert cofactor_det(m) == elimination_det(m) == det_exact(m)


def test_monomial_jet():
    # d^2/dx dy of x^3 y^-2 at (1, 1) is 3 * -2
    assert monomial_jet((3, -2), (1, 1)) == -6
    assert monomial_jet((2, 0), (3, 0)) == 0
    assert monomial_jet((5,), (0,)) == 1


def test_singular_surface():
    assert brute_force_subsets(singular_surface(), 2) == [(0, 1, 2, 3, 4, 5)]
    assert brute_force_Bk(singular_surface(), 2) == [(5, 4)]


def test_line():
    assert brute_force_Bk([(0,), (1,), (2,)], 1) == [(1,), (2,), (3,)]


def test_repeated_sums_are_merged():
    # several nonsingular subsets of a centrally symmetric hexagon share a sum
    subsets = brute_force_subsets(hexagon(), 1)
    sums = brute_force_Bk(hexagon(), 1)
    assert len(sums) < len(subsets)
    report = cross_check(hexagon(), 1)
    assert report.b_k_size == len(sums) and report.nonsingular_subsets == len(subsets)


def test_not_spanned_both_paths():
    cfg = box_points([1, 1])
    with pytest.raises(NotGenericallySpanned):
        brute_force_subsets(cfg, 2)
    with pytest.raises(NotGenericallySpanned):
        compute_Bk(cfg, 2)
    with pytest.raises(NotGenericallySpanned):
        cross_check(PointConfiguration.from_points([(0, 0), (1, 1), (2, 2), (3, 3)]), 1)


def test_budget():
    with pytest.raises(BudgetExceeded):
        brute_force_subsets(box_points([3, 3]), 3, budget=100)


def test_mismatch_names_element(monkeypatch):
    import toricgauss.oracle as oracle

    monkeypatch.setattr(oracle, "compute_Bk", lambda A, k, threads=1: [(0, 0)])
    with pytest.raises(Mismatch) as err:
        cross_check(singular_surface(), 2)
    assert err.value.element == (0, 0)


FIXTURES = [(n, doc) for n, doc, _ in corpus_fixtures()
            if comb(len(doc["points"]), comb(len(doc["points"][0]) + doc["order"], doc["order"])) <= 10**5]


@pytest.mark.parametrize("name,doc", FIXTURES, ids=[n for n, _ in FIXTURES])
def test_cross_check_corpus(name, doc):
    report = cross_check(doc["points"], doc["order"])
    assert report.to_dict()["status"] == "pass"


@pytest.mark.parametrize("seed", range(15))
def test_cross_check_random(seed):
    rng = random.Random(seed)
    n = rng.choice([1, 2, 2, 3])
    k = rng.choice([1, 2]) if n < 3 else 1
    q = comb(n + k, k)
    pts = set()
    while len(pts) < q + rng.randint(0, 3):
        pts.add(tuple(rng.randint(-2, 3) for _ in range(n)))
    try:
        cross_check(sorted(pts), k)
    except NotGenericallySpanned:
        with pytest.raises(NotGenericallySpanned):
            compute_Bk(sorted(pts), k)


def test_large_minors_use_elimination():
    # q = 10 > 7 exercises the rational elimination path
    assert brute_force_Bk(simplex_points(3, 2), 2) == compute_Bk(simplex_points(3, 2), 2)
    assert brute_force_Bk(pnN_points(3, 2), 2) == compute_Bk(pnN_points(3, 2), 2)
