import math
import random

import pytest

import distopt

SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]


def test_select_unit_square():
    assert distopt.select_distance(SQUARE, 1)["value_sq"] == 1.0
    res = distopt.select_distance(SQUARE, 6, seed=3)
    assert res["value"] == pytest.approx(math.sqrt(2))
    assert res["stats"]["shrink_rounds"] is None


def test_select_matches_oracle():
    rng = random.Random(1)
    pts = [(rng.random(), rng.random()) for _ in range(150)]
    for k in (1, 500, 11175):
        assert distopt.select_distance(pts, k)["value_sq"] == distopt.oracle.kth(pts, k)


def test_bipartite_and_count():
    assert distopt.select_distance_bipartite([(0, 0)], [(1, 0), (3, 0)], 2)["value"] == 3.0
    for s in ("brute", "grid", "brs"):
        assert distopt.count_pairs_at_most(SQUARE, 1.0, s) == 4


def test_brs_covers():
    gamma, pi = distopt.partial_brs([(0, 0)], [(1, 0)], 0.5, 1.5)
    pairs = [(a, b) for sa, sb in gamma + pi for a in sa for b in sb]
    assert pairs == [(0, 0)]
    full = distopt.complete_brs([(0, 0)], [(0, 1), (0, 3)], 0, 2)
    assert sum(len(a) * len(b) for a, b in full) == 1


def test_frechet():
    seq = [(0, 0), (1, 0)]
    assert distopt.dfd2(seq, seq)["value"] == 1.0
    a = [(0, 0), (10, 0)]
    b = [(0, 1), (5, 1), (10, 1)]
    assert distopt.dfd1(a, b)["value_sq"] == 26.0
    assert not distopt.dfd_decide(a, b, 1.0, two_sided=False)
    assert distopt.oracle.dfd1(a, b) == 26.0


def test_rsp_chain():
    chain = [(i, 0) for i in range(10)]
    assert distopt.rsp(chain, 0, 9, 3)["value_sq"] == 9.0
    assert distopt.oracle.rsp(chain, 0, 9, 1) == 81.0


def test_errors():
    with pytest.raises(IndexError):
        distopt.select_distance(SQUARE, 7)
    with pytest.raises(ValueError):
        distopt.select_distance([(0, float("nan")), (1, 1)], 1)
    with pytest.raises(RuntimeError):
        distopt.rsp([(0, 0), (5, 0)], 0, 1, 0)
