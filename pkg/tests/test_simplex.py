import random
from fractions import Fraction

import pytest

from greedytree.simplex import linprog_exact
from greedytree.wheel import WheelInstance, _relaxation_rows, cyclic_orderings, lp_relaxation

from oracles import vertex_max

F = Fraction


def test_textbook_problem():
    # max 3x + 5y  s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
    res = linprog_exact([3, 5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18])
    assert res.status == "optimal"
    assert res.x == [2, 6] and res.value == 36


def test_infeasible_and_unbounded():
    assert linprog_exact([1], [[1]], [-1]).status == "infeasible"
    assert not linprog_exact([1], [[1]], [-1]).feasible
    assert linprog_exact([1, 0], [[-1, 1]], [3]).status == "unbounded"


def test_equality_and_negative_rhs():
    # x + y = 5, -x <= -2 (x >= 2); max y -> 3
    res = linprog_exact([0, 1], [[-1, 0]], [-2], [[1, 1]], [5])
    assert res.value == 3 and res.x == [2, 3]


def test_results_are_exact_rationals():
    res = linprog_exact([1, 1], [[3, 1], [1, 3]], [1, 1])
    assert res.value == F(1, 2)
    assert all(isinstance(v, Fraction) for v in res.x)


@pytest.mark.parametrize("seed", range(40))
def test_random_bounded_lps_match_vertex_enumeration(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 3)
    m = rng.randint(1, 4)
    A = [[rng.randint(-3, 5) for _ in range(n)] for _ in range(m)]
    b = [rng.randint(-2, 10) for _ in range(m)]
    A.append([1] * n)  # keep the region bounded
    b.append(rng.randint(1, 12))
    c = [rng.randint(-4, 6) for _ in range(n)]
    expect = vertex_max(c, A, b)
    res = linprog_exact(c, A, b)
    if expect is None:
        assert res.status == "infeasible"
    else:
        assert res.status == "optimal" and res.value == expect


def _random_phi(rng):
    kind = rng.randrange(3)
    if kind == 0:
        return F(180)
    if kind == 1:
        return F(rng.randint(1, 60 * 16), 16)  # (0, 60]
    return F(rng.randint(90 * 16 + 1, 120 * 16), 16)  # (90, 120]


@pytest.mark.parametrize("seed", range(8))
def test_three_corner_relaxation_matches_vertex_enumeration(seed):
    rng = random.Random(1000 + seed)
    phis = WheelInstance([_random_phi(rng) for _ in range(3)], check_range=False).phis
    results = {r.order: r for r in lp_relaxation(WheelInstance(phis, check_range=False))}
    for order in cyclic_orderings(3):
        A, b, eq, beq = _relaxation_rows([phis[k] for k in order])
        best = vertex_max([0] * 6 + [1], A, b, eq, beq)
        if best is None:
            assert not results[order].feasible and results[order].eps is None
        else:
            assert results[order].eps == best
            assert results[order].feasible == (best > 0)
