from fractions import Fraction

import pytest

from spx import (DegenerateInstanceError, Lin2Instance, RankedBudgetError,
                 RngStream, bounded_sweep_solve, brute_force_minimum,
                 gen_random_csp, gen_random_lin2, ranked_solve, search_bounded,
                 sat_clause_family, solve_case1, solve_case2,
                 threshold_set_count, successful_set_count_correlated)

HALF = Fraction(1, 2)
TENTH = Fraction(1, 10)


def _lin2(seed, n=12):
    for s in range(seed, seed + 30):
        inst = gen_random_lin2(n, 3, 2 * n, (-1, 1), s)
        res = brute_force_minimum(inst)
        if res.h_min < 0:
            return inst, res
    raise RuntimeError


def _csp(seed, n=12):
    for s in range(seed, seed + 30):
        inst = gen_random_csp(n, 3, 2 * n, sat_clause_family(3), s)
        res = brute_force_minimum(inst)
        if res.h_min < 0:
            return inst, res
    raise RuntimeError


def test_case1_finds_certified_optimum():
    inst, res = _lin2(0)
    out = solve_case1(inst, res.h_min, HALF, RngStream(1))
    assert out.certified_optimal
    assert out.value == res.h_min
    assert out.iterations >= 1 and out.raw_draws >= 1


def test_case1_deterministic_per_seed():
    inst, res = _lin2(5)
    a = solve_case1(inst, res.h_min, HALF, RngStream(9))
    b = solve_case1(inst, res.h_min, HALF, RngStream(9))
    assert (a.best, a.value, a.iterations, a.raw_draws, a.ball_points) == \
        (b.best, b.value, b.iterations, b.raw_draws, b.ball_points)


def test_case1_trivial_instance():
    inst = Lin2Instance.from_terms(8, 2, [])
    out = solve_case1(inst, Fraction(0), HALF, RngStream(0))
    assert out.certified_optimal and out.value == 0


def test_case1_budget_exhaustion_uncertified():
    inst, res = _lin2(3)
    out = solve_case1(inst, 2 * res.h_min, HALF, RngStream(2), budget=3000)
    assert not out.certified_optimal
    assert out.cost <= 3000 + 1024  # one trailing batch of slack


def test_case2_finds_certified_optimum():
    inst, res = _csp(0)
    out = solve_case2(inst, res.h_min, HALF, RngStream(4))
    assert out.certified_optimal
    assert out.value == res.h_min


def test_case2_refuses_degenerate():
    inst = gen_random_csp(8, 3, 4, sat_clause_family(3), 0)
    with pytest.raises(DegenerateInstanceError):
        solve_case2(inst, Fraction(0), HALF, RngStream(0))


def test_expected_iterations_tracks_set_ratio():
    inst, res = _lin2(7, n=12)
    t = threshold_set_count(inst, res.h_min, HALF)
    s = successful_set_count_correlated(inst, res.minimizers[0], res.h_min, HALF)
    runs = 200
    total = 0
    for i in range(runs):
        out = solve_case1(inst, res.h_min, HALF, RngStream(1000 + i))
        assert out.certified_optimal
        total += out.iterations
    assert total / runs <= 4 * t / s


def test_ranked_solve_recovers_optimum():
    hits = 0
    for i in range(20):
        inst, res = _lin2(100 + 5 * i, n=12)
        out = ranked_solve(inst, HALF, 1.0, TENTH, RngStream(50 + i))
        if out.value == res.h_min:
            hits += 1
    assert hits >= 17


def test_ranked_solve_budget_error():
    inst, _res = _lin2(2)
    with pytest.raises(RankedBudgetError):
        ranked_solve(inst, HALF, 1.0, TENTH, RngStream(0), budget=10)


def test_search_bounded_one_sided_below_optimum():
    inst, res = _csp(20)
    below = res.h_min * Fraction(5, 4)
    for i in range(30):
        r = search_bounded(inst, below, HALF, TENTH, RngStream(i))
        assert r.kind in ("null", "budget")


def test_search_bounded_rejects_nonnegative_bound():
    inst, _ = _csp(0)
    with pytest.raises(DegenerateInstanceError):
        search_bounded(inst, Fraction(1), HALF, TENTH, RngStream(0))


def test_search_bounded_witness_is_valid():
    inst, res = _csp(30)
    r = search_bounded(inst, res.h_min, HALF, TENTH, RngStream(3))
    if r.kind == "solution":
        assert r.value <= res.h_min


def test_bounded_sweep_solves_exactly():
    for i in range(5):
        inst, res = _csp(40 + 3 * i)
        out, trace = bounded_sweep_solve(inst, HALF, TENTH, RngStream(60 + i))
        assert out.value == res.h_min or not out.certified_optimal
        if out.certified_optimal:
            assert out.value == res.h_min
        assert trace.stage_budgets == sorted(trace.stage_budgets, reverse=True)


def test_bounded_sweep_deterministic():
    inst, _res = _csp(50)
    a, ta = bounded_sweep_solve(inst, HALF, TENTH, RngStream(8))
    b, tb = bounded_sweep_solve(inst, HALF, TENTH, RngStream(8))
    assert (a.best, a.value, a.raw_draws, a.ball_points) == \
        (b.best, b.value, b.raw_draws, b.ball_points)
    assert ta.stage_kinds == tb.stage_kinds
