from fractions import Fraction

import pytest

from spx import (Assignment, DegenerateInstanceError, Lin2Instance,
                 OracleCapExceeded, brute_force_minimum,
                 correlated_expectation_enumeration,
                 exact_correlated_expectation, exact_landing_probability,
                 gen_random_csp, gen_random_lin2, sat_clause_family,
                 sublevel_counts, successful_set_count_correlated,
                 threshold_set_count)

HALF = Fraction(1, 2)


def test_frozen_lin2_oracle_values():
    # Fixed generator seed; values frozen from an independent full sweep.
    inst = gen_random_lin2(12, 3, 24, (-1, 1), 0)
    res = brute_force_minimum(inst, with_histogram=True)
    assert res.h_min == Fraction(-16)
    assert res.minimizer_count == 2
    assert [m.to_mask() for m in res.minimizers] == [1102, 3669]
    assert sum(res.value_histogram.values()) == 1 << 12
    assert threshold_set_count(inst, res.h_min, HALF) == 325
    assert threshold_set_count(inst, res.h_min, Fraction(1, 4)) == 41
    assert successful_set_count_correlated(inst, res.minimizers[0],
                                           res.h_min, HALF) == 166


def test_frozen_csp_oracle_values():
    inst = gen_random_csp(12, 3, 24, sat_clause_family(3), 0)
    res = brute_force_minimum(inst, cap_minimizers=512)
    assert res.h_min == Fraction(-24)
    assert res.minimizer_count == 229


def test_minimizers_are_minimal_and_sorted():
    inst = gen_random_lin2(10, 2, 15, (-1, 1, 2), 7)
    res = brute_force_minimum(inst)
    assert res.minimizer_count == 4
    masks = [m.to_mask() for m in res.minimizers]
    assert masks == sorted(masks)
    from spx import evaluate_lin2
    for m in res.minimizers:
        assert evaluate_lin2(inst, m) == res.h_min


def test_engine_cross_check_big_coefficients():
    # Scaling every coefficient by a huge rational forces the exact
    # big-integer enumeration path; the optimum must scale with it.
    base = gen_random_lin2(10, 3, 20, (-1, 1), 3)
    big = Fraction(10 ** 25, 3)
    scaled = Lin2Instance(base.n, base.k,
                          tuple((s, c * big) for s, c in base.terms))
    r1 = brute_force_minimum(base)
    r2 = brute_force_minimum(scaled)
    assert r2.h_min == big * r1.h_min
    assert [m.to_mask() for m in r2.minimizers] == \
        [m.to_mask() for m in r1.minimizers]


def test_sublevel_counts_monotone():
    inst = gen_random_lin2(10, 3, 20, (-1, 1), 1)
    res = brute_force_minimum(inst)
    bounds = [res.h_min, res.h_min / 2, Fraction(0)]
    counts = sublevel_counts(inst, bounds)
    assert counts[0] == res.minimizer_count
    assert counts == sorted(counts)
    assert counts[-1] <= 1 << 10


def test_threshold_refuses_nonnegative_optimum():
    inst = Lin2Instance.from_terms(4, 2, [])
    with pytest.raises(DegenerateInstanceError):
        threshold_set_count(inst, Fraction(0), HALF)


def test_oracle_cap():
    inst = gen_random_lin2(10, 3, 20, (-1, 1), 1)
    with pytest.raises(OracleCapExceeded):
        brute_force_minimum(inst, n_cap=8)


def test_correlated_expectation_closed_form_vs_enumeration():
    inst = gen_random_lin2(10, 3, 15, (-1, 1), 5)
    res = brute_force_minimum(inst)
    x_star = res.minimizers[0]
    for q in (Fraction(0), Fraction(1, 8), Fraction(1, 4), HALF):
        closed = exact_correlated_expectation(inst, x_star, q)
        assert closed == correlated_expectation_enumeration(inst, x_star, q)
    assert exact_correlated_expectation(inst, x_star, HALF) == 0
    assert exact_correlated_expectation(inst, x_star, Fraction(0)) == res.h_min


def test_frozen_landing_probability():
    inst = gen_random_lin2(12, 3, 24, (-1, 1), 0)
    res = brute_force_minimum(inst)
    p = exact_landing_probability(inst, res.minimizers[0], Fraction(1, 8), HALF)
    assert p == Fraction(31593518173, 68719476736)  # frozen exact value


def test_landing_probability_tail_bound():
    inst = gen_random_lin2(10, 3, 15, (-1, 1), 9)
    res = brute_force_minimum(inst)
    if res.h_min >= 0:
        pytest.skip("degenerate draw")
    x_star = res.minimizers[0]
    for q in (Fraction(1, 16), Fraction(1, 8)):
        for eta in (Fraction(1, 4), HALF, Fraction(3, 4)):
            rho = 1 - 2 * q
            lower = 1 - (1 - rho ** inst.k) / eta
            p = exact_landing_probability(inst, x_star, q, eta)
            if lower >= 0:
                assert p >= lower
