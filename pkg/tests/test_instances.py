import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from spx import (Assignment, Constraint, CspInstance, InvalidInstanceError,
                 Lin2Instance, centered_mean_check, compute_stats,
                 evaluate_csp, evaluate_lin2, hamming_distance,
                 lin2_of_csp_parity, gen_random_csp, gen_random_lin2,
                 sat_clause_family, parity_family)


def test_assignment_mask_round_trip():
    for mask in range(1 << 6):
        x = Assignment.from_mask(mask, 6)
        assert x.to_mask() == mask
        assert all(s in (-1, 1) for s in x.signs)


def test_assignment_flip_is_involution():
    x = Assignment.from_mask(0b1011, 4)
    assert x.flip(2).flip(2) == x
    assert x.flip(1).signs[0] == -x.signs[0]


def test_hamming_distance():
    a = Assignment.from_mask(0b0000, 4)
    b = Assignment.from_mask(0b0101, 4)
    assert hamming_distance(a, b) == 2
    assert hamming_distance(a, a) == 0


def test_lin2_rejects_bad_terms():
    with pytest.raises(InvalidInstanceError):
        Lin2Instance(4, 2, ((frozenset({1}), Fraction(1)),))  # wrong arity
    with pytest.raises(InvalidInstanceError):
        Lin2Instance(4, 2, ((frozenset({1, 5}), Fraction(1)),))  # var out of range
    with pytest.raises(InvalidInstanceError):
        Lin2Instance(4, 2, ((frozenset({1, 2}), Fraction(0)),))  # zero coeff


def test_lin2_aggregation_drops_zeros():
    inst = Lin2Instance.from_terms(4, 2, [
        (frozenset({1, 2}), Fraction(1)),
        (frozenset({2, 1}), Fraction(-1)),
        (frozenset({3, 4}), Fraction(2)),
    ])
    assert len(inst.terms) == 1
    assert not inst.trivial

    empty = Lin2Instance.from_terms(4, 2, [
        (frozenset({1, 2}), Fraction(1)),
        (frozenset({1, 2}), Fraction(-1)),
    ])
    assert empty.trivial


def test_evaluate_lin2_hand_value():
    # H(x) = x1 x2 - 2 x2 x3 at x = (+1, -1, -1): -1 - 2 = -3
    inst = Lin2Instance.from_terms(3, 2, [
        (frozenset({1, 2}), Fraction(1)),
        (frozenset({2, 3}), Fraction(-2)),
    ])
    x = Assignment((1, -1, -1))
    assert evaluate_lin2(inst, x) == Fraction(-3)


def test_constraint_centered_values():
    # a 3-clause: satisfied -> -w, violated -> 7w
    table = (1 << 8) - 1 - 1  # all local assignments except index 0
    c = Constraint((1, 2, 3), Fraction(1), table)
    assert c.num_satisfying == 7
    assert c.violation_value == Fraction(7)
    assert c.lipschitz_factor == Fraction(8, 1)
    assert centered_mean_check(c) == 0


def test_centered_mean_random_tables():
    import random
    rng = random.Random(0)
    for _ in range(50):
        k = rng.choice([1, 2, 3])
        table = rng.randrange(1, (1 << (1 << k)) - 1)
        c = Constraint(tuple(range(1, k + 1)), Fraction(1), table)
        assert centered_mean_check(c) == 0


def test_csp_value_bounds():
    inst = gen_random_csp(8, 3, 12, sat_clause_family(3), 5,
                          weight_choices=(1, Fraction(1, 2)))
    total = Fraction(0)
    for mask in range(1 << 8):
        v = evaluate_csp(inst, Assignment.from_mask(mask, 8))
        assert v >= -inst.total_weight
        total += v
    assert total == 0  # cube average is exactly zero


def test_lin2_cube_average_zero():
    inst = gen_random_lin2(8, 3, 12, (-1, 1, Fraction(2, 3)), 5)
    total = sum(evaluate_lin2(inst, Assignment.from_mask(m, 8))
                for m in range(1 << 8))
    assert total == 0


@settings(deadline=None, max_examples=30)
@given(seed=st.integers(0, 10 ** 6), n=st.integers(6, 14),
       density=st.integers(1, 4))
def test_stats_invariants(seed, n, density):
    inst = gen_random_csp(n, 3, density * n, sat_clause_family(3), seed,
                          weight_choices=(1, 2, Fraction(3, 7)))
    stats = compute_stats(inst)
    assert stats.irregularity >= 1
    assert stats.incident_weight <= 3 * inst.total_weight
    assert len(stats.light_set) >= math.ceil(n / 2)
    assert sum(stats.degrees) == stats.incident_weight


def test_parity_bridge_exhaustive():
    csp = gen_random_csp(8, 3, 10, parity_family(3), 11)
    lin = lin2_of_csp_parity(csp)
    for mask in range(1 << 8):
        x = Assignment.from_mask(mask, 8)
        assert evaluate_lin2(lin, x) == evaluate_csp(csp, x)


def test_parity_bridge_rejects_non_parity():
    csp = gen_random_csp(8, 3, 10, sat_clause_family(3), 11)
    with pytest.raises(InvalidInstanceError):
        lin2_of_csp_parity(csp)
