import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from spx import (binary_entropy, brute_force_minimum, case2_corollary_bound,
                 classical_exponent_case1, classical_exponent_case2,
                 compute_stats, flip_rates, gen_random_csp, lipschitz_params,
                 mcdiarmid_gamma, quantum_comparison, sat_clause_family,
                 threshold_set_count, verify_binomial_bounds)

HALF = Fraction(1, 2)


def test_entropy_known_values():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == 1.0
    assert abs(binary_entropy(0.25) - 0.8112781244591328) < 1e-15


def test_entropy_properties_grid():
    prev = 0.0
    for i in range(513):
        t = i / 1024
        h = binary_entropy(t)
        assert abs(h - binary_entropy(1 - t)) <= 1e-12
        assert h + 1e-12 >= 2 * t
        assert h + 1e-12 >= prev
        prev = h


def test_flip_rates_closed_form():
    rates = flip_rates(HALF, 3, 12)
    # q = (1 - (1/2)^(1/3)) / 2
    assert abs(rates.q_eta - 0.10314973700795014) < 1e-12
    assert 0 < rates.q_eta_n < rates.q_eta
    assert rates.r_ns == math.ceil(rates.q_eta * 12 + 2 * 12 ** (2 / 3))


@settings(deadline=None, max_examples=60)
@given(k=st.integers(1, 6), num=st.integers(1, 15))
def test_flip_rate_lower_bound(k, num):
    eta = Fraction(num, 16)
    rates = flip_rates(eta, k, 100)
    assert rates.q_eta >= float(eta / (2 * k)) - 1e-15


def test_case1_exponent_report():
    rep = classical_exponent_case1(1.0, HALF, 3)
    assert rep.regime == "correlated-pair"
    assert abs(rep.kappa - 0.4789012388442574) < 1e-12
    assert rep.c_cl == min(1.0, rep.kappa)
    assert rep.c_cl >= rep.coarse_lower_bound - 1e-15
    cq, ratio = quantum_comparison(rep, 3)
    assert ratio > 1


def test_case2_frozen_values():
    inst = gen_random_csp(12, 3, 24, sat_clause_family(3), 0)
    res = brute_force_minimum(inst)
    stats = compute_stats(inst)
    assert stats.lambda_max == Fraction(8)
    assert stats.incident_weight == Fraction(72)
    gamma = mcdiarmid_gamma(stats, res.h_min, HALF)
    assert abs(gamma - 0.0011462089837571215) < 1e-12
    theta, r_lip = lipschitz_params(stats, res.h_min, HALF)
    assert theta == Fraction(1, 48)
    assert r_lip == 0


def test_mcdiarmid_bound_vs_oracle():
    for seed in range(6):
        inst = gen_random_csp(12, 3, 24, sat_clause_family(3), seed)
        res = brute_force_minimum(inst)
        if res.h_min >= 0:
            continue
        stats = compute_stats(inst)
        for eta in (Fraction(1, 4), HALF, Fraction(3, 4)):
            gamma = mcdiarmid_gamma(stats, res.h_min, eta)
            count = threshold_set_count(inst, res.h_min, eta)
            assert math.log2(count) <= (1 - gamma) * inst.n + 1e-9


def test_case2_report_and_corollary():
    inst = gen_random_csp(12, 3, 24, sat_clause_family(3), 0)
    res = brute_force_minimum(inst)
    stats = compute_stats(inst)
    rep = classical_exponent_case2(stats, res.h_min)
    assert rep.regime == "local-lipschitz"
    assert rep.c_cl == min(rep.gamma, rep.kappa)
    bound = case2_corollary_bound(stats, res.h_min, 3)
    assert rep.c_cl >= bound - 1e-9
    delta = float(abs(res.h_min) / inst.m)
    cq, ratio = quantum_comparison(rep, 3, delta=delta,
                                   irregularity=float(stats.irregularity))
    assert ratio > 1


def test_binomial_bounds_small_grid():
    for n in range(1, 120):
        for i in range(0, 33, 2):
            chk = verify_binomial_bounds(n, Fraction(i, 64))
            assert chk.passed, (n, i)


def test_binomial_bound_exactness_at_layer():
    # The layer bound is exactly 2^(N h(r/N)) <= (N+1) C(N, r); check the
    # reported margins are nonnegative too.
    chk = verify_binomial_bounds(64, Fraction(1, 4))
    assert chk.passed
    assert chk.layer_margin_log2 >= -1e-12
    assert chk.rounded_margin_log2 >= -1e-12
