"""Aggregated invariant suite.

Every library module states invariants in its docstrings/tests; this
module re-runs them as one named pass/fail battery at a chosen scale so
the CLI can certify an installation (`spx verify`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exponents import (binary_entropy, case2_corollary_bound,
                        classical_exponent_case1, classical_exponent_case2,
                        flip_rates, lipschitz_params, mcdiarmid_gamma,
                        quantum_comparison, verify_binomial_bounds)
from .formats import (gen_planted_csp, gen_random_csp, gen_random_lin2,
                      parse_instance, parity_family, sat_clause_family,
                      write_instance)
from .instances import (Assignment, CspInstance, centered_mean_check,
                        compute_stats, evaluate_csp, evaluate_lin2,
                        hamming_distance, lin2_of_csp_parity)
from .oracle import (brute_force_minimum, exact_correlated_expectation,
                     correlated_expectation_enumeration,
                     exact_landing_probability, threshold_set_count)
from .sampling import (BallSpec, RngStream, ball_search_min, enumerate_ball,
                       in_typical_shell, rejection_sample_threshold)
from .solvers import bounded_sweep_solve, search_bounded, solve_case1, solve_case2

_HALF = Fraction(1, 2)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _scale_params(scale: str):
    if scale == "small":
        return {"n": 10, "rounds": 20, "samples": 2000}
    if scale == "medium":
        return {"n": 14, "rounds": 60, "samples": 20000}
    raise ValueError(f"unknown scale {scale!r} (use small or medium)")


def _nontrivial_lin2(n, k, m, seed):
    """A random Lin2 instance together with its oracle summary,
    re-seeded until the optimum is strictly negative."""
    for s in range(seed, seed + 50):
        inst = gen_random_lin2(n, k, m, (-1, 1), s)
        res = brute_force_minimum(inst)
        if res.h_min < 0:
            return inst, res
    raise RuntimeError("could not generate a nontrivial instance")


def _nontrivial_csp(n, k, m, seed, family=None):
    family = family or sat_clause_family(k)
    for s in range(seed, seed + 50):
        inst = gen_random_csp(n, k, m, family, s)
        res = brute_force_minimum(inst)
        if res.h_min < 0:
            return inst, res
    raise RuntimeError("could not generate a nontrivial instance")


def check_centered_mean(p) -> CheckResult:
    bad = 0
    for s in range(p["rounds"]):
        inst = gen_random_csp(8, 3, 10, sat_clause_family(3), s)
        bad += sum(1 for c in inst.constraints if centered_mean_check(c) != 0)
    return CheckResult("centered-mean-zero", bad == 0, f"{bad} nonzero means")


def check_cube_average_zero(p) -> CheckResult:
    from .evalcore import scale_instance
    from .oracle import _blocks
    from .evalcore import values_for_masks
    for s in range(4):
        for inst in (gen_random_lin2(p["n"], 3, 2 * p["n"], (-1, 1, 2), s),
                     gen_random_csp(p["n"], 3, 2 * p["n"], sat_clause_family(3), s)):
            scaled = scale_instance(inst)
            total = 0
            for masks in _blocks(inst.n):
                total += int(values_for_masks(scaled, masks).sum())
            if total != 0:
                return CheckResult("cube-average-zero", False,
                                   f"seed {s}: cube sum {total}")
    return CheckResult("cube-average-zero", True)


def check_csp_floor(p) -> CheckResult:
    for s in range(4):
        inst = gen_random_csp(10, 3, 15, sat_clause_family(3), s,
                              weight_choices=(1, 2, Fraction(1, 3)))
        res = brute_force_minimum(inst)
        if res.h_min < -inst.total_weight:
            return CheckResult("csp-value-floor", False,
                               f"H_min {res.h_min} below -W {-inst.total_weight}")
    return CheckResult("csp-value-floor", True)


def check_stats_invariants(p) -> CheckResult:
    for s in range(p["rounds"]):
        inst = gen_random_csp(12, 3, 20, sat_clause_family(3), s,
                              weight_choices=(1, 3, Fraction(2, 5)))
        st = compute_stats(inst)
        if st.irregularity < 1:
            return CheckResult("stats-invariants", False, "D < 1")
        if st.incident_weight > 3 * inst.total_weight:
            return CheckResult("stats-invariants", False, "Sigma > kW")
        if len(st.light_set) < math.ceil(inst.n / 2):
            return CheckResult("stats-invariants", False, "light set too small")
    return CheckResult("stats-invariants", True)


def check_parity_bridge(p) -> CheckResult:
    for s in range(6):
        csp = gen_random_csp(8, 3, 10, parity_family(3), s)
        lin = lin2_of_csp_parity(csp)
        for mask in range(1 << 8):
            x = Assignment.from_mask(mask, 8)
            if evaluate_lin2(lin, x) != evaluate_csp(csp, x):
                return CheckResult("parity-bridge", False, f"seed {s} mask {mask}")
    return CheckResult("parity-bridge", True)


def check_round_trip(p) -> CheckResult:
    for s in range(p["rounds"]):
        for inst in (gen_random_lin2(12, 3, 18, (-1, 1, Fraction(3, 7)), s),
                     gen_random_csp(12, 3, 18, sat_clause_family(3), s,
                                    weight_choices=(1, Fraction(5, 2)))):
            if parse_instance(write_instance(inst)) != inst:
                return CheckResult("format-round-trip", False, f"seed {s}")
    return CheckResult("format-round-trip", True)


def check_correlated_identity(p) -> CheckResult:
    for s in range(6):
        inst, res = _nontrivial_lin2(10, 3, 15, 100 + s)
        x_star = res.minimizers[0]
        for q in (Fraction(0), Fraction(1, 8), Fraction(1, 4), _HALF):
            closed = exact_correlated_expectation(inst, x_star, q)
            enum = correlated_expectation_enumeration(inst, x_star, q)
            if closed != enum:
                return CheckResult("correlated-expectation-identity", False,
                                   f"seed {s} q={q}: {closed} vs {enum}")
    return CheckResult("correlated-expectation-identity", True)


def check_landing_bound(p) -> CheckResult:
    for s in range(6):
        inst, res = _nontrivial_lin2(10, 3, 15, 200 + s)
        x_star = res.minimizers[0]
        for eta in (Fraction(1, 4), _HALF, Fraction(3, 4)):
            rates = flip_rates(eta, inst.k, inst.n)
            q = rates.q_eta
            rho = 1 - 2 * q
            lower = 1 - (1 - rho ** inst.k) / eta
            prob = exact_landing_probability(inst, x_star, q, eta)
            if lower >= 0 and prob < lower:
                return CheckResult("landing-probability-bound", False,
                                   f"seed {s} eta={eta}: {prob} < {lower}")
    return CheckResult("landing-probability-bound", True)


def check_mcdiarmid_bound(p) -> CheckResult:
    for s in range(10):
        inst, res = _nontrivial_csp(p["n"], 3, 2 * p["n"], 300 + s)
        st = compute_stats(inst)
        for eta in (Fraction(1, 4), _HALF, Fraction(3, 4)):
            gamma = mcdiarmid_gamma(st, res.h_min, eta)
            count = threshold_set_count(inst, res.h_min, eta)
            if math.log2(count) > (1 - gamma) * inst.n + 1e-9:
                return CheckResult("mcdiarmid-threshold-bound", False,
                                   f"seed {s} eta={eta}: |T|={count}")
    return CheckResult("mcdiarmid-threshold-bound", True)


def check_entropy_properties(p) -> CheckResult:
    prev = 0.0
    for i in range(0, 513):
        t = i / 1024
        h, hs = binary_entropy(t), binary_entropy(1 - t)
        if abs(h - hs) > 1e-12 or h + 1e-12 < 2 * t or h + 1e-12 < prev:
            return CheckResult("entropy-properties", False, f"t={t}")
        prev = h
    return CheckResult("entropy-properties", True)


def check_flip_rate_bound(p) -> CheckResult:
    for k in range(1, 7):
        for num in range(1, 16):
            eta = Fraction(num, 16)
            rates = flip_rates(eta, k, 64)
            if rates.q_eta < eta / (2 * k):
                return CheckResult("flip-rate-lower-bound", False,
                                   f"k={k} eta={eta}")
    return CheckResult("flip-rate-lower-bound", True)


def check_binomial_bounds(p) -> CheckResult:
    n_max = 200 if p["n"] <= 10 else 600
    for n in range(1, n_max + 1):
        for i in range(0, 33, 4):
            chk = verify_binomial_bounds(n, Fraction(i, 64))
            if not chk.passed:
                return CheckResult("binomial-entropy-bounds", False,
                                   f"N={n} t={i}/64")
    return CheckResult("binomial-entropy-bounds", True)


def check_quantum_ratio(p) -> CheckResult:
    for k in (2, 3, 4, 5):
        for num in (1, 2, 3):
            eta = Fraction(num, 4)
            for gamma in (0.25, 0.5, 1.0):
                rep = classical_exponent_case1(gamma, eta, k)
                _cq, ratio = quantum_comparison(rep, k)
                if not ratio > 1:
                    return CheckResult("quantum-ratio", False,
                                       f"case1 k={k} eta={eta} gamma={gamma}")
    for s in range(6):
        inst, res = _nontrivial_csp(12, 3, 24, 400 + s)
        st = compute_stats(inst)
        rep = classical_exponent_case2(st, res.h_min)
        delta = float(abs(res.h_min) / inst.m)
        _cq, ratio = quantum_comparison(rep, 3, delta=delta,
                                        irregularity=float(st.irregularity))
        if not ratio > 1:
            return CheckResult("quantum-ratio", False, f"case2 seed {s}")
    return CheckResult("quantum-ratio", True)


def check_case2_corollary(p) -> CheckResult:
    for s in range(p["rounds"]):
        inst, res = _nontrivial_csp(12, 3, 24, 500 + s)
        st = compute_stats(inst)
        rep = classical_exponent_case2(st, res.h_min)
        bound = case2_corollary_bound(st, res.h_min, 3)
        if rep.c_cl + 1e-9 < bound:
            return CheckResult("case2-corollary", False,
                               f"seed {s}: c_cl {rep.c_cl} < {bound}")
    return CheckResult("case2-corollary", True)


def check_lipschitz_ball(p) -> CheckResult:
    for s in range(6):
        inst, res = _nontrivial_csp(12, 3, 20, 600 + s)
        st = compute_stats(inst)
        for eta in (_HALF, Fraction(3, 4)):
            theta, r = lipschitz_params(st, res.h_min, eta)
            x_star = res.minimizers[0]
            step = 2 * st.lambda_max * st.avg_degree
            cut = (1 - eta) * res.h_min
            spec = BallSpec(x_star, r, st.light_set)
            for y in enumerate_ball(spec):
                v = evaluate_csp(inst, y)
                d = hamming_distance(x_star, y)
                if v > res.h_min + step * d:
                    return CheckResult("lipschitz-ball", False,
                                       f"seed {s}: step bound broken at d={d}")
                if v > cut:
                    return CheckResult("lipschitz-ball", False,
                                       f"seed {s}: ball point outside T_eta")
    return CheckResult("lipschitz-ball", True)


def check_rejection_uniformity(p) -> CheckResult:
    from scipy.stats import chisquare
    inst, res = _nontrivial_lin2(8, 2, 10, 700)
    eta = _HALF
    members = [m for m in range(1 << 8)
               if evaluate_lin2(inst, Assignment.from_mask(m, 8))
               <= (1 - eta) * res.h_min]
    counts = {m: 0 for m in members}
    rng = RngStream(7001)
    for _ in range(p["samples"]):
        x, _d = rejection_sample_threshold(inst, res.h_min, eta, rng)
        counts[x.to_mask()] += 1
    stat, pval = chisquare(list(counts.values()))
    return CheckResult("rejection-uniformity", pval > 0.001,
                       f"chi2 p={pval:.4g} over {len(members)} cells")


def check_ball_counts(p) -> CheckResult:
    center = Assignment.all_plus(10)
    for radius in (0, 1, 3, 10, 12):
        for allowed in (None, frozenset(range(1, 7))):
            spec = BallSpec(center, radius, allowed)
            listed = list(enumerate_ball(spec))
            if len(listed) != spec.size or len({y.to_mask() for y in listed}) != spec.size:
                return CheckResult("ball-counts", False,
                                   f"r={radius} allowed={allowed}")
    return CheckResult("ball-counts", True)


def check_shell_containment(p) -> CheckResult:
    inst, res = _nontrivial_lin2(12, 3, 18, 800)
    eta = _HALF
    rates = flip_rates(eta, inst.k, inst.n)
    rng = RngStream(8001)
    optima = res.minimizers
    for _ in range(30):
        x, _d = rejection_sample_threshold(inst, res.h_min, eta, rng)
        hits = [o for o in optima if in_typical_shell(x, o, eta, inst.k, inst.n)]
        if hits and not any(hamming_distance(x, o) <= rates.r_ns for o in hits):
            return CheckResult("shell-containment", False, "shell point far from optima")
    return CheckResult("shell-containment", True)


def check_solver_oracle_equivalence(p) -> CheckResult:
    for s in range(8):
        inst, res = _nontrivial_lin2(p["n"], 3, 2 * p["n"], 900 + s)
        out = solve_case1(inst, res.h_min, _HALF, RngStream(9000 + s))
        if out.certified_optimal and out.value != res.h_min:
            return CheckResult("solver-oracle-equivalence", False, f"case1 seed {s}")
        csp, cres = _nontrivial_csp(p["n"], 3, 2 * p["n"], 900 + s)
        out2 = solve_case2(csp, cres.h_min, _HALF, RngStream(9100 + s))
        if out2.certified_optimal and out2.value != cres.h_min:
            return CheckResult("solver-oracle-equivalence", False, f"case2 seed {s}")
    return CheckResult("solver-oracle-equivalence", True)


def check_bounded_one_sided(p) -> CheckResult:
    for s in range(5):
        inst, res = _nontrivial_csp(10, 3, 16, 1000 + s)
        below = res.h_min * Fraction(3, 2)  # strictly below the optimum
        for trial in range(10):
            r = search_bounded(inst, below, _HALF, Fraction(1, 10),
                               RngStream(10_000 + 10 * s + trial))
            if r.kind == "solution":
                return CheckResult("bounded-one-sided", False,
                                   f"seed {s}: witness below H_min")
    return CheckResult("bounded-one-sided", True)


def check_sweep_schedule(p) -> CheckResult:
    inst, res = _nontrivial_csp(10, 3, 16, 1100)
    out, trace = bounded_sweep_solve(inst, _HALF, Fraction(1, 10), RngStream(1101))
    ok = all(a >= b for a, b in zip(trace.stage_budgets, trace.stage_budgets[1:]))
    if out.certified_optimal and out.value != res.h_min:
        ok = False
    return CheckResult("sweep-schedule", ok)


_CHECKS = [
    check_centered_mean,
    check_cube_average_zero,
    check_csp_floor,
    check_stats_invariants,
    check_parity_bridge,
    check_round_trip,
    check_correlated_identity,
    check_landing_bound,
    check_mcdiarmid_bound,
    check_entropy_properties,
    check_flip_rate_bound,
    check_binomial_bounds,
    check_quantum_ratio,
    check_case2_corollary,
    check_lipschitz_ball,
    check_rejection_uniformity,
    check_ball_counts,
    check_shell_containment,
    check_solver_oracle_equivalence,
    check_bounded_one_sided,
    check_sweep_schedule,
]


def run_verify(scale: str = "small", out=print) -> int:
    """Run every named invariant check; returns 0 on success, 2 otherwise."""
    p = _scale_params(scale)
    failures = 0
    for check in _CHECKS:
        result = check(p)
        status = "PASS" if result.passed else "FAIL"
        line = f"[{status}] {result.name}"
        if result.detail:
            line += f" ({result.detail})"
        out(line)
        if not result.passed:
            failures += 1
    out(f"{len(_CHECKS) - failures}/{len(_CHECKS)} invariant checks passed")
    return 0 if failures == 0 else 2
