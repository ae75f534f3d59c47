"""Exact minimization drivers.

Four strategies over a common outcome type:

* ``solve_case1``    -- known optimum, sign-structured objectives: rejection
                        sample the threshold set, search a correlated-shell
                        ball around the sample.
* ``solve_case2``    -- known optimum, bounded-influence objectives: same
                        loop with a ball restricted to light coordinates.
* ``ranked_solve``   -- unknown optimum: one batch of uniform samples,
                        keep the best-ranked few, ball-search each.
* ``bounded_sweep_solve`` -- unknown optimum: descend a fixed grid of
                        candidate bounds, running a one-sided bounded
                        search at each until a witness appears.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb, floor, log, log2

import numpy as np

from .evalcore import int64_safe, scale_instance, values_for_masks
from .exponents import binary_entropy, flip_rates, lipschitz_params, mcdiarmid_gamma
from .instances import Assignment, compute_stats, evaluate_lin2, Lin2Instance
from .oracle import DegenerateInstanceError, brute_force_minimum
from .sampling import (BallSpec, RawDrawBudgetExceeded, RngStream,
                       ball_search_min, rejection_sample_threshold)

_MAX_ITERATIONS = 1_000_000  # the ball-point/draw budget is the real limiter


class RankedBudgetError(RuntimeError):
    """The ranked solver's sample or retain count exceeds the budget."""

    def __init__(self, n_samples: int, k_retained: int, budget: int):
        super().__init__(
            f"ranked solve needs {n_samples} samples with {k_retained} ball "
            f"searches, over budget {budget}")
        self.n_samples = n_samples
        self.k_retained = k_retained
        self.budget = budget


@dataclass
class SolveOutcome:
    best: Assignment | None
    value: Fraction | None
    iterations: int
    raw_draws: int
    ball_points: int
    wall_time: float
    certified_optimal: bool

    @property
    def cost(self) -> int:
        return self.raw_draws + self.ball_points


def _evaluate(inst, x: Assignment) -> Fraction:
    from .instances import CspInstance, evaluate_csp
    if isinstance(inst, Lin2Instance):
        return evaluate_lin2(inst, x)
    return evaluate_csp(inst, x)


def _trivial_outcome(start: float) -> SolveOutcome:
    x = None
    return SolveOutcome(best=x, value=Fraction(0), iterations=0, raw_draws=0,
                        ball_points=0, wall_time=time.perf_counter() - start,
                        certified_optimal=True)


def _conditioned_loop(inst, h_min: Fraction, eta, rng: RngStream, spec_of,
                      budget: int) -> SolveOutcome:
    """Shared sample-then-ball-search loop for the known-optimum solvers.

    Certifies on hitting the supplied optimum; gives up (uncertified)
    when the combined raw-draw + ball-point budget runs out.
    """
    start = time.perf_counter()
    h_min = Fraction(h_min)
    best: Assignment | None = None
    best_val: Fraction | None = None
    iterations = raw_draws = ball_points = 0
    while iterations < _MAX_ITERATIONS:
        remaining = budget - raw_draws - ball_points
        if remaining <= 0:
            break
        try:
            x, draws = rejection_sample_threshold(inst, h_min, eta, rng,
                                                  max_draws=remaining)
        except RawDrawBudgetExceeded as exc:
            raw_draws += exc.draws
            break
        raw_draws += draws
        iterations += 1
        spec = spec_of(x)
        y, val, examined = ball_search_min(inst, spec)
        ball_points += examined
        if best_val is None or val < best_val or (val == best_val
                                                  and y.to_mask() < best.to_mask()):
            best, best_val = y, val
        if best_val <= h_min:
            return SolveOutcome(best, best_val, iterations, raw_draws,
                                ball_points, time.perf_counter() - start,
                                certified_optimal=(best_val == h_min))
    return SolveOutcome(best, best_val, iterations, raw_draws, ball_points,
                        time.perf_counter() - start, certified_optimal=False)


def solve_case1(inst: Lin2Instance, h_min, eta, rng: RngStream,
                budget: int = 10 ** 7) -> SolveOutcome:
    """Find a minimizer of a sign objective whose optimum is known.

    Samples the threshold set at level (1 - eta) h_min and searches the
    Hamming ball of the correlated-shell radius around each sample.
    """
    start = time.perf_counter()
    if inst.trivial:
        out = _trivial_outcome(start)
        out.best = Assignment.all_plus(inst.n)
        return out
    eta = Fraction(eta)
    rates = flip_rates(eta, inst.k, inst.n)
    radius = min(rates.r_ns, inst.n)

    def spec_of(x: Assignment) -> BallSpec:
        return BallSpec(center=x, radius=radius)

    return _conditioned_loop(inst, h_min, eta, rng, spec_of, budget)


def solve_case2(inst, h_min, eta, rng: RngStream,
                budget: int = 10 ** 7) -> SolveOutcome:
    """Known-optimum solver for bounded-influence objectives: the ball is
    restricted to light coordinates with the influence-derived radius."""
    if Fraction(h_min) == 0:
        raise DegenerateInstanceError(
            "bounded-influence solver requires a strictly negative optimum")
    eta = Fraction(eta)
    stats = compute_stats(inst)
    _theta, r_lip = lipschitz_params(stats, Fraction(h_min), eta)
    light = stats.light_set

    def spec_of(x: Assignment) -> BallSpec:
        return BallSpec(center=x, radius=r_lip, allowed_coords=light)

    return _conditioned_loop(inst, h_min, eta, rng, spec_of, budget)


def _uniform_batch_values(inst, n_samples: int, rng: RngStream):
    """Draw n_samples uniform masks and evaluate them all exactly."""
    n = inst.n
    masks = [rng.random_mask(n) for _ in range(n_samples)]
    scaled = scale_instance(inst)
    if int64_safe(scaled):
        vals = values_for_masks(scaled, np.array(masks, dtype=np.uint64))
        return masks, [int(v) for v in vals], scaled
    from .evalcore import IncrementalEvaluator
    vals = [IncrementalEvaluator(scaled, Assignment.from_mask(m, n)).value_scaled
            for m in masks]
    return masks, vals, scaled


def ranked_solve(inst: Lin2Instance, eta, gamma_hint: float, delta,
                 rng: RngStream, slack: float = 1.0,
                 budget: int = 10 ** 7) -> SolveOutcome:
    """Single-batch solver when the optimum is unknown.

    Draws N uniform points sized so that, with probability 1 - delta/2,
    at least one lands in a successful set of size ~ slack * 2^(h(q_eta) n);
    keeps the K best-ranked points, where K caps the rank of a threshold
    set of size 2^((1 - gamma_hint) n) via Markov; ball-searches each
    retained point.  ``slack`` scales the assumed successful-set size
    (values below 1 are conservative).  Raises RankedBudgetError instead
    of starting a run that cannot fit the budget.
    """
    start = time.perf_counter()
    if inst.trivial:
        out = _trivial_outcome(start)
        out.best = Assignment.all_plus(inst.n)
        return out
    eta = Fraction(eta)
    delta = Fraction(delta)
    n, k = inst.n, inst.k
    rates = flip_rates(eta, k, n)
    kappa = binary_entropy(rates.q_eta)
    s_eff = slack * 2.0 ** (kappa * n)
    n_samples = ceil((2.0 ** n / s_eff) * log(2 / delta))
    t_threshold = 2.0 ** ((1.0 - gamma_hint) * n)
    k_retained = min(n_samples,
                     ceil((2 / delta) * n_samples * t_threshold / 2.0 ** n))
    radius = min(rates.r_ns, n)
    ball = sum(comb(n, j) for j in range(radius + 1))
    if n_samples + k_retained * ball > budget:
        raise RankedBudgetError(n_samples, k_retained, budget)

    masks, vals, scaled = _uniform_batch_values(inst, n_samples, rng)
    order = sorted(range(n_samples), key=lambda i: (vals[i], masks[i]))
    centers = []
    seen = set()
    for i in order[:k_retained]:
        if masks[i] not in seen:
            seen.add(masks[i])
            centers.append(masks[i])

    best_val = min(vals)
    best_mask = min(m for m, v in zip(masks, vals) if v == best_val)
    ball_points = 0
    if radius >= n and centers:
        centers = centers[:1]  # every ball is the whole cube; search once
    for mask in centers:
        spec = BallSpec(center=Assignment.from_mask(mask, n), radius=radius)
        y, val, examined = ball_search_min(inst, spec)
        ball_points += examined
        val_scaled = val * scaled.den
        if val_scaled < best_val or (val_scaled == best_val
                                     and y.to_mask() < best_mask):
            best_val = val_scaled
            best_mask = y.to_mask()
    return SolveOutcome(Assignment.from_mask(best_mask, n),
                        Fraction(best_val, scaled.den), iterations=1,
                        raw_draws=n_samples, ball_points=ball_points,
                        wall_time=time.perf_counter() - start,
                        certified_optimal=False)


@dataclass
class BoundedSearchResult:
    """Outcome of one one-sided bounded search.

    kind is "solution" (a witness with H(y) <= U was found), "null"
    (the sample was consistent with no point below (1 - eta) U), or
    "budget" (the stage would not fit its budget and was not run).
    """

    kind: str
    assignment: Assignment | None = None
    value: Fraction | None = None
    raw_draws: int = 0
    ball_points: int = 0


@dataclass
class SweepTrace:
    candidate_bounds: list[Fraction] = field(default_factory=list)
    stage_kinds: list[str] = field(default_factory=list)
    stage_budgets: list[int] = field(default_factory=list)
    halt_stage: int | None = None
    exhaustive_fallback: bool = False


def search_bounded(inst, bound_u, eta, delta, rng: RngStream,
                   slack: float = 1.0, budget: int = 10 ** 7) -> BoundedSearchResult:
    """One-sided search: returns a witness only when its value really is
    <= bound_u, and NULL never falsely when the sample behaves.

    Draws enough uniform points to hit a restricted ball's worth of the
    sublevel set at (1 - eta) bound_u, abandons (NULL) if implausibly
    many land there, then ball-searches the survivors over light
    coordinates.  ``slack`` scales the assumed reachable-set size V_U.
    """
    eta = Fraction(eta)
    delta = Fraction(delta)
    bound_u = Fraction(bound_u)
    if bound_u >= 0:
        raise DegenerateInstanceError("bounded search needs a negative bound")
    n = inst.n
    stats = compute_stats(inst)
    theta_u = min(Fraction(1, 2),
                  eta * abs(bound_u) / (stats.lambda_max * stats.incident_weight))
    r_u = floor(theta_u * n / 2)
    light = stats.light_set
    v_u = slack * sum(comb(len(light), j) for j in range(min(r_u, len(light)) + 1))
    gamma_u = mcdiarmid_gamma(stats, bound_u, eta)
    c_tail = min(gamma_u, 1.0)
    t_max = 2.0 ** ((1.0 - c_tail) * n)
    n_samples = ceil((2.0 ** n / v_u) * log(2 / delta))
    cap = ceil((2 / delta) * n_samples * t_max / 2.0 ** n)
    if n_samples > budget:
        return BoundedSearchResult(kind="budget")

    masks, vals, scaled = _uniform_batch_values(inst, n_samples, rng)
    cut = floor((1 - eta) * bound_u * scaled.den)
    keep = sorted({m for m, v in zip(masks, vals) if v <= cut})
    if len(keep) > cap:
        return BoundedSearchResult(kind="null", raw_draws=n_samples)

    ball_points = 0
    best_mask = best_val = None
    for mask in keep:
        spec = BallSpec(center=Assignment.from_mask(mask, n), radius=r_u,
                        allowed_coords=light)
        if ball_points + spec.size > budget:
            return BoundedSearchResult(kind="budget", raw_draws=n_samples,
                                       ball_points=ball_points)
        y, val, examined = ball_search_min(inst, spec)
        ball_points += examined
        if best_val is None or val < best_val or (val == best_val
                                                  and y.to_mask() < best_mask):
            best_val, best_mask = val, y.to_mask()
    if best_val is not None and best_val <= bound_u:
        return BoundedSearchResult(kind="solution",
                                   assignment=Assignment.from_mask(best_mask, n),
                                   value=best_val, raw_draws=n_samples,
                                   ball_points=ball_points)
    return BoundedSearchResult(kind="null", raw_draws=n_samples,
                               ball_points=ball_points)


def bounded_sweep_solve(inst, eta, delta, rng: RngStream, slack: float = 1.0,
                        budget: int = 10 ** 7,
                        exhaustive_cap: int = 26) -> tuple[SolveOutcome, SweepTrace]:
    """Unknown-optimum solver over a descending grid of candidate bounds.

    The grid is U_r = -r / B for r = R .. 1, where B normalizes bounds by
    influence and R = floor(B * W); searching deeper (smaller r) covers
    shallower optima, so stages run from the deepest bound upward in
    cost.  With R = 0 (optimum provably shallow) the instance is solved
    exhaustively.
    """
    start = time.perf_counter()
    eta = Fraction(eta)
    trace = SweepTrace()
    if inst.trivial if isinstance(inst, Lin2Instance) else not inst.constraints:
        out = _trivial_outcome(start)
        out.best = Assignment.all_plus(inst.n)
        return out, trace

    stats = compute_stats(inst)
    b_eta = eta / (2 * stats.lambda_max * stats.avg_degree)
    r_top = floor(b_eta * stats.total_weight)
    if r_top == 0:
        trace.exhaustive_fallback = True
        if inst.n > exhaustive_cap:
            raise RankedBudgetError(1 << inst.n, 0, budget)
        res = brute_force_minimum(inst, n_cap=exhaustive_cap)
        best = res.minimizers[0]
        return SolveOutcome(best, res.h_min, iterations=1, raw_draws=0,
                            ball_points=1 << inst.n,
                            wall_time=time.perf_counter() - start,
                            certified_optimal=True), trace

    raw_draws = ball_points = 0
    best_mask = best_val = None
    for stage, r in enumerate(range(r_top, 0, -1)):
        bound = Fraction(-r) / b_eta
        trace.candidate_bounds.append(bound)
        trace.stage_budgets.append(budget)
        result = search_bounded(inst, bound, eta, delta, rng.child(stage),
                                slack=slack, budget=budget)
        trace.stage_kinds.append(result.kind)
        raw_draws += result.raw_draws
        ball_points += result.ball_points
        if result.kind == "solution":
            trace.halt_stage = r
            best_val = result.value
            best_mask = result.assignment.to_mask()
            break
    assert all(a >= b for a, b in zip(trace.stage_budgets, trace.stage_budgets[1:]))
    certified = False
    if best_mask is None:
        # Every stage returned NULL: the optimum sits above the deepest
        # grid bound, i.e. within one grid step of zero, so the instance
        # is shallow enough to finish exhaustively.
        if inst.n > exhaustive_cap:
            raise RankedBudgetError(1 << inst.n, 0, budget)
        trace.exhaustive_fallback = True
        res = brute_force_minimum(inst, n_cap=exhaustive_cap)
        ball_points += 1 << inst.n
        best = res.minimizers[0]
        best_val = res.h_min
        certified = True
    else:
        best = Assignment.from_mask(best_mask, inst.n)
    return SolveOutcome(best, best_val, iterations=len(trace.stage_kinds),
                        raw_draws=raw_draws, ball_points=ball_points,
                        wall_time=time.perf_counter() - start,
                        certified_optimal=certified), trace
