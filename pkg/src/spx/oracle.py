"""Brute-force ground truth: exact optima, sublevel-set counts, and
exact expectations/probabilities under the coordinate-flip distribution.

Two enumeration engines back everything here: a vectorized block sweep
over assignment bitmasks (used whenever the scaled values fit int64) and
a Gray-code walk with incremental flip updates (arbitrary precision,
and the cross-check for the vectorized path).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

import numpy as np

from .bitops import gray_flip_bit, popcount_array
from .evalcore import IncrementalEvaluator, int64_safe, scale_instance, values_for_masks
from .exponents import flip_rates
from .instances import Assignment, Lin2Instance

ORACLE_N_CAP = 30          # full 2^n minimum / counting
DISTRIBUTION_N_CAP = 20    # exact flip-pattern distribution enumeration
_BLOCK_BITS = 20


class OracleCapExceeded(ValueError):
    pass


class DegenerateInstanceError(ValueError):
    """Raised when an operation needs H_min < 0 but the instance is flat."""


@dataclass
class OracleResult:
    h_min: Fraction
    minimizers: list[Assignment]
    minimizer_count: int
    value_histogram: dict[Fraction, int] | None = None


def _check_cap(n: int, cap: int):
    if n > cap:
        raise OracleCapExceeded(f"n={n} exceeds enumeration cap {cap}")


def _blocks(n: int):
    total = 1 << n
    step = min(total, 1 << _BLOCK_BITS)
    for start in range(0, total, step):
        yield np.arange(start, min(start + step, total), dtype=np.uint64)


def _gray_sweep(inst):
    """Yield (mask, scaled_value) over all 2^n masks via Gray-code flips."""
    scaled = scale_instance(inst)
    ev = IncrementalEvaluator(scaled, Assignment.all_plus(inst.n))
    mask = 0
    yield mask, ev.value_scaled
    for i in range(1, 1 << inst.n):
        bit = gray_flip_bit(i)
        mask ^= 1 << bit
        ev.flip(bit + 1)
        yield mask, ev.value_scaled


def brute_force_minimum(inst, cap_minimizers: int = 64,
                        with_histogram: bool = False,
                        n_cap: int = ORACLE_N_CAP) -> OracleResult:
    """Exact H_min and its minimizers by full enumeration.

    Minimizers are returned in increasing bitmask order, capped at
    ``cap_minimizers``; ``minimizer_count`` is always the exact count.
    """
    _check_cap(inst.n, n_cap)
    scaled = scale_instance(inst)
    den = scaled.den
    if int64_safe(scaled):
        best = None
        count = 0
        minimizers: list[int] = []
        histogram: dict[int, int] = {}
        # First pass: global minimum (and histogram if asked).
        for masks in _blocks(inst.n):
            vals = values_for_masks(scaled, masks)
            bmin = int(vals.min())
            if best is None or bmin < best:
                best = bmin
            if with_histogram:
                uniq, cnts = np.unique(vals, return_counts=True)
                for v, c in zip(uniq.tolist(), cnts.tolist()):
                    histogram[v] = histogram.get(v, 0) + c
        # Second pass: minimizer count and capped list.
        for masks in _blocks(inst.n):
            vals = values_for_masks(scaled, masks)
            hit = masks[vals == best]
            count += int(hit.size)
            for mask in hit.tolist():
                if len(minimizers) >= cap_minimizers:
                    break
                minimizers.append(int(mask))
        return OracleResult(
            h_min=Fraction(best, den),
            minimizers=[Assignment.from_mask(m, inst.n) for m in minimizers],
            minimizer_count=count,
            value_histogram=(
                {Fraction(v, den): c for v, c in histogram.items()}
                if with_histogram else None),
        )
    # Arbitrary-precision fallback.
    best = None
    count = 0
    minimizers = []
    histogram = {}
    for mask, v in _gray_sweep(inst):
        if with_histogram:
            histogram[v] = histogram.get(v, 0) + 1
        if best is None or v < best:
            best, count, minimizers = v, 1, [mask]
        elif v == best:
            count += 1
            if len(minimizers) < cap_minimizers:
                minimizers.append(mask)
    minimizers.sort()
    return OracleResult(
        h_min=Fraction(best, den),
        minimizers=[Assignment.from_mask(m, inst.n) for m in minimizers[:cap_minimizers]],
        minimizer_count=count,
        value_histogram=(
            {Fraction(v, den): c for v, c in histogram.items()}
            if with_histogram else None),
    )


def sublevel_counts(inst, bounds: list[Fraction],
                    n_cap: int = ORACLE_N_CAP) -> list[int]:
    """|{x : H(x) <= b}| for each bound b, from a single enumeration."""
    _check_cap(inst.n, n_cap)
    scaled = scale_instance(inst)
    # Scaled values are integers, so compare against floor(b * den).
    cuts = [floor(b * scaled.den) for b in bounds]
    counts = [0] * len(bounds)
    if int64_safe(scaled):
        for masks in _blocks(inst.n):
            vals = values_for_masks(scaled, masks)
            for i, c in enumerate(cuts):
                counts[i] += int((vals <= c).sum())
        return counts
    for _, v in _gray_sweep(inst):
        for i, c in enumerate(cuts):
            if v <= c:
                counts[i] += 1
    return counts


def threshold_set_count(inst, h_min: Fraction, eta: Fraction,
                        n_cap: int = ORACLE_N_CAP) -> int:
    """Exact |{x : H(x) <= (1-eta) h_min}|."""
    if not 0 < eta < 1:
        raise ValueError("eta must satisfy 0 < eta < 1")
    if h_min >= 0:
        raise DegenerateInstanceError("threshold set is degenerate when H_min >= 0")
    return sublevel_counts(inst, [(1 - eta) * h_min], n_cap=n_cap)[0]


def _flip_distribution_arrays(inst, x_star: Assignment, n_cap: int):
    """Scaled objective values H(x* . t) and wt(t) across all flip masks t."""
    _check_cap(inst.n, n_cap)
    scaled = scale_instance(inst)
    if not int64_safe(scaled):
        raise OverflowError("instance exceeds the vectorized distribution range")
    xs = np.uint64(x_star.to_mask())
    t_masks = np.arange(1 << inst.n, dtype=np.uint64)
    vals = values_for_masks(scaled, t_masks ^ xs)
    weights = popcount_array(t_masks)
    return scaled, vals, weights


def exact_correlated_expectation(inst: Lin2Instance, x_star: Assignment,
                                 q: Fraction) -> Fraction:
    """E[H(X)] under independent flips of x_star with probability q.

    Closed form: each degree-k monomial contracts by rho^k with
    rho = 1 - 2q, so the expectation is rho^k * H(x_star).
    """
    if not 0 <= q <= Fraction(1, 2):
        raise ValueError("flip probability q must lie in [0, 1/2]")
    from .instances import evaluate_lin2
    rho = 1 - 2 * Fraction(q)
    return rho ** inst.k * evaluate_lin2(inst, x_star)


def correlated_expectation_enumeration(inst: Lin2Instance, x_star: Assignment,
                                       q: Fraction,
                                       n_cap: int = DISTRIBUTION_N_CAP) -> Fraction:
    """Independent check of the contraction identity by exhaustively
    enumerating flip patterns weighted by q^wt (1-q)^(n-wt)."""
    q = Fraction(q)
    scaled, vals, weights = _flip_distribution_arrays(inst, x_star, n_cap)
    a, b = q.numerator, q.denominator
    n = inst.n
    total = 0
    for w in range(n + 1):
        sel = vals[weights == w]
        if sel.size:
            total += int(sel.sum()) * a ** w * (b - a) ** (n - w)
    return Fraction(total, scaled.den * b ** n)


def exact_landing_probability(inst: Lin2Instance, x_star: Assignment,
                              q: Fraction, eta: Fraction,
                              n_cap: int = DISTRIBUTION_N_CAP) -> Fraction:
    """Exact Pr[H(X) <= (1-eta) H_min] for X = x_star with independent
    coordinate flips at rate q; x_star must be optimal."""
    q = Fraction(q)
    eta = Fraction(eta)
    if not 0 <= q <= Fraction(1, 2):
        raise ValueError("flip probability q must lie in [0, 1/2]")
    if not 0 < eta < 1:
        raise ValueError("eta must satisfy 0 < eta < 1")
    scaled, vals, weights = _flip_distribution_arrays(inst, x_star, n_cap)
    from .instances import evaluate_lin2
    h_min = evaluate_lin2(inst, x_star)
    cut = floor((1 - eta) * h_min * scaled.den)
    accepted = vals <= cut
    a, b = q.numerator, q.denominator
    n = inst.n
    num = 0
    for w in range(n + 1):
        cnt = int((accepted & (weights == w)).sum())
        if cnt:
            num += cnt * a ** w * (b - a) ** (n - w)
    return Fraction(num, b ** n)


def successful_set_count_correlated(inst: Lin2Instance, x_star: Assignment,
                                    h_min: Fraction, eta: Fraction,
                                    n_cap: int = DISTRIBUTION_N_CAP) -> int:
    """Exact size of the correlated-pair successful set: flip patterns in
    the typical Hamming shell whose image lands in the threshold set."""
    scaled, vals, weights = _flip_distribution_arrays(inst, x_star, n_cap)
    n = inst.n
    rates = flip_rates(eta, inst.k, n)
    center = rates.q_eta_n * n
    half_width = n ** (2.0 / 3.0)
    lo = ceil(center - half_width)
    hi = floor(center + half_width)
    cut = floor((1 - Fraction(eta)) * h_min * scaled.den)
    in_shell = (weights >= lo) & (weights <= hi)
    return int((in_shell & (vals <= cut)).sum())
