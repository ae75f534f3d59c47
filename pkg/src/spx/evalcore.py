"""Scaled-integer evaluation kernels.

Objective values are rationals with a common denominator per instance,
so every enumeration-heavy routine works on integers: a vectorized
whole-block evaluator for full-cube sweeps, and an incremental evaluator
that re-costs single variable flips (the inner loop of ball search and
Gray-code enumeration).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

import numpy as np

from .bitops import popcount_array
from .instances import Assignment, CspInstance, Lin2Instance

# Above this bound on sum of |scaled contributions| the int64 fast path
# could overflow and callers must use exact Python integers.
_INT64_SAFE = 1 << 60


@dataclass(frozen=True)
class ScaledLin2:
    n: int
    den: int
    term_masks: tuple[int, ...]       # bit i set iff variable i+1 in the subset
    coeffs: tuple[int, ...]           # numerators over den
    incident: tuple[tuple[int, ...], ...]  # per variable: indices of touching terms

    @property
    def max_abs(self) -> int:
        return sum(abs(c) for c in self.coeffs)


@dataclass(frozen=True)
class ScaledCsp:
    n: int
    den: int
    vars_per_constraint: tuple[tuple[int, ...], ...]
    tables: tuple[tuple[int, ...], ...]  # scaled contribution per local assignment
    incident: tuple[tuple[tuple[int, int], ...], ...]  # per variable: (constraint, bit position)

    @property
    def max_abs(self) -> int:
        return sum(max(abs(v) for v in t) for t in self.tables) if self.tables else 0


@lru_cache(maxsize=128)
def scale_instance(inst):
    """Common-denominator integer form of an instance (memoized: the
    sampler and ball search rescale the same instance on every call)."""
    if isinstance(inst, Lin2Instance):
        den = lcm(*(c.denominator for _, c in inst.terms)) if inst.terms else 1
        masks, coeffs = [], []
        for subset, coeff in inst.terms:
            mask = 0
            for i in subset:
                mask |= 1 << (i - 1)
            masks.append(mask)
            coeffs.append(int(coeff * den))
        incident = [[] for _ in range(inst.n)]
        for t, (subset, _) in enumerate(inst.terms):
            for i in subset:
                incident[i - 1].append(t)
        return ScaledLin2(
            n=inst.n, den=den,
            term_masks=tuple(masks), coeffs=tuple(coeffs),
            incident=tuple(tuple(v) for v in incident),
        )
    if isinstance(inst, CspInstance):
        den = 1
        for c in inst.constraints:
            den = lcm(den, (-c.weight).denominator, c.violation_value.denominator)
        tables = []
        for c in inst.constraints:
            sat = int(-c.weight * den)
            unsat = int(c.violation_value * den)
            tables.append(tuple(
                sat if (c.truth_table >> b) & 1 else unsat
                for b in range(1 << c.arity)
            ))
        incident = [[] for _ in range(inst.n)]
        for j, c in enumerate(inst.constraints):
            for t, v in enumerate(c.vars):
                incident[v - 1].append((j, t))
        return ScaledCsp(
            n=inst.n, den=den,
            vars_per_constraint=tuple(c.vars for c in inst.constraints),
            tables=tuple(tables),
            incident=tuple(tuple(v) for v in incident),
        )
    raise TypeError(f"unsupported instance type {type(inst)!r}")


def values_for_masks(scaled, masks: np.ndarray) -> np.ndarray:
    """Scaled objective values for an array of assignment bitmasks.

    Exact as long as the instance fits the int64 guard, which callers of
    the vectorized path must have checked via ``max_abs``.
    """
    if scaled.max_abs >= _INT64_SAFE:
        raise OverflowError("instance values exceed int64 fast-path range")
    masks = masks.astype(np.uint64)
    total = np.zeros(masks.shape, dtype=np.int64)
    if isinstance(scaled, ScaledLin2):
        for mask, coeff in zip(scaled.term_masks, scaled.coeffs):
            parity = popcount_array(masks & np.uint64(mask)) & 1
            total += coeff * (1 - 2 * parity)
        return total
    for cvars, table in zip(scaled.vars_per_constraint, scaled.tables):
        idx = np.zeros(masks.shape, dtype=np.int64)
        for t, v in enumerate(cvars):
            idx |= ((masks >> np.uint64(v - 1)) & np.uint64(1)).astype(np.int64) << t
        total += np.asarray(table, dtype=np.int64)[idx]
    return total


def int64_safe(scaled) -> bool:
    return scaled.max_abs < _INT64_SAFE


class IncrementalEvaluator:
    """Tracks the scaled objective value under single-variable flips.

    A flip touches only the terms/constraints incident to the flipped
    variable, so a walk visiting neighbors costs O(local degree) per
    step instead of a full re-evaluation.
    """

    def __init__(self, scaled, x: Assignment):
        if x.n != scaled.n:
            raise ValueError("assignment/instance dimension mismatch")
        self._scaled = scaled
        self.den = scaled.den
        self.signs = list(x.signs)
        if isinstance(scaled, ScaledLin2):
            self._lin2 = True
            self._contrib = []
            for mask, coeff in zip(scaled.term_masks, scaled.coeffs):
                prod = 1
                m = mask
                while m:
                    i = (m & -m).bit_length() - 1
                    prod *= self.signs[i]
                    m &= m - 1
                self._contrib.append(coeff * prod)
            self.value_scaled = sum(self._contrib)
        else:
            self._lin2 = False
            self._local = []
            self.value_scaled = 0
            for cvars, table in zip(scaled.vars_per_constraint, scaled.tables):
                b = 0
                for t, v in enumerate(cvars):
                    if self.signs[v - 1] == -1:
                        b |= 1 << t
                self._local.append(b)
                self.value_scaled += table[b]

    @property
    def value(self) -> Fraction:
        return Fraction(self.value_scaled, self.den)

    def assignment(self) -> Assignment:
        return Assignment(tuple(self.signs))

    def flip(self, var: int) -> None:
        """Negate variable ``var`` (1-based) and update the value."""
        i = var - 1
        self.signs[i] = -self.signs[i]
        if self._lin2:
            for t in self._scaled.incident[i]:
                delta = -2 * self._contrib[t]
                self._contrib[t] += delta
                self.value_scaled += delta
        else:
            for j, t in self._scaled.incident[i]:
                table = self._scaled.tables[j]
                old = table[self._local[j]]
                self._local[j] ^= 1 << t
                self.value_scaled += table[self._local[j]] - old


def evaluate_scaled(scaled, x: Assignment) -> int:
    """Scaled objective at a single point (exact, arbitrary precision)."""
    return IncrementalEvaluator(scaled, x).value_scaled
