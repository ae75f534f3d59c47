"""Randomized kernels: rejection sampling from threshold sets,
correlated-pair sampling, typical-shell tests, and (restricted)
Hamming-ball enumeration and search.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, floor

import numpy as np

from .bitops import popcount_array
from .evalcore import IncrementalEvaluator, int64_safe, scale_instance, values_for_masks
from .exponents import flip_rates
from .instances import Assignment, hamming_distance

# Vectorized full-cube ball search pays off once the ball covers a
# nontrivial fraction of the cube.
_VECTOR_BALL_FRACTION = 8
_VECTOR_N_CAP = 24


class RawDrawBudgetExceeded(RuntimeError):
    def __init__(self, draws: int):
        super().__init__(f"rejection sampler exhausted its raw-draw budget ({draws} draws)")
        self.draws = draws


@dataclass
class RngStream:
    """Seedable, reproducible randomness: a Mersenne Twister seeded from
    (master seed, stream index), so distinct indices give independent
    reproducible streams."""

    master_seed: int
    stream_index: int = 0
    _rng: random.Random = field(init=False, repr=False)

    def __post_init__(self):
        self._rng = random.Random(f"{self.master_seed}:{self.stream_index}")

    def child(self, index: int) -> "RngStream":
        return RngStream(self.master_seed, self.stream_index * 1_000_003 + index + 1)

    def random_mask(self, n: int) -> int:
        """Unbiased uniform n-bit mask (getrandbits draws exactly n bits)."""
        return self._rng.getrandbits(n) if n else 0

    def bernoulli(self, p: Fraction) -> bool:
        """Exact Bernoulli(p) for rational p via an integer draw."""
        p = Fraction(p)
        return self._rng.randrange(p.denominator) < p.numerator

    def choice(self, seq):
        return self._rng.choice(seq)

    def shuffle(self, seq):
        self._rng.shuffle(seq)


def correlated_sample(x_star: Assignment, q, rng: RngStream) -> Assignment:
    """Flip each coordinate of x_star independently with probability q."""
    q = Fraction(q)
    if not 0 <= q <= Fraction(1, 2):
        raise ValueError("flip probability q must lie in [0, 1/2]")
    signs = list(x_star.signs)
    a, b = q.numerator, q.denominator
    for i in range(len(signs)):
        if rng._rng.randrange(b) < a:
            signs[i] = -signs[i]
    return Assignment(tuple(signs))


def in_typical_shell(x: Assignment, x_star: Assignment, eta, k: int, n: int) -> bool:
    """Whether d_H(x, x_star) lies within n^(2/3) of the expected flip
    count q_{eta,n} n."""
    dist = hamming_distance(x, x_star)
    rates = flip_rates(eta, k, n)
    return abs(dist - rates.q_eta_n * n) <= n ** (2.0 / 3.0)


def rejection_sample_threshold(inst, h_min: Fraction, eta, rng: RngStream,
                               max_draws: int | None = None):
    """Uniform sample from the threshold set {x : H(x) <= (1-eta) h_min}
    by rejection from the full cube.  Returns (assignment, raw_draws).

    Draws are uniform n-bit masks tested with the exact scaled-integer
    membership cut; the raw-draw count is geometric with success rate
    |T| / 2^n.  Raises RawDrawBudgetExceeded past ``max_draws``
    (default 64 * 2^n), the bounded-time signal for an empty or
    astronomically thin threshold set.
    """
    eta = Fraction(eta)
    n = inst.n
    scaled = scale_instance(inst)
    cut = floor((1 - eta) * Fraction(h_min) * scaled.den)
    if max_draws is None:
        max_draws = 64 << n
    draws = 0
    batch = 32  # grows geometrically so cheap acceptances stay cheap
    use_vector = int64_safe(scaled)
    while draws < max_draws:
        size = min(batch, max_draws - draws)
        batch = min(batch * 2, 4096)
        masks = [rng.random_mask(n) for _ in range(size)]
        if use_vector:
            vals = values_for_masks(scaled, np.array(masks, dtype=np.uint64))
            hits = np.nonzero(vals <= cut)[0]
            if hits.size:
                idx = int(hits[0])
                return Assignment.from_mask(masks[idx], n), draws + idx + 1
            draws += size
        else:
            for i, mask in enumerate(masks):
                x = Assignment.from_mask(mask, n)
                if IncrementalEvaluator(scaled, x).value_scaled <= cut:
                    return x, draws + i + 1
            draws += size
    raise RawDrawBudgetExceeded(draws)


@dataclass(frozen=True)
class BallSpec:
    """A (possibly coordinate-restricted) Hamming ball."""

    center: Assignment
    radius: int
    allowed_coords: frozenset[int] | None = None

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be >= 0")
        if self.allowed_coords is not None:
            bad = [i for i in self.allowed_coords if not 1 <= i <= self.center.n]
            if bad:
                raise ValueError(f"allowed coordinates {bad} outside [1..{self.center.n}]")

    @property
    def coords(self) -> tuple[int, ...]:
        if self.allowed_coords is None:
            return tuple(range(1, self.center.n + 1))
        return tuple(sorted(self.allowed_coords))

    @property
    def effective_radius(self) -> int:
        return min(self.radius, len(self.coords))

    @property
    def size(self) -> int:
        a = len(self.coords)
        return sum(comb(a, j) for j in range(self.effective_radius + 1))


def _flip_walk(coords: tuple[int, ...], radius: int):
    """Yield per-point flip deltas covering the ball layer by layer.

    Yields lists of coordinates to toggle; applying each list in turn
    visits every flip subset of size <= radius exactly once, ordered by
    increasing size then lexicographically.  Consecutive subsets share a
    prefix, so the toggled set stays small on average.
    """
    current: tuple[int, ...] = ()
    yield []  # the center itself
    for j in range(1, radius + 1):
        for combo in combinations(coords, j):
            delta = [c for c in current if c not in combo]
            delta += [c for c in combo if c not in current]
            current = combo
            yield delta
    if current:
        yield list(current)  # restore the center


def enumerate_ball(spec: BallSpec):
    """Yield every assignment of the ball exactly once, by increasing
    distance from the center, then lexicographic flip-set order."""
    signs = list(spec.center.signs)
    deltas = list(_flip_walk(spec.coords, spec.effective_radius))
    for delta in deltas[:-1] if len(deltas) > 1 and deltas[-1] else deltas:
        for c in delta:
            signs[c - 1] = -signs[c - 1]
        yield Assignment(tuple(signs))
    # note: the trailing restore delta (if any) is intentionally skipped


def ball_search_min(inst, spec: BallSpec):
    """Exact minimum of H over the ball.

    Returns (best assignment, exact value, points examined).  Ties break
    to the smallest bitmask (the lexicographically smallest assignment
    under the sign -1 <-> bit 1 encoding).  Small balls walk the
    enumeration order with incremental flip updates; balls covering a
    large fraction of the cube fall through to a vectorized cube sweep.
    """
    scaled = scale_instance(inst)
    n = inst.n
    size = spec.size
    if (int64_safe(scaled) and n <= _VECTOR_N_CAP
            and size * _VECTOR_BALL_FRACTION >= (1 << n)):
        return _ball_search_vectorized(scaled, spec)
    ev = IncrementalEvaluator(scaled, spec.center)
    best_val = ev.value_scaled
    best_mask = spec.center.to_mask()
    mask = best_mask
    examined = 0
    for delta in _flip_walk(spec.coords, spec.effective_radius):
        for c in delta:
            ev.flip(c)
            mask ^= 1 << (c - 1)
        if examined < size:
            examined += 1
            if ev.value_scaled < best_val or (ev.value_scaled == best_val
                                              and mask < best_mask):
                best_val = ev.value_scaled
                best_mask = mask
    return (Assignment.from_mask(best_mask, n),
            Fraction(best_val, scaled.den), examined)


def _ball_search_vectorized(scaled, spec: BallSpec):
    n = scaled.n
    center = np.uint64(spec.center.to_mask())
    masks = np.arange(1 << n, dtype=np.uint64)
    diff = masks ^ center
    member = popcount_array(diff) <= spec.effective_radius
    if spec.allowed_coords is not None:
        allowed_bits = 0
        for c in spec.allowed_coords:
            allowed_bits |= 1 << (c - 1)
        member &= (diff & np.uint64(~allowed_bits & ((1 << n) - 1))) == 0
    vals = values_for_masks(scaled, masks)
    in_vals = vals[member]
    in_masks = masks[member]
    best = int(in_vals.min())
    best_mask = int(in_masks[in_vals == best].min())
    return (Assignment.from_mask(best_mask, n),
            Fraction(best, scaled.den), int(member.sum()))


def light_coords(stats) -> frozenset[int]:
    """Coordinates of weighted degree at most twice the average; always
    at least half of all coordinates."""
    return stats.light_set
