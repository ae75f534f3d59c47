"""Problem representations and exact objective evaluation.

Two instance kinds are supported:

* ``Lin2Instance``: a homogeneous degree-k multilinear form over sign
  vectors, H(x) = sum_S c_S prod_{i in S} x_i.
* ``CspInstance``: a weighted constraint list with truth-table
  predicates; the objective is the centered sum of per-constraint
  contributions (-w_j when satisfied, w_j * s_j/(2^{k_j}-s_j) when
  violated), so its average over the cube is exactly zero.

All weights, coefficients and objective values are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .bitops import mask_to_signs, popcount, signs_to_mask

MASK_ENCODING_MAX_N = 63


class DimensionMismatchError(ValueError):
    pass


class InvalidInstanceError(ValueError):
    pass


@dataclass(frozen=True)
class Assignment:
    """A point of {-1,+1}^n."""

    signs: tuple[int, ...]

    def __post_init__(self):
        if any(s not in (-1, 1) for s in self.signs):
            raise InvalidInstanceError("assignment entries must be -1 or +1")

    @property
    def n(self) -> int:
        return len(self.signs)

    @classmethod
    def from_mask(cls, mask: int, n: int) -> "Assignment":
        if n > MASK_ENCODING_MAX_N:
            raise InvalidInstanceError(f"mask encoding caps n at {MASK_ENCODING_MAX_N}")
        return cls(mask_to_signs(mask, n))

    def to_mask(self) -> int:
        if self.n > MASK_ENCODING_MAX_N:
            raise InvalidInstanceError(f"mask encoding caps n at {MASK_ENCODING_MAX_N}")
        return signs_to_mask(self.signs)

    def flip(self, index: int) -> "Assignment":
        """Return the assignment with variable ``index`` (1-based) negated."""
        s = list(self.signs)
        s[index - 1] = -s[index - 1]
        return Assignment(tuple(s))

    @classmethod
    def all_plus(cls, n: int) -> "Assignment":
        return cls((1,) * n)


def hamming_distance(a: Assignment, b: Assignment) -> int:
    if a.n != b.n:
        raise DimensionMismatchError("assignments have different lengths")
    return sum(1 for x, y in zip(a.signs, b.signs) if x != y)


@dataclass(frozen=True)
class Lin2Instance:
    """Homogeneous degree-k multilinear objective over sign vectors."""

    n: int
    k: int
    terms: tuple[tuple[frozenset[int], Fraction], ...]

    def __post_init__(self):
        seen = set()
        for subset, coeff in self.terms:
            if len(subset) != self.k:
                raise InvalidInstanceError(f"term {sorted(subset)} has size != k={self.k}")
            if not all(1 <= i <= self.n for i in subset):
                raise InvalidInstanceError(f"term {sorted(subset)} has index out of [1..{self.n}]")
            if subset in seen:
                raise InvalidInstanceError(f"duplicate term {sorted(subset)}; aggregate before construction")
            if coeff == 0:
                raise InvalidInstanceError(f"term {sorted(subset)} has zero coefficient")
            seen.add(subset)

    @property
    def trivial(self) -> bool:
        """True when H is identically zero (every assignment is optimal)."""
        return not self.terms

    @classmethod
    def from_terms(cls, n: int, k: int, terms) -> "Lin2Instance":
        """Build from an iterable of (index-iterable, coefficient),
        aggregating duplicate subsets and dropping zero aggregates."""
        agg: dict[frozenset[int], Fraction] = {}
        for subset, coeff in terms:
            key = frozenset(subset)
            agg[key] = agg.get(key, Fraction(0)) + Fraction(coeff)
        kept = tuple(sorted(
            ((s, c) for s, c in agg.items() if c != 0),
            key=lambda t: sorted(t[0]),
        ))
        return cls(n=n, k=k, terms=kept)


@dataclass(frozen=True)
class Constraint:
    """One weighted constraint: an ordered variable tuple, a positive
    rational weight, and a truth table over the 2^{k_j} local assignments.

    Truth-table bit b corresponds to the local assignment in which
    variable ``vars[t]`` has sign -1 iff bit t of b is 1.
    """

    vars: tuple[int, ...]
    weight: Fraction
    truth_table: int

    def __post_init__(self):
        kj = len(self.vars)
        if kj < 1:
            raise InvalidInstanceError("constraint must involve at least one variable")
        if len(set(self.vars)) != kj:
            raise InvalidInstanceError(f"constraint variables {self.vars} are not distinct")
        if self.weight <= 0:
            raise InvalidInstanceError("constraint weight must be positive")
        table_bits = 1 << kj
        if not (0 <= self.truth_table < (1 << table_bits)):
            raise InvalidInstanceError("truth table does not fit the constraint arity")
        s = popcount(self.truth_table)
        if s == 0 or s == table_bits:
            raise InvalidInstanceError(
                f"constraint on {self.vars} has trivial predicate (s={s} of {table_bits})")

    @property
    def arity(self) -> int:
        return len(self.vars)

    @property
    def num_satisfying(self) -> int:
        return popcount(self.truth_table)

    @property
    def violation_value(self) -> Fraction:
        """Centered contribution when violated: w * s / (2^k - s)."""
        s = self.num_satisfying
        return self.weight * Fraction(s, (1 << self.arity) - s)

    @property
    def lipschitz_factor(self) -> Fraction:
        """Gap between the two contribution values, per unit weight:
        2^{k_j} / (2^{k_j} - s_j)."""
        s = self.num_satisfying
        return Fraction(1 << self.arity, (1 << self.arity) - s)

    def local_index(self, x: Assignment) -> int:
        b = 0
        for t, v in enumerate(self.vars):
            if x.signs[v - 1] == -1:
                b |= 1 << t
        return b

    def is_satisfied(self, x: Assignment) -> bool:
        return bool((self.truth_table >> self.local_index(x)) & 1)

    def value(self, x: Assignment) -> Fraction:
        return -self.weight if self.is_satisfied(x) else self.violation_value


@dataclass(frozen=True)
class CspInstance:
    """Weighted MAX-k-CSP instance with a centered objective."""

    n: int
    k: int
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        for idx, c in enumerate(self.constraints, start=1):
            if c.arity > self.k:
                raise InvalidInstanceError(f"constraint {idx} has arity {c.arity} > k={self.k}")
            if not all(1 <= v <= self.n for v in c.vars):
                raise InvalidInstanceError(f"constraint {idx} references a variable outside [1..{self.n}]")

    @property
    def m(self) -> int:
        return len(self.constraints)

    @property
    def total_weight(self) -> Fraction:
        return sum((c.weight for c in self.constraints), Fraction(0))

    @property
    def unit_weighted(self) -> bool:
        return all(c.weight == 1 for c in self.constraints)


@dataclass(frozen=True)
class InstanceStats:
    """Derived weighted-degree statistics of a CSP instance."""

    n: int
    total_weight: Fraction          # W
    incident_weight: Fraction       # Sigma = sum_i d_i = sum_j k_j w_j
    degrees: tuple[Fraction, ...]   # d_i
    irregularity: Fraction          # D = n * sum d_i^2 / Sigma^2
    lambda_max: Fraction
    light_set: frozenset[int]       # {i : d_i <= 2 d_avg}

    @property
    def avg_degree(self) -> Fraction:
        return self.incident_weight / self.n


def evaluate_lin2(inst: Lin2Instance, x: Assignment) -> Fraction:
    """Exact value of the multilinear form at x."""
    if x.n != inst.n:
        raise DimensionMismatchError(f"assignment has n={x.n}, instance has n={inst.n}")
    total = Fraction(0)
    for subset, coeff in inst.terms:
        prod = 1
        for i in subset:
            prod *= x.signs[i - 1]
        total += coeff * prod
    return total


def evaluate_csp(inst: CspInstance, x: Assignment) -> Fraction:
    """Exact centered objective: sum of per-constraint contributions."""
    if x.n != inst.n:
        raise DimensionMismatchError(f"assignment has n={x.n}, instance has n={inst.n}")
    return sum((c.value(x) for c in inst.constraints), Fraction(0))


def centered_mean_check(c: Constraint) -> Fraction:
    """Average of the centered contribution over all local assignments.

    Always exactly zero for a valid constraint; exposed so the invariant
    can be asserted rather than assumed.
    """
    kj = c.arity
    total = Fraction(0)
    for b in range(1 << kj):
        if (c.truth_table >> b) & 1:
            total += -c.weight
        else:
            total += c.violation_value
    return total / (1 << kj)


def compute_stats(inst: CspInstance) -> InstanceStats:
    """All derived degree statistics, exactly."""
    degrees = [Fraction(0)] * inst.n
    sigma = Fraction(0)
    for c in inst.constraints:
        for v in c.vars:
            degrees[v - 1] += c.weight
        sigma += c.arity * c.weight
    w_total = inst.total_weight
    if sigma > 0:
        sum_sq = sum((d * d for d in degrees), Fraction(0))
        irregularity = inst.n * sum_sq / (sigma * sigma)
        d_avg = sigma / inst.n
        light = frozenset(i + 1 for i, d in enumerate(degrees) if d <= 2 * d_avg)
    else:
        irregularity = Fraction(1)
        light = frozenset(range(1, inst.n + 1))
    lambda_max = max((c.lipschitz_factor for c in inst.constraints), default=Fraction(0))
    stats = InstanceStats(
        n=inst.n,
        total_weight=w_total,
        incident_weight=sigma,
        degrees=tuple(degrees),
        irregularity=irregularity,
        lambda_max=lambda_max,
        light_set=light,
    )
    assert stats.irregularity >= 1 or sigma == 0
    assert len(stats.light_set) >= ceil(inst.n / 2)
    return stats


def _parity_table(kj: int, orientation: int) -> int:
    """Truth table of the parity predicate prod(signs) == orientation."""
    table = 0
    for b in range(1 << kj):
        prod = -1 if popcount(b) % 2 else 1
        if prod == orientation:
            table |= 1 << b
    return table


def lin2_of_csp_parity(inst: CspInstance) -> Lin2Instance:
    """Convert an all-parity CSP into the equivalent degree-k form.

    Each arity-k parity constraint requiring prod x_S = sigma contributes
    the monomial -sigma * w on subset S (satisfied -> -w, violated -> +w
    since s_j = 2^{k-1}); coefficients on a common subset aggregate.
    Rejects any constraint that is not an exact-arity-k parity predicate.
    """
    terms = []
    for idx, c in enumerate(inst.constraints, start=1):
        if c.arity != inst.k:
            raise InvalidInstanceError(f"constraint {idx} has arity {c.arity} != k={inst.k}")
        for orientation in (1, -1):
            if c.truth_table == _parity_table(c.arity, orientation):
                terms.append((c.vars, -orientation * c.weight))
                break
        else:
            raise InvalidInstanceError(f"constraint {idx} is not a parity predicate")
    return Lin2Instance.from_terms(inst.n, inst.k, terms)
