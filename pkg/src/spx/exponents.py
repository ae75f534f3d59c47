"""Closed-form exponent, radius, and rate calculators.

Everything here is pure arithmetic on instance statistics: the binary
entropy, the flip rates and search radii of the two search regimes, the
McDiarmid threshold exponent, the combined classical exponents, the
quantum comparison exponents, and exact big-integer verification of the
binomial-coefficient lower bounds that back the entropy counting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, floor

from .instances import InstanceStats

# Rational bracket around e, tight enough to decide every bound check
# encountered in practice one-sidedly.
_E_LO = Fraction(27182818284590452353602874713526, 10 ** 31)
_E_HI = Fraction(27182818284590452353602874713527, 10 ** 31)


def binary_entropy(t: float) -> float:
    """h(t) = -t log2 t - (1-t) log2(1-t), with h(0) = h(1) = 0."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"entropy argument {t} outside [0, 1]")
    if t == 0.0 or t == 1.0:
        return 0.0
    return -t * math.log2(t) - (1.0 - t) * math.log2(1.0 - t)


@dataclass
class FlipRates:
    q_eta: float      # limiting flip rate (1 - (1-eta)^(1/k)) / 2
    q_eta_n: float    # finite-n flip rate, strictly below q_eta
    r_ns: int         # search radius ceil(q_eta n + 2 n^(2/3))


def flip_rates(eta, k: int, n: int) -> FlipRates:
    eta = Fraction(eta)
    if not 0 < eta < 1:
        raise ValueError("eta must satisfy 0 < eta < 1")
    if k < 1 or n < 1:
        raise ValueError("k and n must be positive")
    q_eta = (1.0 - float(1 - eta) ** (1.0 / k)) / 2.0
    q_eta_n = (1.0 - float(1 - eta + eta / n) ** (1.0 / k)) / 2.0
    r_ns = math.ceil(q_eta * n + 2.0 * n ** (2.0 / 3.0))
    return FlipRates(q_eta=q_eta, q_eta_n=q_eta_n, r_ns=r_ns)


def lipschitz_params(stats: InstanceStats, h_min: Fraction, eta) -> tuple[Fraction, int]:
    """(theta_eta, r_lip): the normalized light-ball parameter
    eta |H_min| / (Lambda_max Sigma) and the radius floor(theta n / 2)."""
    eta = Fraction(eta)
    if h_min >= 0:
        raise ValueError("requires H_min < 0")
    if not 0 < eta < 1:
        raise ValueError("eta must satisfy 0 < eta < 1")
    theta = eta * abs(h_min) / (stats.lambda_max * stats.incident_weight)
    r_lip = floor(theta * stats.n / 2)
    return theta, r_lip


def mcdiarmid_gamma(stats: InstanceStats, h_min: Fraction, eta) -> float:
    """Threshold exponent from the bounded-difference concentration bound:
    (2 (1-eta)^2 / ln 2) * (|H_min| / Sigma)^2 / (Lambda_max^2 D)."""
    eta = Fraction(eta)
    if h_min >= 0:
        raise ValueError("requires H_min < 0")
    # Exact rational core, converted to float at the end.
    core = (2 * (1 - eta) ** 2
            * (abs(h_min) / stats.incident_weight) ** 2
            / (stats.lambda_max ** 2 * stats.irregularity))
    return float(core) / math.log(2.0)


@dataclass
class ExponentReport:
    eta: Fraction
    regime: str                      # "correlated-pair" | "local-lipschitz"
    gamma: float
    kappa: float
    c_cl: float
    q_eta: float | None = None
    q_eta_n: float | None = None
    r_ns: int | None = None
    theta_eta: Fraction | None = None
    r_lip: int | None = None
    coarse_lower_bound: float | None = None
    c_q: float | None = None
    ratio: float | None = None

    def to_dict(self) -> dict:
        return {
            "eta": str(self.eta),
            "regime": self.regime,
            "gamma": self.gamma,
            "kappa": self.kappa,
            "c_cl": self.c_cl,
            "c_q": self.c_q,
            "ratio": self.ratio,
            "q_eta": self.q_eta,
            "r_ns": self.r_ns,
            "theta_eta": None if self.theta_eta is None else str(self.theta_eta),
            "r_lip": self.r_lip,
        }


def classical_exponent_case1(gamma: float, eta, k: int, n: int | None = None) -> ExponentReport:
    """Given-threshold regime: c = min(gamma, h(q_eta))."""
    eta = Fraction(eta)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    rates = flip_rates(eta, k, n if n is not None else 1_000_000)
    kappa = binary_entropy(rates.q_eta)
    return ExponentReport(
        eta=eta,
        regime="correlated-pair",
        gamma=gamma,
        kappa=kappa,
        c_cl=min(gamma, kappa),
        q_eta=rates.q_eta,
        q_eta_n=rates.q_eta_n,
        r_ns=rates.r_ns if n is not None else None,
        # min(gamma, h(eta/2k)) >= gamma * eta / k, the chained coarse bound.
        coarse_lower_bound=gamma * float(eta) / k,
    )


def classical_exponent_case2(stats: InstanceStats, h_min: Fraction,
                             eta=Fraction(1, 2)) -> ExponentReport:
    """Instance-determined regime: c = min(gamma_eta, h(theta_eta)/2)."""
    eta = Fraction(eta)
    gamma = mcdiarmid_gamma(stats, h_min, eta)
    theta, r_lip = lipschitz_params(stats, h_min, eta)
    kappa = binary_entropy(min(float(theta), 1.0)) / 2.0
    return ExponentReport(
        eta=eta,
        regime="local-lipschitz",
        gamma=gamma,
        kappa=kappa,
        c_cl=min(gamma, kappa),
        theta_eta=theta,
        r_lip=r_lip,
    )


def case2_corollary_bound(stats: InstanceStats, h_min: Fraction, k: int) -> float:
    """Closed-form lower bound on the eta = 1/2 exponent:
    (1 / (2 ln 2)) * (|H_min| / W)^2 / (Lambda_max^2 k^2 D)."""
    core = ((abs(h_min) / stats.total_weight) ** 2
            / (stats.lambda_max ** 2 * k ** 2 * stats.irregularity))
    return float(core) / (2.0 * math.log(2.0))


def quantum_exponent_case1(gamma: float, eta, k: int) -> float:
    """Prior quantum exponent in the given-threshold regime:
    gamma * eta / (2 (2 + ln 2) k), about 0.1856 gamma eta / k."""
    return gamma * float(Fraction(eta)) / (2.0 * (2.0 + math.log(2.0)) * k)


def quantum_exponent_case2(delta: float, k: int, irregularity: float) -> float:
    """Prior quantum exponent in the instance-determined regime:
    0.0578 * Delta^3 / (2^{3k} k^3 D), Delta the normalized optimum scale."""
    return 0.0578 * delta ** 3 / (2.0 ** (3 * k) * k ** 3 * irregularity)


def quantum_comparison(report: ExponentReport, k: int,
                       delta: float | None = None,
                       irregularity: float | None = None) -> tuple[float, float]:
    """Attach the matching quantum exponent and the classical/quantum
    ratio to a report; the ratio exceeds 1 on all valid inputs."""
    if report.regime == "correlated-pair":
        c_q = quantum_exponent_case1(report.gamma, report.eta, k)
    else:
        if delta is None or irregularity is None:
            raise ValueError("local-lipschitz comparison needs delta and irregularity")
        c_q = quantum_exponent_case2(delta, k, irregularity)
    report.c_q = c_q
    report.ratio = report.c_cl / c_q if c_q > 0 else math.inf
    return c_q, report.ratio


@dataclass
class BinomialBoundCheck:
    N: int
    t: Fraction
    r: int
    layer_ok: bool
    rounded_ok: bool
    layer_margin_log2: float
    rounded_margin_log2: float

    @property
    def passed(self) -> bool:
        return self.layer_ok and self.rounded_ok


def _pow00(base: int, exp: int) -> int:
    # 0^0 = 1 convention for entropy-style products.
    return 1 if exp == 0 else base ** exp


# One-sided log2 of a positive integer: math.log2 on big ints is correct
# to ~1 ulp, so widening by a generous relative + absolute guard gives a
# rigorous bracket.
def _log2_lo(x: int) -> float:
    v = math.log2(x)
    return v - (1e-12 * abs(v) + 1e-9)


def _log2_hi(x: int) -> float:
    v = math.log2(x)
    return v + (1e-12 * abs(v) + 1e-9)


def verify_binomial_bounds(N: int, t) -> BinomialBoundCheck:
    """Exact verification of the two binomial lower bounds.

    Layer bound: C(N, r) >= 2^(N h(r/N)) / (N+1), decided exactly since
    2^(N h(r/N)) = N^N / (r^r (N-r)^(N-r)).

    Rounded bound at r = floor(N t): C(N, r) >= 2^(N h(t)) / (e N (N+1)),
    decided exactly by clearing the rational exponent of t and replacing
    e by a one-sided rational bracket.
    """
    t = Fraction(t)
    if N < 1:
        raise ValueError("N must be >= 1")
    if not 0 <= t <= Fraction(1, 2):
        raise ValueError("t must lie in [0, 1/2]")
    r = floor(N * t)
    c = comb(N, r)

    # Layer bound, pure big integers.
    lhs = c * (N + 1) * _pow00(r, r) * _pow00(N - r, N - r)
    rhs = N ** N
    layer_ok = lhs >= rhs

    # Rounded bound: raise both sides to the power q where t = p/q, i.e.
    # decide (c N (N+1) e)^q (p^p (q-p)^(q-p))^N >= q^(qN) with e replaced
    # by a one-sided rational bracket.  A rigorous log2 bracket separates
    # the sides almost always; the full big-integer exponentiation runs
    # only when it cannot, so the decision stays exact either way.
    p, q = t.numerator, t.denominator
    base = _pow00(p, p) * _pow00(q - p, q - p)
    a_int = c * N * (N + 1)

    def bracket_margin(e_frac: Fraction) -> tuple[float, float]:
        lo = (q * _log2_lo(a_int * e_frac.numerator) + N * _log2_lo(base)
              - q * _log2_hi(e_frac.denominator) - q * N * _log2_hi(q))
        hi = (q * _log2_hi(a_int * e_frac.numerator) + N * _log2_hi(base)
              - q * _log2_lo(e_frac.denominator) - q * N * _log2_lo(q))
        return lo, hi

    def exact_holds(e_frac: Fraction) -> bool:
        return (a_int ** q * e_frac.numerator ** q * base ** N
                >= _pow00(q, q * N) * e_frac.denominator ** q)

    def holds(e_frac: Fraction) -> bool:
        lo, hi = bracket_margin(e_frac)
        if lo > 0:
            return True
        if hi < 0:
            return False
        return exact_holds(e_frac)

    rounded_ok = holds(_E_LO)
    if not rounded_ok and holds(_E_HI):
        raise ArithmeticError("e bracket too loose to decide the rounded bound")

    # Float log2 margins for reporting.
    log2c = (math.lgamma(N + 1) - math.lgamma(r + 1) - math.lgamma(N - r + 1)) / math.log(2)
    layer_margin = log2c - (N * binary_entropy(r / N) - math.log2(N + 1))
    rounded_margin = log2c - (N * binary_entropy(float(t))
                              - math.log2(math.e * N * (N + 1)))
    return BinomialBoundCheck(
        N=N, t=t, r=r,
        layer_ok=layer_ok, rounded_ok=rounded_ok,
        layer_margin_log2=layer_margin, rounded_margin_log2=rounded_margin,
    )
