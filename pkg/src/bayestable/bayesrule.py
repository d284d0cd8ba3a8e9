"""Fixed-parameter interval rule, table distance, and the uniform-prior rival.

The interval rule treats the scored throws as Binomial(n, theta) with theta
fixed (1/2 for symmetric targeted throws) and reads an equal-tailed count
interval off the exact CDF.  The uniform-prior posterior is kept alongside
so the two readings can be compared on the same counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactprob import BinomialModel, DomainError, ProbValue, binom_cdf, binom_quantile, reg_inc_beta
from .units import Quantity

NONSTRICT_BOTH = "nonstrict-both"
STRICT_LOWER = "strict-lower/nonstrict-upper"
CONVENTIONS = (NONSTRICT_BOTH, STRICT_LOWER)
#: tag for endpoints supplied by the caller rather than scanned
GIVEN = "given"


@dataclass(frozen=True)
class CountData:
    n: int
    k: int

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        if isinstance(self.k, bool) or not isinstance(self.k, int) or not 0 <= self.k <= self.n:
            raise DomainError(f"k={self.k!r} outside [0, {self.n}]")

    @property
    def q(self) -> int:
        return self.n - self.k

    def proportion(self) -> Fraction:
        return Fraction(self.k, self.n)


@dataclass(frozen=True)
class PosteriorQuery:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not 0 <= self.lo < self.hi <= 1:
            raise DomainError(f"need 0 <= lo < hi <= 1, got lo={self.lo!r}, hi={self.hi!r}")


def _cdf_below(model: BinomialModel, k: int) -> ProbValue:
    """P(X < k)."""
    if k <= 0:
        return Fraction(0) if model.is_exact else 0.0
    return binom_cdf(model, k - 1)


def _coverage(model: BinomialModel, k_lo: int, k_hi: int) -> ProbValue:
    return binom_cdf(model, k_hi) - _cdf_below(model, k_lo)


@dataclass(frozen=True)
class CentralInterval:
    """Count interval [k_lo, k_hi] with achieved coverage P(k_lo <= X <= k_hi)."""

    model: BinomialModel
    k_lo: int
    k_hi: int
    coverage: ProbValue
    convention: str
    alpha: ProbValue

    def __post_init__(self) -> None:
        n = self.model.n
        if not 0 <= self.k_lo <= self.k_hi <= n:
            raise DomainError(f"need 0 <= k_lo <= k_hi <= {n}, got ({self.k_lo}, {self.k_hi})")
        expected = _coverage(self.model, self.k_lo, self.k_hi)
        if self.coverage != expected:
            raise ValueError(f"coverage {self.coverage!r} disagrees with CDF difference {expected!r}")

    @classmethod
    def from_endpoints(cls, model: BinomialModel, k_lo: int, k_hi: int, alpha: ProbValue = Fraction(1, 20)) -> CentralInterval:
        if not 0 <= k_lo <= k_hi <= model.n:
            raise DomainError(f"need 0 <= k_lo <= k_hi <= {model.n}, got ({k_lo}, {k_hi})")
        return cls(model, k_lo, k_hi, _coverage(model, k_lo, k_hi), GIVEN, alpha)

    @property
    def n(self) -> int:
        return self.model.n

    def as_dict(self) -> dict:
        d = {
            "n": self.n,
            "theta": float(self.model.theta),
            "k_lo": self.k_lo,
            "k_hi": self.k_hi,
            "coverage": float(self.coverage),
            "convention": self.convention,
            "alpha": float(self.alpha),
        }
        if isinstance(self.coverage, Fraction):
            d["coverage_exact"] = str(self.coverage)
        return d


def _largest_at_most(model: BinomialModel, p: ProbValue) -> int:
    """Largest k with P(X <= k) <= p, or -1 if none."""
    lo, hi = 0, model.n + 1
    while lo < hi:
        mid = (lo + hi) // 2
        if mid <= model.n and binom_cdf(model, mid) <= p:
            lo = mid + 1
        else:
            hi = mid
    return lo - 1


def central_interval(model: BinomialModel, alpha: ProbValue = Fraction(1, 20), convention: str = NONSTRICT_BOTH) -> CentralInterval:
    """Equal-tailed count interval leaving about alpha/2 in each tail.

    ``nonstrict-both``: k_lo and k_hi are the smallest k with CDF(k) >= alpha/2
    and >= 1 - alpha/2; coverage is at least 1 - alpha.

    ``strict-lower/nonstrict-upper``: k_lo is the largest k with P(X < k) < alpha/2
    and k_hi the largest k with P(X <= k) <= 1 - alpha/2; coverage may fall
    below 1 - alpha.

    With an exact model a float ``alpha`` is read by its decimal repr, so
    0.05 means exactly 1/20.
    """
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    if model.is_exact and not isinstance(alpha, Fraction):
        alpha = Fraction(str(alpha)) if isinstance(alpha, float) else Fraction(alpha)
    tail = alpha / 2
    if convention == NONSTRICT_BOTH:
        k_lo = binom_quantile(model, tail)
        k_hi = binom_quantile(model, 1 - tail)
    elif convention == STRICT_LOWER:
        # P(X < k) < tail  <=>  CDF(k-1) < tail; largest such k is quantile(tail)
        k_lo = binom_quantile(model, tail)
        k_hi = _largest_at_most(model, 1 - tail)
        if k_hi < k_lo:
            raise DomainError(f"convention {convention!r} yields an empty interval for alpha={alpha}")
    else:
        raise DomainError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")
    return CentralInterval(model, k_lo, k_hi, _coverage(model, k_lo, k_hi), convention, alpha)


def interval_to_distance(interval: CentralInterval | tuple[int, int], n: int | None, span: Quantity) -> Quantity:
    """Width of the count interval as a fraction of n, scaled to ``span``."""
    if isinstance(interval, CentralInterval):
        k_lo, k_hi = interval.k_lo, interval.k_hi
        n = interval.n if n is None else n
    else:
        k_lo, k_hi = interval
    if n is None or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if not 0 <= k_lo <= k_hi <= n:
        raise DomainError(f"need 0 <= k_lo <= k_hi <= {n}, got ({k_lo}, {k_hi})")
    if not span.value > 0:
        raise DomainError(f"span must be > 0, got {span.value!r}")
    width = Fraction(k_hi - k_lo, n)
    if span.is_exact:
        return Quantity(width * Fraction(span.value), span.unit)
    return Quantity(float(width * Fraction(span.value)), span.unit)


@dataclass(frozen=True)
class EndpointCheck:
    """How a pair of published endpoints fares under one reading of Pr(k)."""

    reading: str
    k_lo: int
    k_hi: int
    pr_lo: Fraction
    pr_hi: Fraction
    lower_ok: bool
    upper_ok: bool
    coverage: Fraction
    coverage_ok: bool

    @property
    def matched(self) -> bool:
        return self.lower_ok and self.upper_ok and self.coverage_ok


def check_endpoints(model: BinomialModel, k_lo: int, k_hi: int, alpha: ProbValue = Fraction(1, 20)) -> list[EndpointCheck]:
    """Test ``Pr(k_hi) <= 1 - alpha/2``, ``Pr(k_lo) < alpha/2`` and
    ``Pr(k_hi) - Pr(k_lo) == 1 - alpha`` (to whole percent) for Pr(k) read as
    P(X <= k), as P(X < k), and with the lower end strict."""
    alpha = Fraction(alpha) if not isinstance(alpha, float) else Fraction(str(alpha))
    tail = alpha / 2
    out = []
    at_most = lambda k: binom_cdf(model, k)  # noqa: E731
    below = lambda k: _cdf_below(model, k)  # noqa: E731
    readings = (
        ("P(X<=k)", at_most, at_most),
        ("P(X<k)", below, below),
        ("lower P(X<k), upper P(X<=k)", below, at_most),
    )
    for reading, pr_lower, pr_upper in readings:
        lo, hi = pr_lower(k_lo), pr_upper(k_hi)
        cov = hi - lo
        out.append(
            EndpointCheck(
                reading,
                k_lo,
                k_hi,
                lo,
                hi,
                lo < tail,
                hi <= 1 - tail,
                cov,
                round(float(cov) * 100) == round(float(1 - alpha) * 100),
            )
        )
    return out


def beta_posterior_prob(data: CountData, query: PosteriorQuery) -> float:
    """Posterior mass of theta in (lo, hi) under a uniform prior."""
    a, b = data.k + 1, data.n - data.k + 1
    return reg_inc_beta(query.hi, a, b) - reg_inc_beta(query.lo, a, b)


def beta_posterior_interval(data: CountData, alpha: float = 0.05) -> tuple[float, float]:
    """Equal-tailed credible interval for theta under a uniform prior."""
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    a, b = data.k + 1, data.n - data.k + 1

    def inverse(p: float) -> float:
        lo, hi = 0.0, 1.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if reg_inc_beta(mid, a, b) < p:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    return inverse(alpha / 2), inverse(1 - alpha / 2)


def discrete_posterior(data: CountData, cells: int) -> np.ndarray:
    """Posterior over m equal cells of the table, cell i centred at (i + 0.5)/m."""
    if isinstance(cells, bool) or not isinstance(cells, (int, np.integer)) or cells < 1:
        raise DomainError(f"cells must be a positive integer, got {cells!r}")
    theta = (np.arange(cells) + 0.5) / cells
    logw = data.k * np.log(theta) + data.q * np.log1p(-theta)
    w = np.exp(logw - logw.max())
    return w / math.fsum(w)


def cell_mass(weights: Sequence[float], lo: float, hi: float) -> float:
    """Total weight of cells whose centres fall inside (lo, hi)."""
    w = np.asarray(weights)
    m = len(w)
    centres = (np.arange(m) + 0.5) / m
    return math.fsum(w[(centres > lo) & (centres < hi)])
