"""Binomial, incomplete beta and chi-square (1 df) kernels.

Binomial queries run in one of two modes:

* exact: ``theta`` is rational (``int`` or ``Fraction``) and ``n <= EXACT_MAX_N``.
  Probabilities are ``Fraction`` values whose denominator divides
  ``theta.denominator ** n``.
* float: saddle-point (Loader) evaluation of the mass function in log space,
  with tail sums taken over the smaller tail.

Passing ``exact=`` to :class:`BinomialModel` overrides the automatic choice.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Union

__all__ = [
    "EXACT_MAX_N",
    "BinomialModel",
    "DomainError",
    "ProbValue",
    "bd0",
    "binom_cdf",
    "binom_logpmf",
    "binom_pmf",
    "binom_quantile",
    "chisq1_sf",
    "reg_inc_beta",
    "stirlerr",
]

EXACT_MAX_N = 1024

#: A probability: ``Fraction`` in exact mode, ``float`` otherwise.
ProbValue = Union[Fraction, float]

_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_LN_2PI = math.log(2.0 * math.pi)


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


@dataclass(frozen=True)
class BinomialModel:
    """Binomial(n, theta).

    ``theta`` given as ``int``/``Fraction`` selects exact arithmetic for
    ``n <= EXACT_MAX_N``; a ``float`` selects float mode.  ``exact`` forces
    either mode (a float theta forced exact is converted without rounding).
    """

    n: int
    theta: ProbValue = Fraction(1, 2)
    exact: bool | None = None

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, int):
            raise DomainError(f"n must be an integer, got {self.n!r}")
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.theta <= 1:
            raise DomainError(f"theta must lie in [0, 1], got {self.theta!r}")
        if self.exact and not isinstance(self.theta, Rational):
            object.__setattr__(self, "theta", Fraction(self.theta))

    @property
    def is_exact(self) -> bool:
        if self.exact is not None:
            return self.exact
        return isinstance(self.theta, Rational) and self.n <= EXACT_MAX_N

    def with_mode(self, exact: bool) -> BinomialModel:
        return BinomialModel(self.n, self.theta, exact)


def _check_k(model: BinomialModel, k: int) -> None:
    if isinstance(k, bool) or not isinstance(k, int):
        raise DomainError(f"k must be an integer, got {k!r}")
    if not 0 <= k <= model.n:
        raise DomainError(f"k={k} outside [0, {model.n}]")


# ---------------------------------------------------------------------------
# exact mode


@lru_cache(maxsize=64)
def _exact_cumulative(n: int, num: int, den: int) -> tuple[tuple[int, ...], tuple[int, ...], int]:
    """Mass and cumulative numerators over the common denominator ``den**n``."""
    rest = den - num
    mass = []
    c = 1
    for k in range(n + 1):
        mass.append(c * num**k * rest ** (n - k))
        c = c * (n - k) // (k + 1)
    cum = []
    total = 0
    for w in mass:
        total += w
        cum.append(total)
    return tuple(mass), tuple(cum), den**n


def _exact_tables(model: BinomialModel):
    theta = Fraction(model.theta)
    return _exact_cumulative(model.n, theta.numerator, theta.denominator)


# ---------------------------------------------------------------------------
# float mode (Loader's saddle-point expansion)


def _stirlerr_small(n: float) -> float:
    if n == int(n):
        return math.log(math.factorial(int(n))) - (n + 0.5) * math.log(n) + n - _LN_SQRT_2PI
    return math.lgamma(n + 1.0) - (n + 0.5) * math.log(n) + n - _LN_SQRT_2PI


_S0, _S1, _S2, _S3, _S4 = 1 / 12, 1 / 360, 1 / 1260, 1 / 1680, 1 / 1188


def stirlerr(n: float) -> float:
    """log(n!) - log(sqrt(2 pi n) (n/e)^n), the Stirling remainder."""
    if n <= 0:
        raise DomainError(f"stirlerr needs n > 0, got {n}")
    if n <= 15.0:
        return _stirlerr_small(n)
    nn = n * n
    if n > 500:
        return (_S0 - _S1 / nn) / n
    if n > 80:
        return (_S0 - (_S1 - _S2 / nn) / nn) / n
    if n > 35:
        return (_S0 - (_S1 - (_S2 - _S3 / nn) / nn) / nn) / n
    return (_S0 - (_S1 - (_S2 - (_S3 - _S4 / nn) / nn) / nn) / nn) / n


def bd0(x: float, np_: float) -> float:
    """Deviance term ``x log(x/np) + np - x`` evaluated without cancellation."""
    if x == 0:
        return np_
    d = x - np_
    if abs(d) < 0.1 * (x + np_):
        v = d / (x + np_)
        s = d * v
        ej = 2.0 * x * v
        v2 = v * v
        j = 1
        while True:
            ej *= v2
            s1 = s + ej / (2 * j + 1)
            if s1 == s:
                return s1
            s = s1
            j += 1
    return x * math.log(x / np_) + np_ - x


def _log_dbinom_raw(x: float, y: float, p: float, q: float) -> float:
    """log C(x+y, x) p^x q^y for real x, y >= 0.

    Taking both counts keeps the smaller one exact when the other is large.
    """
    n = x + y
    if p == 0:
        return 0.0 if x == 0 else -math.inf
    if q == 0:
        return 0.0 if y == 0 else -math.inf
    if x == 0:
        if n == 0:
            return 0.0
        return -bd0(n, n * q) - n * p if p < 0.1 else n * math.log(q)
    if y == 0:
        return -bd0(n, n * p) - n * q if q < 0.1 else n * math.log(p)
    lc = stirlerr(n) - stirlerr(x) - stirlerr(y) - bd0(x, n * p) - bd0(y, n * q)
    lf = _LN_2PI + math.log(x) + math.log(y / n)
    return lc - 0.5 * lf


def binom_logpmf(model: BinomialModel, k: int) -> float:
    """Natural log of P(X = k), always in floating point."""
    _check_k(model, k)
    p = float(model.theta)
    q = float(1 - model.theta)
    return _log_dbinom_raw(k, model.n - k, p, q)


def _float_pmf(model: BinomialModel, k: int) -> float:
    return math.exp(binom_logpmf(model, k))


def _tail_sum(model: BinomialModel, start: int, stop: int, step: int) -> float:
    # terms shrink monotonically away from the mode, so stop once negligible
    terms = []
    acc = 0.0
    for i in range(start, stop, step):
        t = _float_pmf(model, i)
        terms.append(t)
        acc += t
        if t < acc * 1e-18 or (t == 0.0 and acc > 0.0):
            break
    return math.fsum(terms)


def _float_cdf(model: BinomialModel, k: int) -> float:
    n = model.n
    if k >= n:
        return 1.0
    if k < n * float(model.theta):
        return min(1.0, _tail_sum(model, k, -1, -1))
    return max(0.0, 1.0 - _tail_sum(model, k + 1, n + 1, 1))


# ---------------------------------------------------------------------------
# public binomial operations


def binom_pmf(model: BinomialModel, k: int) -> ProbValue:
    """P(X = k)."""
    _check_k(model, k)
    if model.is_exact:
        mass, _, total = _exact_tables(model)
        return Fraction(mass[k], total)
    return _float_pmf(model, k)


def binom_cdf(model: BinomialModel, k: int) -> ProbValue:
    """P(X <= k)."""
    _check_k(model, k)
    if model.is_exact:
        _, cum, total = _exact_tables(model)
        return Fraction(cum[k], total)
    return _float_cdf(model, k)


def binom_quantile(model: BinomialModel, p: ProbValue) -> int:
    """Smallest k with P(X <= k) >= p."""
    if not 0 <= p <= 1:
        raise DomainError(f"p must lie in [0, 1], got {p!r}")
    if model.is_exact:
        _, cum, total = _exact_tables(model)
        target = Fraction(p)
        # cum[k] / total >= num / den  <=>  cum[k] * den >= num * total
        return bisect_left(cum, True, key=lambda c: c * target.denominator >= target.numerator * total)
    lo, hi = 0, model.n
    while lo < hi:
        mid = (lo + hi) // 2
        if _float_cdf(model, mid) >= p:
            hi = mid
        else:
            lo = mid + 1
    return lo


# ---------------------------------------------------------------------------
# incomplete beta


def _lgamma_ratio(s: float, big: float) -> float:
    """lgamma(big) - lgamma(big + s) for small s > 0."""
    if big <= 15.0:
        return math.lgamma(big) - math.lgamma(big + s)
    # lgamma(z) = stirlerr(z-1) + (z-1/2) log(z-1) - (z-1) + log sqrt(2 pi), shifted by one
    # to keep the log terms in log1p form
    b1, c1 = big - 1.0, big + s - 1.0
    return (
        stirlerr(b1)
        - stirlerr(c1)
        - (b1 + 0.5) * math.log1p(s / b1)
        - s * math.log(c1)
        + s
    )


def _log_beta_front(x: float, a: float, b: float) -> float:
    """log of x^a (1-x)^b / B(a, b)."""
    if a >= 1.0 and b >= 1.0:
        return math.log(x) + math.log1p(-x) + math.log(a + b - 1.0) + _log_dbinom_raw(a - 1.0, b - 1.0, x, 1.0 - x)
    s, big = (a, b) if a <= b else (b, a)
    lbeta = math.lgamma(s) + _lgamma_ratio(s, big)
    return a * math.log(x) + b * math.log1p(-x) - lbeta


def _betacf(x: float, a: float, b: float, max_iter: int = 20000) -> float:
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def reg_inc_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if not a > 0:
        raise DomainError(f"a must be > 0, got {a!r}")
    if not b > 0:
        raise DomainError(f"b must be > 0, got {b!r}")
    if not 0 <= x <= 1:
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    x, a, b = float(x), float(a), float(b)
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    if x > (a + 1.0) / (a + b + 2.0):
        return 1.0 - _reg_inc_beta_cf(1.0 - x, b, a)
    return _reg_inc_beta_cf(x, a, b)


def _reg_inc_beta_cf(x: float, a: float, b: float) -> float:
    return math.exp(_log_beta_front(x, a, b)) * _betacf(x, a, b) / a


# ---------------------------------------------------------------------------
# chi-square, one degree of freedom


def chisq1_sf(g: float) -> float:
    """P(chi2_1 > g) = erfc(sqrt(g / 2))."""
    if not g >= 0:
        raise DomainError(f"chi-square statistic must be >= 0, got {g!r}")
    return math.erfc(math.sqrt(g / 2.0))
