"""Reference computations that share no code with the package."""

from fractions import Fraction
from math import comb

import mpmath as mp
from scipy import integrate
import math


def exact_pmf(n, k, theta=Fraction(1, 2)):
    theta = Fraction(theta)
    return comb(n, k) * theta**k * (1 - theta) ** (n - k)


def exact_cdf(n, k, theta=Fraction(1, 2)):
    return sum((exact_pmf(n, i, theta) for i in range(k + 1)), Fraction(0))


def scan_quantile(n, p, theta=Fraction(1, 2)):
    acc = Fraction(0)
    for k in range(n + 1):
        acc += exact_pmf(n, k, theta)
        if acc >= p:
            return k
    return n


def beta_cdf_quad(x, a, b, dps=40):
    """I_x(a, b) by adaptive quadrature of the beta density.

    Integrates over the tail nearer zero, after u = t**a removes the pole at 0.
    """
    with mp.workdps(dps):
        a, b, x = mp.mpf(a), mp.mpf(b), mp.mpf(x)
        if x > a / (a + b):
            return float(1 - _lower_tail(1 - x, b, a))
        return float(_lower_tail(x, a, b))


def _lower_tail(x, a, b):
    lb = mp.loggamma(a) + mp.loggamma(b) - mp.loggamma(a + b)
    g = lambda u: mp.exp((b - 1) * mp.log1p(-(u ** (1 / a))) - lb) / a
    mode = a / (a + b)
    sd = mp.sqrt(a * b / ((a + b) ** 2 * (a + b + 1)))
    pts = {mp.mpf(0), x} | {t for t in (mode + j * sd for j in range(-40, 41)) if 0 < t < x}
    return mp.quad(g, sorted(t**a for t in pts))


def chisq1_sf_quad(g):
    """P(chi2_1 > g) by integrating the density, after u = sqrt(x) removes the pole."""
    val, _ = integrate.quad(lambda u: 2.0 * math.exp(-u * u / 2.0) / math.sqrt(2.0 * math.pi), math.sqrt(g), math.inf, epsabs=1e-14, epsrel=1e-13)
    return val
