"""Likelihood-ratio (G) goodness of fit of counts to a fixed-theta binomial."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from statistics import NormalDist

from .bayesrule import CountData
from .exactprob import DomainError, bd0, chisq1_sf

CONSISTENT = "consistent"
DISCREPANT = "discrepant"
DEFAULT_LR_THRESHOLD = 5.0


def _check_theta0(theta0: float) -> float:
    if not 0 < theta0 < 1:
        raise DomainError(f"theta0 must lie strictly inside (0, 1), got {theta0!r}")
    return float(theta0)


def log_likelihood_ratio(data: CountData, theta0: float) -> float:
    """ln L(k/n) - ln L(theta0), as a sum of two non-negative deviance terms."""
    theta0 = _check_theta0(theta0)
    n = data.n
    return bd0(data.k, n * theta0) + bd0(data.q, n * (1.0 - theta0))


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def likelihood_ratio(data: CountData, theta0: float) -> float:
    """L(k/n) / L(theta0); ``inf`` once it exceeds the float range."""
    return _exp(log_likelihood_ratio(data, theta0))


def g_statistic(data: CountData, theta0: float) -> float:
    return 2.0 * log_likelihood_ratio(data, theta0)


def lr_threshold_for_alpha(alpha: float) -> float:
    """LR cutoff at which the G test's p-value equals alpha; LR >= cutoff iff p <= alpha."""
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    z = NormalDist().inv_cdf(1.0 - alpha / 2.0)
    return math.exp(z * z / 2.0)


@dataclass(frozen=True)
class FitReport:
    lr: float
    g2: float
    p_value: float
    theta0: float
    verdict: str
    threshold: float

    def as_dict(self) -> dict:
        return asdict(self)


def fit_counts(data: CountData, theta0: float = 0.5, threshold: float = DEFAULT_LR_THRESHOLD) -> FitReport:
    """Fit report; the verdict is ``consistent`` iff LR < threshold."""
    if not threshold > 1:
        raise DomainError(f"LR threshold must be > 1, got {threshold!r}")
    log_lr = log_likelihood_ratio(data, theta0)
    lr = _exp(log_lr)
    g2 = 2.0 * log_lr
    return FitReport(
        lr=lr,
        g2=g2,
        p_value=chisq1_sf(g2),
        theta0=float(theta0),
        verdict=CONSISTENT if lr < threshold else DISCREPANT,
        threshold=float(threshold),
    )
