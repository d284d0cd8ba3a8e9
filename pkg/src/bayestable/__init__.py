"""Fixed-parameter binomial model of targeted throws on a bowling green."""

from .bayesrule import (
    CentralInterval,
    CountData,
    PosteriorQuery,
    beta_posterior_prob,
    central_interval,
    discrete_posterior,
    interval_to_distance,
)
from .exactprob import BinomialModel, DomainError, binom_cdf, binom_pmf, binom_quantile, chisq1_sf, reg_inc_beta
from .gof import FitReport, fit_counts, g_statistic, likelihood_ratio
from .greensim import GreenGeometry, SessionSummary, ThrowRecord, score_sides, summarize_sessions, throw_session
from .units import Quantity, convert, map_distance

__version__ = "0.1.0"
