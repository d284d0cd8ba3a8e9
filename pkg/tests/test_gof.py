import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from bayestable.bayesrule import CountData
from bayestable.exactprob import DomainError, chisq1_sf
from bayestable.gof import (
    CONSISTENT,
    DISCREPANT,
    fit_counts,
    g_statistic,
    likelihood_ratio,
    log_likelihood_ratio,
    lr_threshold_for_alpha,
)


def direct_lr(n, k, theta0):
    """Plain product form of the likelihood ratio."""
    p = k / n
    num = (p**k if k else 1.0) * ((1 - p) ** (n - k) if n - k else 1.0)
    return num / (theta0**k * (1 - theta0) ** (n - k))


def test_published_counts():
    lr = likelihood_ratio(CountData(156, 73), 0.5)
    assert lr == pytest.approx((73 / 78) ** 73 * (83 / 78) ** 83, rel=1e-13)
    assert round(lr, 1) == 1.4
    g2 = g_statistic(CountData(156, 73), 0.5)
    assert g2 == pytest.approx(2 * math.log(lr), abs=1e-12)
    assert round(g2, 2) == 0.64


def test_exact_fit_is_one():
    assert likelihood_ratio(CountData(156, 78), 0.5) == 1.0
    assert g_statistic(CountData(156, 78), 0.5) == 0.0


def test_two_throws_no_passes():
    assert likelihood_ratio(CountData(2, 0), 0.5) == pytest.approx(4.0, rel=1e-14)
    assert g_statistic(CountData(2, 0), 0.5) == pytest.approx(2 * math.log(4), rel=1e-14)


@pytest.mark.parametrize("theta0", [0.0, 1.0, -0.2, 1.5])
def test_theta0_domain(theta0):
    with pytest.raises(DomainError):
        likelihood_ratio(CountData(10, 3), theta0)


def test_fit_report_examples():
    rep = fit_counts(CountData(156, 73), 0.5, 5)
    assert (round(rep.lr, 1), round(rep.g2, 2), round(rep.p_value, 2)) == (1.4, 0.64, 0.42)
    assert rep.verdict == CONSISTENT
    perfect = fit_counts(CountData(40, 10), 0.25, 1.01)
    assert perfect.verdict == CONSISTENT and perfect.p_value == 1.0
    assert fit_counts(CountData(2, 0), 0.5, 3).verdict == DISCREPANT
    with pytest.raises(DomainError):
        fit_counts(CountData(2, 0), 0.5, 1.0)


def test_threshold_is_strict():
    rep = fit_counts(CountData(2, 0), 0.5, 4.5)
    assert rep.verdict == CONSISTENT
    # LR(2, 0) rounds to 4 + 1 ulp; a cutoff at exactly that value must reject
    assert fit_counts(CountData(2, 0), 0.5, rep.lr).verdict == DISCREPANT


def test_matches_product_form():
    rng = random.Random(7)
    for _ in range(500):
        n = rng.randint(1, 60)
        k = rng.randint(0, n)
        t = rng.uniform(0.05, 0.95)
        assert likelihood_ratio(CountData(n, k), t) == pytest.approx(direct_lr(n, k, t), rel=1e-10)


def test_alpha_threshold_equivalence():
    thr = lr_threshold_for_alpha(0.05)
    assert 2 * math.log(thr) == pytest.approx(3.841458820694124, rel=1e-12)
    for k in range(157):
        rep = fit_counts(CountData(156, k), 0.5, thr)
        assert (rep.verdict == DISCREPANT) == (rep.p_value <= 0.05)


@settings(max_examples=300)
@given(st.integers(1, 10**6), st.data(), st.floats(0.001, 0.999))
def test_lr_at_least_one(n, data, theta0):
    k = data.draw(st.integers(0, n))
    assert likelihood_ratio(CountData(n, k), theta0) >= 1.0


@given(st.integers(1, 10**5), st.data())
def test_symmetry_at_half(n, data):
    k = data.draw(st.integers(0, n))
    assert log_likelihood_ratio(CountData(n, k), 0.5) == log_likelihood_ratio(CountData(n, n - k), 0.5)


def test_p_value_decreases_away_from_null():
    n = 156
    ps = [fit_counts(CountData(n, 78 + d), 0.5).p_value for d in range(0, 79)]
    assert all(b < a for a, b in zip(ps, ps[1:]) if a > 0)


def test_report_consistency_fuzz():
    rng = random.Random(11)
    for _ in range(10_000):
        n = rng.randint(1, 5000)
        k = rng.randint(0, n)
        theta0 = rng.uniform(0.01, 0.99)
        thr = rng.uniform(1.01, 50)
        rep = fit_counts(CountData(n, k), theta0, thr)
        assert rep.lr >= 1 and rep.g2 >= 0
        if math.isfinite(rep.lr):
            assert rep.g2 == pytest.approx(2 * math.log(rep.lr), abs=1e-12, rel=1e-12)
        else:
            assert rep.g2 > 2 * math.log(1.7e308)
        assert rep.p_value == chisq1_sf(rep.g2)
        assert (rep.verdict == CONSISTENT) == (rep.lr < thr)
