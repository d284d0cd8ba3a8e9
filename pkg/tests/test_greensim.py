import io
import json
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from bayestable.bayesrule import CountData
from bayestable.exactprob import BinomialModel, DomainError, binom_pmf
from bayestable.greensim import (
    CSV_HEADER,
    ErrorDist,
    GreenGeometry,
    RecordError,
    SessionSummary,
    WoodDist,
    draw_offsets,
    read_offsets_csv,
    score_sides,
    summarize_sessions,
    throw_session,
    write_records_csv,
)
from bayestable.units import Quantity


def k_values(n, sessions, seed, error=ErrorDist(), wood=WoodDist()):
    return [throw_session(GreenGeometry(), n, wood, error, seed, s)[1].k for s in range(sessions)]


def binomial_chisq_pvalue(ks, n):
    """Pearson test of observed k counts against Binomial(n, 1/2), tails pooled to expected >= 5."""
    R = len(ks)
    model = BinomialModel(n, Fraction(1, 2))
    probs = [float(binom_pmf(model, k)) for k in range(n + 1)]
    counts = np.bincount(ks, minlength=n + 1)
    bins_p, bins_o = [], []
    acc_p = acc_o = 0.0
    for p, o in zip(probs, counts):
        acc_p += p
        acc_o += o
        if acc_p * R >= 5:
            bins_p.append(acc_p)
            bins_o.append(acc_o)
            acc_p = acc_o = 0.0
    bins_p[-1] += acc_p
    bins_o[-1] += acc_o
    expected = np.array(bins_p) * R
    chi2 = float(np.sum((np.array(bins_o) - expected) ** 2 / expected))
    return stats.chi2.sf(chi2, len(bins_p) - 1)


def test_geometry_defaults():
    g = GreenGeometry()
    assert g.green_side.to("yard").value == 55
    assert g.rink_width.to("yard").value == Fraction(11, 2)
    assert g.green_side.value / g.rink_width.value == 10
    assert g.span_ab == g.rink_width
    with pytest.raises(DomainError):
        GreenGeometry(rink_width=Quantity(11, "perch"))


def test_session_cardinality_and_count():
    records, summary = throw_session(n=156, seed=3, session=0)
    assert len(records) == 156
    assert [r.trial for r in records] == list(range(156))
    assert summary.k == sum(r.side == "R" for r in records) == sum(r.offset > 0 for r in records)
    assert all((r.side == "R") == (r.offset > 0) for r in records)


def test_same_seed_same_records():
    a = throw_session(n=50, seed=99, session=4)
    b = throw_session(n=50, seed=99, session=4)
    assert a == b
    c = throw_session(n=50, seed=100, session=4)
    assert a[0] != c[0]


def test_trials_keyed_by_index():
    short = draw_offsets(10, ErrorDist(), seed=5, session=2)
    long = draw_offsets(500, ErrorDist(), seed=5, session=2)
    np.testing.assert_array_equal(short, long[:10])


def test_sessions_independent_of_order():
    forward = [throw_session(n=20, seed=1, session=s) for s in range(5)]
    backward = [throw_session(n=20, seed=1, session=s) for s in reversed(range(5))]
    assert forward == list(reversed(backward))


@pytest.mark.parametrize("scale", [0.0, -1.0, float("inf")])
def test_degenerate_error_scale(scale):
    with pytest.raises(DomainError):
        ErrorDist("gaussian", scale)


def test_unknown_distributions():
    with pytest.raises(DomainError):
        ErrorDist("cauchy", 1.0)
    with pytest.raises(DomainError):
        WoodDist("triangular")


def test_out_of_rink_flag():
    records, summary = throw_session(n=400, error_dist=ErrorDist("gaussian", 4.0), seed=8)
    half = GreenGeometry().rink_width_yd / 2
    for r in records:
        assert r.out_of_rink == (abs(summary.wood_position + r.offset) > half)
    assert any(r.out_of_rink for r in records) and not all(r.out_of_rink for r in records)


def test_wood_distribution_spread_and_bias():
    w = [throw_session(n=1, seed=2, session=s)[1].wood_position for s in range(2000)]
    assert min(w) >= -2.75 and max(w) <= 2.75
    fixed = throw_session(n=1, wood_dist=WoodDist("fixed", bias=0.4), seed=2)[1]
    assert fixed.wood_position == 0.4


def test_score_sides_examples():
    assert score_sides([0.3, -0.2, 0.1]) == CountData(3, 2)
    assert score_sides([-1.0, -0.5]).k == 0
    with pytest.raises(RecordError) as err:
        score_sides([0.2, -0.1, 0.0, 0.4], trials=[10, 11, 12, 13])
    assert err.value.trial == 12 and "trial 12" in str(err.value)


def test_csv_round_trip_and_zero_rejection():
    records, summary = throw_session(n=30, seed=12, session=1)
    buf = io.StringIO()
    write_records_csv(records, buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    offsets, trials = read_offsets_csv(io.StringIO(text))
    assert offsets == [r.offset for r in records]
    assert score_sides(offsets, trials).k == summary.k

    bad = text.splitlines()
    cols = bad[4].split(",")
    cols[2] = "0.0"
    bad[4] = ",".join(cols)
    offsets, trials = read_offsets_csv(io.StringIO("\n".join(bad)))
    with pytest.raises(RecordError, match="trial 3"):
        score_sides(offsets, trials)


def test_summary_json_fields():
    _, summary = throw_session(n=10, seed=7, session=3)
    d = summary.as_dict()
    assert list(d) == ["session", "n", "k", "proportion", "wood_position_yd", "seed"]
    assert json.loads(json.dumps(d)) == d


def test_summarize_examples():
    one = summarize_sessions([SessionSummary(0, 156, 73, 0.0, 0)])
    assert round(one.pooled_proportion, 3) == 0.468
    same = summarize_sessions([SessionSummary(s, 40, 17, 0.0, 0) for s in range(9)])
    assert same.pooled_proportion == 17 / 40
    assert same.k_distribution == {17: 9}
    with pytest.raises(DomainError):
        summarize_sessions([])


def test_records_and_summary_never_disagree():
    for s in range(200):
        records, summary = throw_session(n=37, error_dist=ErrorDist("laplace", 0.3), seed=77, session=s)
        assert summary.k == sum(r.side == "R" for r in records)
        assert summary.n == len(records)


@pytest.mark.parametrize("kind", ["uniform", "laplace"])
def test_symmetric_error_law(kind):
    ks = k_values(156, 10_000, seed=2024, error=ErrorDist(kind, 0.7))
    assert binomial_chisq_pvalue(ks, 156) > 0.01


def test_wood_position_irrelevant():
    woods = [WoodDist("uniform"), WoodDist("gaussian", bias=1.5, scale=2.0), WoodDist("fixed", bias=-2.0)]
    runs = [k_values(156, 2000, seed=31, wood=w) for w in woods]
    assert runs[0] == runs[1] == runs[2]
    for ks in runs:
        assert binomial_chisq_pvalue(ks, 156) > 0.01
