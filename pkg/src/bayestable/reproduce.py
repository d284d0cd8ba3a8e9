"""Recompute the published bowling-green numbers and compare with the printed values.

Each row is compared at the precision the printed value carries.  Nothing
here draws random numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bayesrule import (
    CONVENTIONS,
    NONSTRICT_BOTH,
    CountData,
    beta_posterior_interval,
    central_interval,
    check_endpoints,
    interval_to_distance,
)
from .exactprob import BinomialModel, binom_cdf
from .gof import fit_counts
from .units import Quantity, convert, format_sig, map_distance

MATCHED, UNMATCHED, INFO = "matched", "unmatched", "info"

N_THROWS, K_PASSES = 156, 73
PUBLISHED_ENDPOINTS = (66, 85)
ALPHA = Fraction(1, 20)
CDF_PROBES = (65, 66, 85, 90)


@dataclass(frozen=True)
class Row:
    item: str
    computed: str
    published: str | None
    status: str
    exact: str | None = None
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "item": self.item,
            "computed": self.computed,
            "published": self.published,
            "status": self.status,
            "exact": self.exact,
            "note": self.note,
        }


def _cmp(item: str, value: float, published: str, *, sig: int | None = None, decimals: int | None = None, exact=None, note="") -> Row:
    shown = format_sig(value, sig) if sig is not None else f"{value:.{decimals}f}"
    return Row(item, shown, published, MATCHED if shown == published else UNMATCHED, None if exact is None else str(exact), note)


def reproduce() -> list[Row]:
    rows: list[Row] = []
    data = CountData(N_THROWS, K_PASSES)
    model = BinomialModel(N_THROWS, Fraction(1, 2))

    prop = data.proportion()
    rows.append(_cmp("proportion k/n", float(prop), "0.468", decimals=3, exact=prop))

    for k in CDF_PROBES:
        c = binom_cdf(model, k)
        rows.append(Row(f"P(X<={k}), Binomial(156, 1/2)", f"{float(c):.6f}", None, INFO, str(c)))

    lo, hi = PUBLISHED_ENDPOINTS
    for conv in CONVENTIONS:
        iv = central_interval(model, ALPHA, conv)
        got = (iv.k_lo, iv.k_hi)
        rows.append(
            Row(
                f"interval [{conv}]",
                f"({iv.k_lo}, {iv.k_hi}) coverage {float(iv.coverage):.4f}",
                f"({lo}, {hi}) = 95%",
                MATCHED if got == PUBLISHED_ENDPOINTS else UNMATCHED,
                str(iv.coverage),
            )
        )
    for chk in check_endpoints(model, lo, hi, ALPHA):
        rows.append(
            Row(
                f"({lo}, {hi}) as Pr={chk.reading}",
                f"Pr({hi})={float(chk.pr_hi):.4f} {'<=' if chk.upper_ok else '>'} 0.975; "
                f"Pr({lo})={float(chk.pr_lo):.4f} {'<' if chk.lower_ok else '>='} 0.025; "
                f"difference {float(chk.coverage):.4f}",
                "0.975, 0.025, 95%",
                MATCHED if chk.matched else UNMATCHED,
                str(chk.coverage),
            )
        )
    fitted = central_interval(BinomialModel(N_THROWS, prop), ALPHA, NONSTRICT_BOTH)
    rows.append(
        Row(
            "interval at theta=k/n [nonstrict-both]",
            f"({fitted.k_lo}, {fitted.k_hi})",
            None,
            INFO,
            note=f"upper end {fitted.k_hi} at theta=73/156; lower end {central_interval(model, ALPHA).k_lo} at theta=1/2",
        )
    )

    dist = interval_to_distance(PUBLISHED_ENDPOINTS, N_THROWS, Quantity(1, "perch"))
    metres = convert(dist, "metre")
    rows.append(_cmp("distance (85-66)/156, perch", float(dist.value), "0.12", decimals=2, exact=dist.value))
    rows.append(_cmp("distance, metres", float(metres.value), "0.61", decimals=2, exact=metres.value))

    rep = fit_counts(data, 0.5, 5.0)
    rows.append(_cmp("likelihood ratio", rep.lr, "1.4", sig=2, note=f"{rep.lr:.6f}"))
    rows.append(_cmp("G2 = 2 ln LR", rep.g2, "0.64", sig=2, note=f"{rep.g2:.6f}"))
    rows.append(_cmp("p-value, chi-square 1 df", rep.p_value, "0.42", sig=2, note=f"{rep.p_value:.6f}"))
    rows.append(Row("verdict (LR < 5)", rep.verdict, "consistent", MATCHED if rep.verdict == "consistent" else UNMATCHED))

    perch_m = convert(Quantity(1, "perch"), "metre").value
    rows.append(Row("1 perch in metres", str(float(perch_m)), "5.0292", MATCHED if perch_m == Fraction("5.0292") else UNMATCHED, str(perch_m)))
    green = convert(Quantity(10, "perch"), "yard").value
    rows.append(Row("10 perch in yards", str(green), "55", MATCHED if green == 55 else UNMATCHED, str(green)))
    md = map_distance(Fraction("19.7"))
    rows.append(
        _cmp("map distance 19.7 perch, metres", float(md.value), "98.8", sig=3, exact=md.value, note="exact product 99.07524 m")
    )

    b_lo, b_hi = beta_posterior_interval(data, float(ALPHA))
    iv = central_interval(model, ALPHA)
    rows.append(
        Row(
            "uniform-prior 95% credible interval for theta",
            f"({b_lo:.4f}, {b_hi:.4f})",
            None,
            INFO,
            note=f"fixed theta=1/2 count interval as proportions: ({iv.k_lo / N_THROWS:.4f}, {iv.k_hi / N_THROWS:.4f})",
        )
    )
    return rows


def render(rows: list[Row]) -> str:
    w_item = max(len(r.item) for r in rows)
    w_comp = max(len(r.computed) for r in rows)
    lines = []
    for r in rows:
        pub = r.published if r.published is not None else "-"
        line = f"{r.item:<{w_item}}  {r.computed:<{w_comp}}  published {pub:<18}  {r.status}"
        if r.note:
            line += f"  ({r.note})"
        lines.append(line)
        if r.exact is not None and r.status != INFO or r.item.startswith("P(X<="):
            lines.append(f"{'':<{w_item}}  exact {r.exact}")
    return "\n".join(lines)
