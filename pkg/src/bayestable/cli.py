"""``bayestable`` command line.

Subcommands: interval, fit, posterior, simulate, score, convert, reproduce.
``--format`` (or ``BAYESTABLE_FORMAT``) picks human, json or csv output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence

from . import reproduce as repro
from .bayesrule import (
    CONVENTIONS,
    NONSTRICT_BOTH,
    CountData,
    PosteriorQuery,
    beta_posterior_prob,
    cell_mass,
    central_interval,
    discrete_posterior,
    interval_to_distance,
)
from .exactprob import BinomialModel, DomainError
from .gof import DEFAULT_LR_THRESHOLD, fit_counts
from .greensim import (
    ERROR_DISTS,
    WOOD_DISTS,
    ErrorDist,
    GreenGeometry,
    RecordError,
    WoodDist,
    read_offsets_csv,
    score_sides,
    summarize_sessions,
    throw_session,
    write_records_csv,
)
from .units import Quantity, convert, format_sig, unit_tag

FORMAT_ENV = "BAYESTABLE_FORMAT"
FORMATS = ("human", "json", "csv")


class CLIError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _unit(text: str) -> str:
    try:
        return unit_tag(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


@lru_cache(maxsize=None)
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, help=f"output format (default: env {FORMAT_ENV}, else human)")

    p = argparse.ArgumentParser(prog="bayestable", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("interval", parents=[common], help="equal-tailed count interval and its width on the table")
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--theta", type=_fraction, default=Fraction(1, 2))
    s.add_argument("--alpha", type=_fraction, default=Fraction(1, 20))
    s.add_argument("--span", type=_fraction, default=Fraction(1), help="A-to-B span (default 1)")
    s.add_argument("--unit", type=_unit, default="perch", help="unit of --span (default perch)")
    s.add_argument("--convention", choices=CONVENTIONS, default=NONSTRICT_BOTH)

    s = sub.add_parser("fit", parents=[common], help="likelihood-ratio fit to a fixed theta")
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--k", type=_nonneg_int, required=True)
    s.add_argument("--theta0", type=float, default=0.5)
    s.add_argument("--lr-threshold", type=float, default=DEFAULT_LR_THRESHOLD)

    s = sub.add_parser("posterior", parents=[common], help="uniform-prior posterior mass of theta in (lo, hi)")
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--k", type=_nonneg_int, required=True)
    s.add_argument("--lo", type=float, required=True)
    s.add_argument("--hi", type=float, required=True)
    s.add_argument("--cells", type=_positive_int, help="also enumerate a discrete posterior over this many cells")

    s = sub.add_parser("simulate", parents=[common], help="simulate throwing sessions on the green")
    s.add_argument("--throws", type=_positive_int, default=156)
    s.add_argument("--sessions", type=_positive_int, default=1)
    s.add_argument("--error-dist", choices=ERROR_DISTS, default="gaussian")
    s.add_argument("--error-scale", type=float, default=1.0, help="yards (default 1.0, synthetic)")
    s.add_argument("--wood-dist", choices=WOOD_DISTS, default="uniform")
    s.add_argument("--wood-bias", type=float, default=0.0, help="yards")
    s.add_argument("--rink-width", type=_fraction, default=Fraction(1), help="perches (default 1)")
    s.add_argument("--seed", type=_nonneg_int, default=0)
    s.add_argument("--theta0", type=float, default=0.5)
    s.add_argument("--lr-threshold", type=float, default=DEFAULT_LR_THRESHOLD)
    s.add_argument("--out", type=Path, help="records CSV path; summaries go beside it as .json")
    s.add_argument("--summary-out", type=Path, help="summaries JSON path (default: --out with .json)")

    s = sub.add_parser("score", parents=[common], help="count right-passes in an offsets CSV")
    s.add_argument("--in", dest="input", type=Path, required=True)
    s.add_argument("--session", type=_nonneg_int, help="only rows of this session")

    s = sub.add_parser("convert", parents=[common], help="convert between perch, yard, foot and metre")
    s.add_argument("--value", type=_fraction, required=True)
    s.add_argument("--from", dest="from_unit", type=_unit, required=True)
    s.add_argument("--to", dest="to_unit", type=_unit, required=True)

    sub.add_parser("reproduce", parents=[common], help="recompute every published number and compare")
    return p


# ---------------------------------------------------------------------------
# output


def _flatten(row: dict, prefix: str = "") -> dict:
    flat: dict = {}
    for k, v in row.items():
        if isinstance(v, dict):
            flat.update(_flatten(v, f"{prefix}{k}_"))
        else:
            flat[prefix + k] = json.dumps(v) if isinstance(v, list) else v
    return flat


def _emit(fmt: str, data: dict | list, human: str) -> None:
    out = sys.stdout
    if fmt == "json":
        json.dump(data, out, indent=2)
        out.write("\n")
    elif fmt == "csv":
        rows = data if isinstance(data, list) else [data]
        flat = [_flatten(r) for r in rows]
        w = csv.DictWriter(out, fieldnames=list(flat[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(flat)
    else:
        out.write(human.rstrip("\n") + "\n")


def _atomic_write(targets: dict[Path, str]) -> None:
    """Write all targets or none."""
    temps: list[tuple[str, Path]] = []
    placed: list[Path] = []
    try:
        for path, text in targets.items():
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
            temps.append((tmp, path))
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        for tmp, path in temps:
            os.replace(tmp, path)
            placed.append(path)
        temps, placed = [], []
    finally:
        for tmp, _ in temps:
            if os.path.exists(tmp):
                os.unlink(tmp)
        for path in placed:
            path.unlink(missing_ok=True)


# ---------------------------------------------------------------------------
# commands


def cmd_interval(a: argparse.Namespace) -> None:
    model = BinomialModel(a.n, a.theta)
    iv = central_interval(model, a.alpha, a.convention)
    span = Quantity(a.span, a.unit)
    dist = interval_to_distance(iv, a.n, span)
    metres = convert(dist, "metre")
    data = iv.as_dict()
    data["distance"] = dist.as_dict()
    data["distance_m"] = metres.as_dict()
    human = (
        f"interval  [{iv.k_lo}, {iv.k_hi}] of n={a.n} (theta={model.theta}, alpha={a.alpha}, {a.convention})\n"
        f"coverage  {float(iv.coverage):.6f}\n"
        f"distance  ({iv.k_hi}-{iv.k_lo})/{a.n} x {span.display()} = {dist.display(decimals=2)} = {metres.display(decimals=2)}"
    )
    _emit(a.format, data, human)


def cmd_fit(a: argparse.Namespace) -> None:
    rep = fit_counts(CountData(a.n, a.k), a.theta0, a.lr_threshold)
    human = (
        f"LR       {format_sig(rep.lr, 2)}\n"
        f"G2       {format_sig(rep.g2, 2)}\n"
        f"p        {format_sig(rep.p_value, 2)}\n"
        f"verdict  {rep.verdict} (LR {'<' if rep.verdict == 'consistent' else '>='} {format_sig(rep.threshold, 2)})"
    )
    _emit(a.format, rep.as_dict(), human)


def cmd_posterior(a: argparse.Namespace) -> None:
    data = CountData(a.n, a.k)
    query = PosteriorQuery(a.lo, a.hi)
    prob = beta_posterior_prob(data, query)
    out = {"n": a.n, "k": a.k, "lo": a.lo, "hi": a.hi, "probability": prob}
    human = f"P({a.lo} < theta < {a.hi} | k={a.k}, n={a.n}, uniform prior) = {prob:.6f}"
    if a.cells:
        w = discrete_posterior(data, a.cells)
        mass = cell_mass(w, a.lo, a.hi)
        out["cells"] = a.cells
        out["discrete_probability"] = mass
        human += f"\ndiscrete oracle over {a.cells} cells            = {mass:.6f}"
    _emit(a.format, out, human)


def cmd_simulate(a: argparse.Namespace) -> None:
    geometry = GreenGeometry(rink_width=Quantity(a.rink_width, "perch"))
    wood = WoodDist(a.wood_dist, a.wood_bias)
    err = ErrorDist(a.error_dist, a.error_scale)
    all_records = []
    summaries = []
    for s in range(a.sessions):
        records, summary = throw_session(geometry, a.throws, wood, err, a.seed, s)
        all_records.extend(records)
        summaries.append(summary)
    report = summarize_sessions(summaries, a.theta0, a.lr_threshold)
    summaries_json = json.dumps([s.as_dict() for s in summaries], indent=2) + "\n"

    if a.out is not None or a.summary_out is not None:
        targets: dict[Path, str] = {}
        if a.out is not None:
            buf = io.StringIO()
            write_records_csv(all_records, buf)
            targets[a.out] = buf.getvalue()
        summary_path = a.summary_out or a.out.with_suffix(".json")
        targets[summary_path] = summaries_json
        _atomic_write(targets)

    if a.format == "csv":
        if a.out is None:
            write_records_csv(all_records, sys.stdout)
        return
    if a.format == "json":
        _emit("json", {"summaries": [s.as_dict() for s in summaries], "report": report.as_dict()}, "")
        return
    lines = [
        f"sessions            {len(summaries)} x {a.throws} throws ({a.error_dist}, scale {a.error_scale} yd, seed {a.seed})",
        f"pooled proportion   {report.pooled_proportion:.4f}",
        f"rejection rate      {report.rejection_rate:.4f} (LR >= {format_sig(report.threshold, 2)})",
    ]
    if len(summaries) <= 20:
        lines += [f"  session {s.session}: k={s.k}/{s.n} wood at {s.wood_position:+.3f} yd" for s in summaries]
    _emit("human", {}, "\n".join(lines))


def cmd_score(a: argparse.Namespace) -> None:
    try:
        with open(a.input, encoding="utf-8", newline="") as fh:
            offsets, trials = read_offsets_csv(fh, a.session)
    except OSError as exc:
        raise CLIError(f"--in: cannot read {a.input}: {exc.strerror}") from None
    except ValueError as exc:
        raise CLIError(f"--in {a.input}: {exc}") from None
    if not offsets:
        raise CLIError(f"--in {a.input}: no offset records")
    counts = score_sides(offsets, trials)
    data = {"n": counts.n, "k": counts.k, "q": counts.q, "proportion": float(counts.proportion())}
    _emit(a.format, data, f"n={counts.n} k={counts.k} q={counts.q} proportion={float(counts.proportion()):.3f}")


def cmd_convert(a: argparse.Namespace) -> None:
    q = convert(Quantity(a.value, a.from_unit), a.to_unit)
    v = Fraction(q.value)
    shown = str(v.numerator) if v.denominator == 1 else repr(float(v))
    _emit(a.format, q.as_dict(), f"{shown} {a.to_unit}")


def cmd_reproduce(a: argparse.Namespace) -> None:
    rows = repro.reproduce()
    _emit(a.format, [r.as_dict() for r in rows], repro.render(rows))


COMMANDS = {
    "interval": cmd_interval,
    "fit": cmd_fit,
    "posterior": cmd_posterior,
    "simulate": cmd_simulate,
    "score": cmd_score,
    "convert": cmd_convert,
    "reproduce": cmd_reproduce,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format is None:
        env = os.environ.get(FORMAT_ENV, "human")
        args.format = env if env in FORMATS else "human"
    try:
        COMMANDS[args.command](args)
    except RecordError as exc:
        print(f"bayestable {args.command}: record error: {exc}", file=sys.stderr)
        return 1
    except (CLIError, DomainError, ValueError, OSError) as exc:
        print(f"bayestable {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())

