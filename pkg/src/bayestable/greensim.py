"""Monte Carlo of the tandem throw on a bowling green.

One Wood is rolled and comes to rest at a random lateral position on the
rink; the Jack is then aimed at it ``n`` times with a symmetric lateral
error.  A throw scores when it passes to the right of the Wood.

Randomness comes from Philox, a counter-based generator.  Each session owns
two streams keyed by ``(seed, session, 0)`` for the Wood and
``(seed, session, 1)`` for the throws, and the throw of trial ``t`` uses the
``t``-th 64-bit output of its stream.  Any trial is therefore a fixed
function of ``(seed, session, t)`` and sessions can run in any order.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.special import ndtri

from .bayesrule import CountData
from .exactprob import DomainError
from .gof import DEFAULT_LR_THRESHOLD, FitReport, fit_counts
from .units import Quantity

ERROR_DISTS = ("gaussian", "uniform", "laplace")
WOOD_DISTS = ("uniform", "gaussian", "fixed")
CSV_HEADER = ("session", "trial", "offset_yd", "side", "out_of_rink")
RIGHT, LEFT = "R", "L"

_WOOD_STREAM, _THROW_STREAM = 0, 1


class RecordError(ValueError):
    """A throw record cannot be scored."""

    def __init__(self, trial: int, message: str):
        super().__init__(f"trial {trial}: {message}")
        self.trial = trial


@dataclass(frozen=True)
class GreenGeometry:
    """Green and rink sizes; defaults are a 10 perch green and 1 perch rinks."""

    green_side: Quantity = Quantity(10, "perch")
    rink_width: Quantity = Quantity(1, "perch")
    span_ab: Quantity | None = None

    def __post_init__(self) -> None:
        if self.span_ab is None:
            object.__setattr__(self, "span_ab", self.rink_width)
        rink, side = self.rink_width.to("yard").value, self.green_side.to("yard").value
        if not 0 < rink <= side:
            raise DomainError(f"need 0 < rink_width <= green_side, got {self.rink_width} and {self.green_side}")
        if not self.span_ab.value > 0:
            raise DomainError(f"span_ab must be > 0, got {self.span_ab}")

    @property
    def rink_width_yd(self) -> float:
        return float(self.rink_width.to("yard").value)


@dataclass(frozen=True)
class ErrorDist:
    """Symmetric lateral error of a throw about its target, scale in yards.

    ``gaussian``: standard deviation; ``uniform``: half-width; ``laplace``:
    exponential scale.
    """

    kind: str = "gaussian"
    scale: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ERROR_DISTS:
            raise DomainError(f"unknown error distribution {self.kind!r}; expected one of {ERROR_DISTS}")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise DomainError(f"error scale must be positive and finite, got {self.scale!r}")

    def transform(self, u: np.ndarray) -> np.ndarray:
        if self.kind == "gaussian":
            return self.scale * ndtri(u)
        if self.kind == "uniform":
            return self.scale * (2.0 * u - 1.0)
        c = u - 0.5
        return -self.scale * np.sign(c) * np.log1p(-2.0 * np.abs(c))


@dataclass(frozen=True)
class WoodDist:
    """Where the Wood comes to rest, measured from the rink centre line.

    ``uniform`` spreads it across the rink, ``gaussian`` uses ``scale`` as a
    standard deviation, ``fixed`` puts it at ``bias``.  ``bias`` shifts all
    three.
    """

    kind: str = "uniform"
    bias: float = 0.0
    scale: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in WOOD_DISTS:
            raise DomainError(f"unknown wood distribution {self.kind!r}; expected one of {WOOD_DISTS}")
        if self.kind == "gaussian" and not self.scale > 0:
            raise DomainError(f"wood scale must be positive, got {self.scale!r}")

    def transform(self, u: float, rink_width_yd: float) -> float:
        if self.kind == "uniform":
            return self.bias + rink_width_yd * (u - 0.5)
        if self.kind == "gaussian":
            return self.bias + self.scale * float(ndtri(u))
        return self.bias


@dataclass(frozen=True)
class ThrowRecord:
    session: int
    trial: int
    offset: float
    side: str
    out_of_rink: bool

    def csv_row(self) -> tuple:
        return (self.session, self.trial, repr(self.offset), self.side, int(self.out_of_rink))


@dataclass(frozen=True)
class SessionSummary:
    session: int
    n: int
    k: int
    wood_position: float
    seed: int

    @property
    def proportion(self) -> float:
        return self.k / self.n

    def as_dict(self) -> dict:
        return {
            "session": self.session,
            "n": self.n,
            "k": self.k,
            "proportion": self.proportion,
            "wood_position_yd": self.wood_position,
            "seed": self.seed,
        }


def _stream(seed: int, session: int, stream: int) -> np.random.Philox:
    key = np.random.SeedSequence(seed, spawn_key=(session, stream)).generate_state(2, np.uint64)
    return np.random.Philox(key=key)


def _open_uniform(raw: np.ndarray) -> np.ndarray:
    # top 53 bits, centred in their cell: never 0, 1, or exactly 1/2
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def _check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise DomainError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    return seed


def draw_offsets(n: int, error_dist: ErrorDist, seed: int, session: int) -> np.ndarray:
    """Jack-minus-Wood lateral offsets (yards) for trials ``0..n-1``."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    u = _open_uniform(_stream(_check_seed(seed), session, _THROW_STREAM).random_raw(n))
    return error_dist.transform(u)


def draw_wood(geometry: GreenGeometry, wood_dist: WoodDist, seed: int, session: int) -> float:
    u = _open_uniform(_stream(_check_seed(seed), session, _WOOD_STREAM).random_raw(1))[0]
    return wood_dist.transform(float(u), geometry.rink_width_yd)


def throw_session(
    geometry: GreenGeometry = GreenGeometry(),
    n: int = 156,
    wood_dist: WoodDist = WoodDist(),
    error_dist: ErrorDist = ErrorDist(),
    seed: int = 0,
    session: int = 0,
) -> tuple[list[ThrowRecord], SessionSummary]:
    """Roll the Wood once, throw the Jack ``n`` times, score each throw."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    wood = draw_wood(geometry, wood_dist, seed, session)
    offsets = draw_offsets(n, error_dist, seed, session)
    if np.any(offsets == 0.0):
        bad = int(np.flatnonzero(offsets == 0.0)[0])
        raise RecordError(bad, "simulated offset is exactly zero")
    half = geometry.rink_width_yd / 2.0
    outside = np.abs(wood + offsets) > half
    records = [
        ThrowRecord(session, t, off, RIGHT if off > 0 else LEFT, out)
        for t, (off, out) in enumerate(zip(offsets.tolist(), outside.tolist()))
    ]
    k = int(np.count_nonzero(offsets > 0))
    return records, SessionSummary(session, n, k, wood, seed)


def score_sides(offsets: Iterable[float], trials: Sequence[int] | None = None) -> CountData:
    """Count throws passing right of the Wood; a zero offset is an error."""
    n = k = 0
    for i, off in enumerate(offsets):
        if off == 0:
            raise RecordError(trials[i] if trials is not None else i, "offset is exactly zero, side undefined")
        if not math.isfinite(off):
            raise RecordError(trials[i] if trials is not None else i, f"offset {off!r} is not finite")
        n += 1
        k += off > 0
    return CountData(n, k)


@dataclass
class SimulationReport:
    k_values: list[int]
    pooled_proportion: float
    k_distribution: dict[int, int]
    fits: list[FitReport] = field(repr=False)
    rejection_rate: float
    threshold: float

    def as_dict(self) -> dict:
        return {
            "sessions": len(self.k_values),
            "k_values": self.k_values,
            "pooled_proportion": self.pooled_proportion,
            "k_distribution": {str(k): c for k, c in sorted(self.k_distribution.items())},
            "verdicts": [f.verdict for f in self.fits],
            "rejection_rate": self.rejection_rate,
            "lr_threshold": self.threshold,
        }


def summarize_sessions(
    sessions: Sequence[SessionSummary], theta0: float = 0.5, threshold: float = DEFAULT_LR_THRESHOLD
) -> SimulationReport:
    if not sessions:
        raise DomainError("need at least one session to summarize")
    fits = [fit_counts(CountData(s.n, s.k), theta0, threshold) for s in sessions]
    total_n = sum(s.n for s in sessions)
    total_k = sum(s.k for s in sessions)
    rejected = sum(f.verdict != "consistent" for f in fits)
    return SimulationReport(
        k_values=[s.k for s in sessions],
        pooled_proportion=float(Fraction(total_k, total_n)),
        k_distribution=dict(Counter(s.k for s in sessions)),
        fits=fits,
        rejection_rate=rejected / len(fits),
        threshold=float(threshold),
    )


# ---------------------------------------------------------------------------
# serialization


def write_records_csv(records: Iterable[ThrowRecord], stream: io.TextIOBase) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(r.csv_row())


def read_offsets_csv(stream: io.TextIOBase, session: int | None = None) -> tuple[list[float], list[int]]:
    """Offsets and trial indices from a records CSV.

    Only ``offset_yd`` is required; ``trial`` and ``session`` are used when
    present.  Raises RecordError naming the trial of an unparsable row.
    """
    reader = csv.DictReader(stream)
    if reader.fieldnames is None or "offset_yd" not in reader.fieldnames:
        raise ValueError(f"CSV header must contain 'offset_yd', got {reader.fieldnames}")
    offsets: list[float] = []
    trials: list[int] = []
    for row_no, row in enumerate(reader):
        trial = row_no
        try:
            if row.get("trial") not in (None, ""):
                trial = int(row["trial"])
            if session is not None and int(row["session"]) != session:
                continue
            off = float(row["offset_yd"])
        except (TypeError, ValueError, KeyError) as exc:
            raise RecordError(trial, f"unparsable record {row!r} ({exc})") from None
        offsets.append(off)
        trials.append(trial)
    return offsets, trials
