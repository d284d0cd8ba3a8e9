"""Perch, yard, foot and metre with exact rational factors."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

from .exactprob import DomainError

Number = Union[int, float, Fraction]

#: metres per unit
METRES_PER: dict[str, Fraction] = {
    "metre": Fraction(1),
    "yard": Fraction(9144, 10000),
    "foot": Fraction(3048, 10000),
    "perch": Fraction(11, 2) * Fraction(9144, 10000),
}

ABBREV = {"metre": "m", "yard": "yd", "foot": "ft", "perch": "perch"}

_ALIASES = {
    "m": "metre",
    "meter": "metre",
    "metres": "metre",
    "meters": "metre",
    "yd": "yard",
    "yards": "yard",
    "ft": "foot",
    "feet": "foot",
    "perches": "perch",
    "rod": "perch",
    "pole": "perch",
}


def unit_tag(name: str) -> str:
    """Canonical unit tag for ``name``; raises DomainError if unknown."""
    tag = _ALIASES.get(name.strip().lower(), name.strip().lower())
    if tag not in METRES_PER:
        raise DomainError(f"unknown unit {name!r}; expected one of {sorted(METRES_PER)}")
    return tag


def format_sig(x: float, digits: int) -> str:
    """``x`` rounded to ``digits`` significant figures, trailing zeros kept."""
    s = f"{float(x):#.{digits}g}"
    if "e" not in s:
        s = s.rstrip(".")
    return s


@dataclass(frozen=True)
class Quantity:
    value: Number
    unit: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "unit", unit_tag(self.unit))

    @property
    def is_exact(self) -> bool:
        return isinstance(self.value, Rational)

    def to(self, unit: str) -> Quantity:
        return convert(self, unit)

    def __float__(self) -> float:
        return float(self.value)

    def display(self, sig: int | None = None, decimals: int | None = None) -> str:
        if sig is not None:
            num = format_sig(self.value, sig)
        elif decimals is not None:
            num = f"{float(self.value):.{decimals}f}"
        else:
            num = str(self.value) if self.is_exact else repr(float(self.value))
        return f"{num} {ABBREV[self.unit]}"

    def as_dict(self) -> dict:
        d = {"value": float(self.value), "unit": self.unit}
        if self.is_exact:
            d["exact"] = str(Fraction(self.value))
        return d


def convert(q: Quantity, to: str) -> Quantity:
    """Convert with the exact factor; float inputs are rounded once, at the end."""
    to = unit_tag(to)
    factor = METRES_PER[q.unit] / METRES_PER[to]
    if q.is_exact:
        return Quantity(Fraction(q.value) * factor, to)
    return Quantity(float(Fraction(q.value) * factor), to)


def map_distance(perches: Number) -> Quantity:
    """Map distance read in perches, returned in metres."""
    if not perches >= 0:
        raise DomainError(f"map distance must be >= 0, got {perches!r}")
    return convert(Quantity(perches, "perch"), "metre")
