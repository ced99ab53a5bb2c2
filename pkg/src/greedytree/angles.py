"""Exact opening-angle bounds and the rules for combining them at a node.

All values are degrees held as :class:`fractions.Fraction`.  Every map used
here is affine with dyadic coefficients on inputs drawn from {180, 120, 60},
so results stay dyadic; nothing in this module touches floating point.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

F = Fraction

_D180 = F(180)
_D120 = F(120)
_D90 = F(90)
_D60 = F(60)


class Kind(enum.Enum):
    EXACT = "exact"
    STRICT = "strict"
    CLOSED = "closed"


def as_fraction(x) -> Fraction:
    """Exact conversion; strings like ``"93.75"`` and floats are both accepted."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(str(x).strip())


def format_degrees(x: Fraction) -> str:
    """Exact decimal rendering for dyadic (and other terminating) values."""
    x = F(x)
    if x.denominator == 1:
        return str(x.numerator)
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{float(x):.12g}"
    digits = max(twos, fives)
    scaled = x * 10**digits
    sign = "-" if scaled < 0 else ""
    mag = abs(scaled.numerator)
    whole, frac = divmod(mag, 10**digits)
    return f"{sign}{whole}.{str(frac).rjust(digits, '0').rstrip('0')}"


@dataclass(frozen=True, order=False)
class AngleBound:
    """Tight upper bound on the opening angle of a rooted subtree.

    ``EXACT`` is only used for paths (180 is attained), ``STRICT`` means every
    value below ``value`` is attainable but ``value`` itself is not, and
    ``CLOSED`` means no open angle is possible.
    """

    value: Fraction
    kind: Kind

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", as_fraction(self.value))
        v, k = self.value, self.kind
        if k is Kind.EXACT and v != _D180:
            raise ValueError(f"exactly achievable bound must be 180, got {v}")
        if k is Kind.CLOSED and v != 0:
            raise ValueError("closed bound carries value 0")
        if k is Kind.STRICT and not (0 < v <= _D60 or _D90 < v <= _D120 or v == _D180):
            raise ValueError(f"strict bound {format_degrees(v)} outside (0,60] u (90,120]")

    @classmethod
    def path(cls) -> "AngleBound":
        return cls(_D180, Kind.EXACT)

    @classmethod
    def strict(cls, value) -> "AngleBound":
        return cls(as_fraction(value), Kind.STRICT)

    @classmethod
    def closed(cls) -> "AngleBound":
        return cls(F(0), Kind.CLOSED)

    @property
    def is_path(self) -> bool:
        return self.kind is Kind.EXACT

    @property
    def is_open(self) -> bool:
        return self.kind is not Kind.CLOSED

    def __str__(self) -> str:
        if self.kind is Kind.CLOSED:
            return "closed"
        text = format_degrees(self.value)
        return text + ("⁻" if self.kind is Kind.STRICT else "")

    def sort_key(self) -> tuple:
        # paths first, then by value descending
        return (0 if self.is_path else 1, -self.value)


PATH = AngleBound.path()
CLOSED = AngleBound.closed()

CASE_LABELS = ("I", "II_i", "II_ii", "III", "IV", "V", "VI", "VII")


@dataclass(frozen=True)
class CombineCase:
    label: str
    inputs: tuple[AngleBound, ...]

    def __post_init__(self) -> None:
        if self.label not in CASE_LABELS:
            raise ValueError(f"unknown case {self.label!r}")


def _in_upper_band(b: AngleBound) -> bool:
    return b.kind is Kind.STRICT and _D90 < b.value <= _D120


def _in_lower_band(b: AngleBound) -> bool:
    return b.kind is Kind.STRICT and 0 < b.value <= _D60


def sort_children(children: Iterable[AngleBound]) -> list[AngleBound]:
    return sorted(children, key=AngleBound.sort_key)


def classify_case(children: Sequence[AngleBound], extra_path_children: int = 0) -> CombineCase:
    """Pick the combine row for a node whose processed children carry ``children``.

    ``extra_path_children`` adds that many path children (bound 180).  The
    caller handles the all-paths situation with :func:`pure_path_star_bound`.
    """
    kids = sort_children(list(children) + [PATH] * extra_path_children)
    if not 1 <= len(kids) <= 3:
        raise ValueError(f"a combine step takes 1..3 children, got {len(kids)}")
    paths = sum(1 for b in kids if b.is_path)
    rest = kids[paths:]
    closed_or_seven = "VII" if len(rest) == 3 else "VI"
    if any(not b.is_open for b in rest):
        return CombineCase(closed_or_seven, tuple(kids))
    if len(kids) == 1:
        return CombineCase("I", tuple(kids))
    if len(kids) == 2:
        if paths == 1:
            if _in_upper_band(rest[0]):
                return CombineCase("II_i", tuple(kids))
            if _in_lower_band(rest[0]):
                return CombineCase("II_ii", tuple(kids))
            return CombineCase("VI", tuple(kids))
        if paths == 0 and all(_in_upper_band(b) for b in rest):
            return CombineCase("IV", tuple(kids))
        return CombineCase("VI", tuple(kids))
    # three children
    if paths == 2 and rest[0].value <= _D120:
        return CombineCase("III", tuple(kids))
    if paths == 1 and all(_in_upper_band(b) for b in rest):
        return CombineCase("V", tuple(kids))
    return CombineCase(closed_or_seven, tuple(kids))


def combine(case: CombineCase) -> AngleBound:
    """Tight bound for the combined subtree, per the row named by ``case``."""
    kids = case.inputs
    rest = [b.value for b in kids if not b.is_path]
    label = case.label
    if label == "I":
        return AngleBound.strict(kids[0].value)
    if label == "II_i":
        return AngleBound.strict(rest[0] / 2 + 45)
    if label == "II_ii":
        return AngleBound.strict(rest[0])
    if label == "III":
        return AngleBound.strict(rest[0] / 2)
    if label == "IV":
        return AngleBound.strict(rest[0] + rest[1] - 180)
    if label == "V":
        hi, lo = max(rest), min(rest)
        return AngleBound.strict(F(3, 4) * hi + F(1, 2) * lo - F(225, 2))
    return CLOSED


def pure_path_star_bound(node_degree: int) -> AngleBound:
    """Bound for a node whose children are all paths (degree counts the parent edge)."""
    if node_degree in (1, 2):
        return PATH
    if node_degree in (3, 4):
        return AngleBound.strict(180 - (node_degree - 2) * 60)
    raise ValueError(f"all-path rule covers degrees 1..4, got {node_degree}")


def sum_exceeds(bounds: Iterable[AngleBound], threshold) -> bool:
    """Exact test ``sum(values) > threshold`` over open bounds."""
    total = F(0)
    for b in bounds:
        if not b.is_open:
            raise ValueError("closed bound in angle sum")
        total += b.value
    return total > as_fraction(threshold)
