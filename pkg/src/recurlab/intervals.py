"""Half-open rational intervals and axis-aligned boxes on the unit torus.

Everything here is exact: endpoints are :class:`fractions.Fraction` values in
[0, 1], unions are kept sorted and disjoint, and translation on the torus
splits intervals at the wrap point instead of rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable

from .errors import DimensionError, RangeError

if TYPE_CHECKING:  # pragma: no cover
    from .combinatorics import LatticePointSet


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True, slots=True)
class Interval:
    """Half-open interval [lo, hi) with 0 <= lo < hi <= 1."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _frac(self.lo))
        object.__setattr__(self, "hi", _frac(self.hi))
        if not (0 <= self.lo < self.hi <= 1):
            raise RangeError(f"invalid interval [{self.lo}, {self.hi})")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        x = _frac(x)
        return self.lo <= x < self.hi

    def intersect(self, other: "Interval") -> "Interval | None":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        return Interval(lo, hi) if lo < hi else None

    def shifted(self, delta) -> tuple["Interval", ...]:
        """Translate by delta on the torus, splitting at the wrap point."""
        d = _frac(delta) % 1
        lo = (self.lo + d) % 1
        hi = lo + self.length
        if hi <= 1:
            return (Interval(lo, hi),)
        return (Interval(lo, Fraction(1)), Interval(Fraction(0), hi - 1))


@dataclass(frozen=True, slots=True)
class IntervalUnion:
    """Sorted disjoint union of half-open intervals on the torus."""

    intervals: tuple[Interval, ...] = ()

    @classmethod
    def from_intervals(cls, items: Iterable[Interval]) -> "IntervalUnion":
        """Normalize: sort, merge overlapping and touching intervals."""
        pieces = sorted(items, key=lambda iv: (iv.lo, iv.hi))
        merged: list[Interval] = []
        for iv in pieces:
            if merged and iv.lo <= merged[-1].hi:
                if iv.hi > merged[-1].hi:
                    merged[-1] = Interval(merged[-1].lo, iv.hi)
            else:
                merged.append(iv)
        return cls(tuple(merged))

    @classmethod
    def full(cls) -> "IntervalUnion":
        return cls((Interval(Fraction(0), Fraction(1)),))

    @property
    def measure(self) -> Fraction:
        return sum((iv.length for iv in self.intervals), Fraction(0))

    def contains(self, x) -> bool:
        return any(iv.contains(x) for iv in self.intervals)

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        out: list[Interval] = []
        a, b = self.intervals, other.intervals
        i = j = 0
        while i < len(a) and j < len(b):
            lo = max(a[i].lo, b[j].lo)
            hi = min(a[i].hi, b[j].hi)
            if lo < hi:
                out.append(Interval(lo, hi))
            if a[i].hi <= b[j].hi:
                i += 1
            else:
                j += 1
        return IntervalUnion(tuple(out))

    def shifted(self, delta) -> "IntervalUnion":
        pieces = [s for iv in self.intervals for s in iv.shifted(delta)]
        return IntervalUnion.from_intervals(pieces)


@dataclass(frozen=True, slots=True)
class BoxUnion:
    """Union of pairwise disjoint axis-aligned product boxes on the k-torus."""

    dim: int
    boxes: tuple[tuple[Interval, ...], ...]

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError(f"dim must be positive, got {self.dim}")
        for box in self.boxes:
            if len(box) != self.dim:
                raise DimensionError(
                    f"box of arity {len(box)} in a dim-{self.dim} union"
                )

    @property
    def measure(self) -> Fraction:
        total = Fraction(0)
        for box in self.boxes:
            vol = Fraction(1)
            for iv in box:
                vol *= iv.length
            total += vol
        return total

    def check_disjoint(self) -> bool:
        """Quadratic disjointness check, intended for small unions and tests."""
        for i in range(len(self.boxes)):
            for j in range(i + 1, len(self.boxes)):
                if all(
                    a.intersect(b) is not None
                    for a, b in zip(self.boxes[i], self.boxes[j])
                ):
                    return False
        return True


def box_union_from_set(point_set: "LatticePointSet", grid: int) -> BoxUnion:
    """One box of side 1/(2*grid) anchored at (a/grid, ...) per lattice point.

    Distinct anchors differ by at least 1/grid in some coordinate, which
    exceeds the box side, so the boxes are pairwise disjoint and the measure
    is len(point_set) / (2*grid)^dim.
    """
    width = Fraction(1, 2 * grid)
    boxes = []
    for p in point_set.points:
        for c in p:
            if not 0 <= c < grid:
                raise RangeError(f"coordinate {c} outside [0, {grid})")
        boxes.append(
            tuple(
                Interval(Fraction(c, grid), Fraction(c, grid) + width) for c in p
            )
        )
    return BoxUnion(dim=point_set.dim, boxes=tuple(boxes))
