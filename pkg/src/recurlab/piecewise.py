"""Exact piecewise polynomials on [0, 1] and torus overlap profiles.

The measure engine reduces every intersection integral to integrals of
products of overlap profiles: for a single coordinate constrained by
``y + kappa_r * c  in  I_r`` for integer multipliers kappa_r of one shift
parameter c, the fiber length

    f(c) = length{ y : all constraints hold }

is piecewise linear in c.  Its kinks can only occur where two constraint
endpoints, which move at speeds -kappa_r, cross on the circle; those
crossing positions are rational and enumerable.  On each open piece the
function is fitted exactly from two interior rational samples.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import RangeError
from .intervals import Interval, IntervalUnion

ZERO = Fraction(0)
ONE = Fraction(1)


def _poly_trim(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    out = list(coeffs)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def _poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_mul(p: Sequence[Fraction], q: Sequence[Fraction]) -> tuple[Fraction, ...]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _poly_trim(out)


def _poly_integral(coeffs: Sequence[Fraction], a: Fraction, b: Fraction) -> Fraction:
    total = Fraction(0)
    for k, c in enumerate(coeffs):
        total += c * (b ** (k + 1) - a ** (k + 1)) / (k + 1)
    return total


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Polynomial pieces with rational coefficients over [0, 1].

    ``breakpoints`` is strictly increasing, starts at 0 and ends at 1;
    ``coeffs[i]`` (low degree first) is valid on
    [breakpoints[i], breakpoints[i+1]).
    """

    breakpoints: tuple[Fraction, ...]
    coeffs: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        bps = self.breakpoints
        if len(bps) != len(self.coeffs) + 1:
            raise RangeError("breakpoint/piece count mismatch")
        if bps[0] != 0 or bps[-1] != 1:
            raise RangeError("domain must be exactly [0, 1]")
        if any(bps[i] >= bps[i + 1] for i in range(len(bps) - 1)):
            raise RangeError("breakpoints must be strictly increasing")

    @classmethod
    def constant(cls, value) -> "PiecewisePolynomial":
        return cls((ZERO, ONE), ((Fraction(value),),))

    def evaluate(self, x) -> Fraction:
        x = Fraction(x) % 1
        idx = bisect.bisect_right(self.breakpoints, x) - 1
        idx = min(idx, len(self.coeffs) - 1)
        return _poly_eval(self.coeffs[idx], x)

    def _piece_at(self, mid: Fraction) -> tuple[Fraction, ...]:
        idx = bisect.bisect_right(self.breakpoints, mid) - 1
        return self.coeffs[min(idx, len(self.coeffs) - 1)]

    def __mul__(self, other: "PiecewisePolynomial") -> "PiecewisePolynomial":
        if not isinstance(other, PiecewisePolynomial):
            return NotImplemented
        bps = sorted(set(self.breakpoints) | set(other.breakpoints))
        pieces = []
        for a, b in zip(bps, bps[1:]):
            mid = (a + b) / 2
            pieces.append(_poly_mul(self._piece_at(mid), other._piece_at(mid)))
        return PiecewisePolynomial(tuple(bps), tuple(pieces))

    def __add__(self, other: "PiecewisePolynomial") -> "PiecewisePolynomial":
        if not isinstance(other, PiecewisePolynomial):
            return NotImplemented
        bps = sorted(set(self.breakpoints) | set(other.breakpoints))
        pieces = []
        for a, b in zip(bps, bps[1:]):
            mid = (a + b) / 2
            p = self._piece_at(mid)
            q = other._piece_at(mid)
            width = max(len(p), len(q))
            padded = [
                (p[k] if k < len(p) else ZERO) + (q[k] if k < len(q) else ZERO)
                for k in range(width)
            ]
            pieces.append(_poly_trim(padded))
        return PiecewisePolynomial(tuple(bps), tuple(pieces))

    def integral(self) -> Fraction:
        total = Fraction(0)
        for (a, b), coeffs in zip(
            zip(self.breakpoints, self.breakpoints[1:]), self.coeffs
        ):
            total += _poly_integral(coeffs, a, b)
        return total

    def is_zero(self) -> bool:
        return all(all(c == 0 for c in piece) for piece in self.coeffs)


def fiber_length(constraints: Sequence[tuple[int, Interval]], c) -> Fraction:
    """Exact length of { y : y + kappa*c in I for every (kappa, I) }."""
    c = Fraction(c)
    u = IntervalUnion.full()
    for kappa, interval in constraints:
        shifted = IntervalUnion.from_intervals(interval.shifted(-kappa * c))
        u = u.intersect(shifted)
        if not u.intervals:
            return Fraction(0)
    return u.measure


def overlap_profile(
    constraints: Sequence[tuple[int, Interval]]
) -> PiecewisePolynomial:
    """Fiber length of a single coordinate row as a function of its shift.

    ``constraints`` lists (kappa, interval) pairs, all referring to the same
    shift parameter; kappa may be any integer including 0 and negatives.
    An empty list yields the constant 1 (the whole circle).
    """
    items = [(int(k), iv) for k, iv in constraints]
    if not items:
        return PiecewisePolynomial.constant(1)
    bps = {ZERO, ONE}
    for i in range(len(items)):
        k1, iv1 = items[i]
        for j in range(i + 1, len(items)):
            k2, iv2 = items[j]
            dk = k2 - k1
            if dk == 0:
                continue
            for e1 in (iv1.lo, iv1.hi):
                for e2 in (iv2.lo, iv2.hi):
                    # endpoints e1 - k1*c and e2 - k2*c cross when
                    # c = (e2 - e1 + t) / dk for integer t
                    for t in range(-abs(dk) - 1, abs(dk) + 2):
                        c = Fraction(e2 - e1 + t, dk)
                        if 0 <= c < 1:
                            bps.add(c)
    ordered = sorted(bps)
    pieces = []
    for a, b in zip(ordered, ordered[1:]):
        c1 = a + (b - a) / 3
        c2 = a + 2 * (b - a) / 3
        v1 = fiber_length(items, c1)
        v2 = fiber_length(items, c2)
        slope = (v2 - v1) / (c2 - c1)
        intercept = v1 - slope * c1
        pieces.append(_poly_trim((intercept, slope)))
    return PiecewisePolynomial(tuple(ordered), tuple(pieces))


def integrate_product(profiles: Iterable[PiecewisePolynomial]) -> Fraction:
    """Exact integral over [0, 1] of a product of profiles (1 if empty)."""
    result = PiecewisePolynomial.constant(1)
    for p in profiles:
        result = result * p
    return result.integral()
