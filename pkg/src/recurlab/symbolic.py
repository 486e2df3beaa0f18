"""Exact scalars q0 + q1*alpha + q2*beta over two fixed symbolic irrationals.

Affine torus maps only ever add such scalars and multiply them by integers
or rationals, so a rank-3 module over the rationals is enough; no products
of irrationals arise.  Torus reduction applies to the rational part q0 only:
alpha and beta are irrational, so their coefficients never wrap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

#: Concrete values used by floating-point simulation paths.  Rationally
#: independent; overridable per call site.
DEFAULT_ALPHA = math.sqrt(2.0) - 1.0
DEFAULT_BETA = math.sqrt(3.0) - 1.0


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True, slots=True)
class SymScalar:
    q0: Fraction = Fraction(0)
    q1: Fraction = Fraction(0)
    q2: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "q0", _frac(self.q0))
        object.__setattr__(self, "q1", _frac(self.q1))
        object.__setattr__(self, "q2", _frac(self.q2))

    @classmethod
    def rational(cls, value) -> "SymScalar":
        return cls(q0=_frac(value))

    @classmethod
    def alpha(cls, coefficient=1) -> "SymScalar":
        return cls(q1=_frac(coefficient))

    @classmethod
    def beta(cls, coefficient=1) -> "SymScalar":
        return cls(q2=_frac(coefficient))

    def __add__(self, other: "SymScalar") -> "SymScalar":
        if not isinstance(other, SymScalar):
            return NotImplemented
        return SymScalar(self.q0 + other.q0, self.q1 + other.q1, self.q2 + other.q2)

    def __sub__(self, other: "SymScalar") -> "SymScalar":
        if not isinstance(other, SymScalar):
            return NotImplemented
        return SymScalar(self.q0 - other.q0, self.q1 - other.q1, self.q2 - other.q2)

    def __neg__(self) -> "SymScalar":
        return SymScalar(-self.q0, -self.q1, -self.q2)

    def __mul__(self, scalar) -> "SymScalar":
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        s = _frac(scalar)
        return SymScalar(self.q0 * s, self.q1 * s, self.q2 * s)

    __rmul__ = __mul__

    def normalized(self) -> "SymScalar":
        """Reduce the rational part modulo 1 (torus representative)."""
        return SymScalar(self.q0 % 1, self.q1, self.q2)

    def is_zero(self) -> bool:
        return self.q0 == 0 and self.q1 == 0 and self.q2 == 0

    def is_zero_mod1(self) -> bool:
        return self.q0.denominator == 1 and self.q1 == 0 and self.q2 == 0

    def congruent(self, other: "SymScalar") -> bool:
        """Equality as a torus translation: q0 mod 1, q1 and q2 exact."""
        return (self - other).is_zero_mod1()

    def to_float(self, alpha: float = DEFAULT_ALPHA, beta: float = DEFAULT_BETA) -> float:
        return float(self.q0) + float(self.q1) * alpha + float(self.q2) * beta

    def to_json(self) -> list[str]:
        return [str(self.q0), str(self.q1), str(self.q2)]

    @classmethod
    def from_json(cls, data) -> "SymScalar":
        return cls(Fraction(data[0]), Fraction(data[1]), Fraction(data[2]))

    def __str__(self) -> str:
        parts = []
        if self.q0:
            parts.append(str(self.q0))
        if self.q1:
            parts.append(f"{self.q1}*a")
        if self.q2:
            parts.append(f"{self.q2}*b")
        return " + ".join(parts) if parts else "0"
