"""Exponent thresholds, asymptotic lower bounds, and certified comparisons.

The threshold formulas give the break-even exponent ell such that the
computed intersection measure equals mu(A)^ell under the idealized
accounting of each built-in system family.  They are evaluated with
arbitrary-precision logarithms.  Strict comparisons between an exact
rational measure and mu(A)^ell (irrational for fractional ell) are decided
in log space with interval arithmetic, so "pass" and "fail" are certified
and anything within rounding slack is reported as inconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import iv, mp

from .errors import DomainError

VARIANTS = ("commuting2", "nilpotent2")

DEFAULT_THRESHOLD_DIGITS = 50
DEFAULT_COMPARE_DIGITS = 100


@dataclass(frozen=True)
class ExponentThreshold:
    variant: str
    n_side: int
    set_size: int
    ell_star: mpmath.mpf
    digits: int

    def __float__(self) -> float:
        return float(self.ell_star)


def exponent_threshold(
    variant: str, n_side: int, set_size: int, digits: int = DEFAULT_THRESHOLD_DIGITS
) -> ExponentThreshold:
    """Break-even exponent for the two built-in accounting variants.

    commuting2:  1 + 3 / (3 + log(8)/log(N) - log(size)/log(N))
    nilpotent2:  1 + 1 / (2 + log(4)/log(N) - log(size)/log(N))
    """
    if variant not in VARIANTS:
        raise DomainError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if n_side < 2:
        raise DomainError(f"side must be >= 2, got {n_side}")
    if not 1 <= set_size <= n_side * n_side:
        raise DomainError(
            f"set size {set_size} outside [1, {n_side}^2] for variant {variant}"
        )
    with mp.workdps(digits):
        log_n = mp.log(n_side)
        log_size = mp.log(set_size)
        if variant == "commuting2":
            ell = 1 + 3 / (3 + mp.log(8) / log_n - log_size / log_n)
        else:
            ell = 1 + 1 / (2 + mp.log(4) / log_n - log_size / log_n)
    return ExponentThreshold(
        variant=variant, n_side=n_side, set_size=set_size, ell_star=ell, digits=digits
    )


@dataclass(frozen=True)
class LowerBoundEstimate:
    kind: str
    n_side: int
    epsilon: float
    exponent: mpmath.mpf
    value: mpmath.mpf


def lower_bound(
    kind: str, n_side: int, epsilon: float, digits: int = DEFAULT_THRESHOLD_DIGITS
) -> LowerBoundEstimate:
    """Closed-form asymptotic lower bounds on extremal set sizes.

    kind "nu" (corner-free in the square): N^(2 - (4 log 2 + eps)/loglog N);
    kind "w" (three-point-free in the cube) uses 2*eps in place of eps.
    """
    if kind not in ("nu", "w"):
        raise DomainError(f"kind must be 'nu' or 'w', got {kind!r}")
    if n_side < 16:
        raise DomainError(f"side must be >= 16 for the bound, got {n_side}")
    if epsilon <= 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    eff = epsilon if kind == "nu" else 2 * epsilon
    with mp.workdps(digits):
        exponent = 2 - (4 * mp.log(2) + eff) / mp.log(mp.log(n_side))
        value = mp.e ** (exponent * mp.log(n_side))
    return LowerBoundEstimate(
        kind=kind, n_side=n_side, epsilon=epsilon, exponent=exponent, value=value
    )


def break_even_exponent(
    measure: Fraction, base: Fraction, digits: int = DEFAULT_THRESHOLD_DIGITS
) -> mpmath.mpf:
    """Exponent ell with measure == base^ell, for 0 < measure, base < 1."""
    if not (0 < measure < 1 and 0 < base < 1):
        raise DomainError("break-even exponent needs values strictly inside (0, 1)")
    with mp.workdps(digits):
        num = mp.log(measure.numerator) - mp.log(measure.denominator)
        den = mp.log(base.numerator) - mp.log(base.denominator)
        return num / den


def _iv_log_fraction(value: Fraction):
    return iv.log(iv.mpf(value.numerator)) - iv.log(iv.mpf(value.denominator))


def compare_measure_power(
    measure: Fraction,
    base: Fraction,
    ell,
    digits: int = DEFAULT_COMPARE_DIGITS,
) -> str:
    """Certified strict comparison of ``measure`` against ``base ** ell``.

    Returns "pass" when measure < base^ell, "fail" when measure >= base^ell,
    and "inconclusive" when the enclosing intervals overlap at the working
    precision.
    """
    measure = Fraction(measure)
    base = Fraction(base)
    if base <= 0:
        return "pass" if measure < 0 else "fail"
    if measure == 0:
        return "pass"
    if isinstance(ell, int) or (isinstance(ell, Fraction) and ell.denominator == 1):
        # rational power: compare exactly, no rounding slack involved
        return "pass" if measure < base ** int(ell) else "fail"
    bits = max(
        int(digits * 3.33) + 64,
        measure.numerator.bit_length(),
        measure.denominator.bit_length(),
        base.numerator.bit_length(),
        base.denominator.bit_length(),
    ) + 32
    old_prec = iv.prec
    iv.prec = bits
    try:
        lhs = _iv_log_fraction(measure)
        if isinstance(ell, Fraction):
            ell_iv = iv.mpf(ell.numerator) / iv.mpf(ell.denominator)
        else:
            ell_iv = iv.mpf(ell)
        rhs = ell_iv * _iv_log_fraction(base)
        if lhs.b < rhs.a:
            return "pass"
        if lhs.a >= rhs.b:
            return "fail"
        return "inconclusive"
    finally:
        iv.prec = old_prec
