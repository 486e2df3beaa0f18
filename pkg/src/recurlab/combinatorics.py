"""Constructions of pattern-free lattice sets.

All three constructions restrict digit expansions in an odd base 2d - 1 to
digits below d, so that adding two admissible numbers never carries:

* corner-free subsets of [side]^2, where every ordered digit pair (i, j)
  with 0 <= i, j < d appears exactly m times among the n digit positions;
* three-point-free subsets of [side]^3, obtained by intersecting the
  cylinder over a corner-free set with a hyperplane x + y + z = s;
* AP3-free subsets of [side], from digit-restricted values grouped into
  shells of constant digit-square-sum (the whole digit-restricted set is
  already AP3-free when d = 2).

Constructed sets are certified by the brute-force oracles in
:mod:`recurlab.verification` before they are returned.
"""

from __future__ import annotations

import dataclasses
import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from . import verification
from .errors import (
    CertificationError,
    ConsistencyError,
    DimensionError,
    DomainError,
    RangeError,
    ShapeError,
    SizeCapError,
    StructureError,
)

#: Default cap on the number of points materialized by an enumeration.
DEFAULT_ENUMERATION_CAP = 10**6

VALID_CERTIFICATES = ("none", "corner-free", "three-point-free", "ap3-free")


@dataclass(frozen=True)
class DigitProfile:
    """Digit parameters of the balanced-pair construction.

    ``d`` is the block parameter (digits run over 0..d-1 in base 2d-1), ``m``
    the multiplicity of each digit pair, ``n = d*d*m`` the digit count and
    ``side = (2d-1)**n`` the ambient square side.  ``oversized`` marks the
    fallback profile returned when even the smallest profile does not fit
    the requested ambient size.
    """

    d: int
    m: int
    oversized: bool = False

    def __post_init__(self):
        if self.d < 2:
            raise DomainError(f"block parameter d must be >= 2, got {self.d}")
        if self.m < 1:
            raise DomainError(f"multiplicity m must be >= 1, got {self.m}")

    @property
    def n(self) -> int:
        return self.d * self.d * self.m

    @property
    def base(self) -> int:
        return 2 * self.d - 1

    @property
    def side(self) -> int:
        return self.base**self.n


@dataclass(frozen=True)
class LatticePointSet:
    """A finite subset of [0, side)^dim with an optional certificate.

    Points are stored sorted lexicographically and must be unique.  A
    certificate other than ``none`` promises that the matching oracle
    accepts the set; constructors in this module only attach a certificate
    after running that oracle.
    """

    dim: int
    side: int
    points: tuple[tuple[int, ...], ...]
    certificate: str = "none"

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise DimensionError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.side < 1:
            raise RangeError(f"side must be positive, got {self.side}")
        if self.certificate not in VALID_CERTIFICATES:
            raise RangeError(f"unknown certificate {self.certificate!r}")
        pts = tuple(tuple(int(c) for c in p) for p in self.points)
        for p in pts:
            if len(p) != self.dim:
                raise DimensionError(f"point {p} has wrong arity for dim {self.dim}")
            for c in p:
                if not 0 <= c < self.side:
                    raise RangeError(f"coordinate {c} outside [0, {self.side})")
        if len(set(pts)) != len(pts):
            raise RangeError("duplicate points")
        object.__setattr__(self, "points", tuple(sorted(pts)))

    def __len__(self) -> int:
        return len(self.points)

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "side": self.side,
            "certificate": self.certificate,
            "points": [list(p) for p in self.points],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "LatticePointSet":
        return cls(
            dim=int(data["dim"]),
            side=int(data["side"]),
            points=tuple(tuple(int(c) for c in p) for p in data["points"]),
            certificate=str(data.get("certificate", "none")),
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), sort_keys=True, indent=2))

    @classmethod
    def load(cls, path) -> "LatticePointSet":
        return cls.from_json_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class SliceSelection:
    """Outcome of picking the best hyperplane slice x + y + z = s.

    ``slice_sizes`` is sparse: sums s with zero count are omitted.  ``slots``
    is the number of admissible sums (3*side - 2) and ``total`` the mass
    distributed over them, i.e. len(base set) * side.
    """

    s: int
    slice_sizes: dict[int, int]
    slots: int
    total: int

    def size_of(self, s: int) -> int:
        return self.slice_sizes.get(s, 0)

    def csv_rows(self) -> Iterator[tuple[int, int]]:
        for s in range(self.slots):
            yield s, self.size_of(s)


def omega(d: int) -> int:
    """Digit multiplicity schedule: grows like the squared decimal log of d
    and never drops below 1, so small blocks use multiplicity 1."""
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    return max(1, math.ceil(math.log10(d) ** 2))


def choose_parameters(n_ambient: int) -> DigitProfile:
    """Largest profile (d, m = omega(d)) whose side fits inside n_ambient.

    If even the smallest profile (d=2, m=1) exceeds n_ambient the function
    still returns it, flagged ``oversized``, so callers can decide how to
    proceed.
    """
    if n_ambient < 3:
        raise RangeError(f"ambient size must be >= 3, got {n_ambient}")
    best = None
    d = 2
    while True:
        profile = DigitProfile(d=d, m=omega(d))
        if profile.side <= n_ambient:
            best = profile
            d += 1
        else:
            break
    if best is None:
        return DigitProfile(d=2, m=omega(2), oversized=True)
    return best


def corner_free_cardinality(profile: DigitProfile) -> int:
    """Exact number of points produced by the balanced-pair construction:
    n! / (m!)^(d^2), the number of ways to place the digit pairs."""
    return math.factorial(profile.n) // math.factorial(profile.m) ** (profile.d**2)


def _digits(value: int, base: int, count: int) -> list[int]:
    out = []
    for _ in range(count):
        value, r = divmod(value, base)
        out.append(r)
    return out


def corner_free_contains(profile: DigitProfile, x: int, y: int) -> bool:
    """Membership test for the balanced-pair corner-free set.

    True iff all base-(2d-1) digits of x and y lie below d and every digit
    pair (i, j) occurs exactly m times across the n positions.
    """
    side = profile.side
    if not (0 <= x < side and 0 <= y < side):
        raise RangeError(f"({x}, {y}) outside [0, {side})^2")
    xd = _digits(x, profile.base, profile.n)
    yd = _digits(y, profile.base, profile.n)
    if any(dig >= profile.d for dig in xd) or any(dig >= profile.d for dig in yd):
        return False
    counts = Counter(zip(xd, yd))
    return all(
        counts.get((i, j), 0) == profile.m
        for i in range(profile.d)
        for j in range(profile.d)
    )


def _pair_sequences(profile: DigitProfile) -> Iterator[tuple[tuple[int, int], ...]]:
    """All length-n sequences using every digit pair exactly m times, in
    lexicographic order (multiset permutations)."""
    pairs = [(i, j) for i in range(profile.d) for j in range(profile.d)]
    counts = [profile.m] * len(pairs)
    seq: list[tuple[int, int]] = []
    n = profile.n

    def rec() -> Iterator[tuple[tuple[int, int], ...]]:
        if len(seq) == n:
            yield tuple(seq)
            return
        for idx, pair in enumerate(pairs):
            if counts[idx]:
                counts[idx] -= 1
                seq.append(pair)
                yield from rec()
                seq.pop()
                counts[idx] += 1

    yield from rec()


def corner_free_enumerate(
    profile: DigitProfile, cap: int = DEFAULT_ENUMERATION_CAP
) -> LatticePointSet:
    """Materialize the corner-free set for a profile and certify it.

    Raises :class:`SizeCapError` when the exact cardinality exceeds ``cap``.
    """
    total = corner_free_cardinality(profile)
    if total > cap:
        raise SizeCapError(total, cap)
    powers = [profile.base**k for k in range(profile.n)]
    pts = []
    for seq in _pair_sequences(profile):
        x = sum(pair[0] * powers[k] for k, pair in enumerate(seq))
        y = sum(pair[1] * powers[k] for k, pair in enumerate(seq))
        pts.append((x, y))
    if len(pts) != total:
        raise ConsistencyError(
            f"enumerated {len(pts)} points but the formula gives {total}"
        )
    result = LatticePointSet(dim=2, side=profile.side, points=tuple(pts))
    witness = verification.verify_corner_free(result)
    if witness is not None:
        raise CertificationError(f"construction produced a corner: {witness}")
    return dataclasses.replace(result, certificate="corner-free")


def three_point_free_from_corner_free(
    corner_free: LatticePointSet, side: int | None = None
) -> tuple[LatticePointSet, SliceSelection]:
    """Best hyperplane slice of the cylinder over a corner-free set.

    Counts |V_s| for every admissible sum s without materializing the
    cylinder, selects the largest slice (smallest s on ties), materializes
    it and certifies the three-point property.
    """
    if corner_free.dim != 2:
        raise DimensionError("input must be 2-dimensional")
    if corner_free.certificate != "corner-free":
        raise CertificationError(
            "input set must carry a corner-free certificate"
        )
    n = corner_free.side if side is None else side
    if n != corner_free.side:
        raise RangeError(
            f"slice side {n} must match the input side {corner_free.side}"
        )
    slots = 3 * n - 2
    # For each point, z ranges over [0, n), so (x, y) contributes one unit
    # to every s in [x + y, x + y + n - 1].  Histogram + sliding window.
    hist = [0] * (2 * n - 1)
    for x, y in corner_free.points:
        hist[x + y] += 1
    prefix = [0]
    for h in hist:
        prefix.append(prefix[-1] + h)
    sizes: dict[int, int] = {}
    best_s, best_count = 0, -1
    for s in range(slots):
        lo = max(s - n + 1, 0)
        hi = min(s, 2 * n - 2)
        count = prefix[hi + 1] - prefix[lo] if hi >= lo else 0
        if count > 0:
            sizes[s] = count
        if count > best_count:
            best_s, best_count = s, count
    total = len(corner_free) * n
    if sum(sizes.values()) != total:
        raise ConsistencyError("slice counts do not add up to |set| * side")
    points = tuple(
        (x, y, best_s - x - y)
        for x, y in corner_free.points
        if 0 <= best_s - x - y < n
    )
    if len(points) != best_count:
        raise ConsistencyError("materialized slice disagrees with the count")
    floor_bound = -(-total // slots)  # ceil(total / slots), pigeonhole
    if corner_free.points and best_count < floor_bound:
        raise ConsistencyError(
            f"best slice {best_count} below the pigeonhole bound {floor_bound}"
        )
    result = LatticePointSet(dim=3, side=n, points=points)
    witness = verification.verify_three_point_free(result)
    if witness is not None:
        raise CertificationError(f"slice is not three-point free: {witness}")
    result = dataclasses.replace(result, certificate="three-point-free")
    return result, SliceSelection(s=best_s, slice_sizes=sizes, slots=slots, total=total)


def _digit_restricted(limit: int, base: int, max_digit: int, work_cap: int):
    """All (value, digit-square-sum) pairs with value < limit and every
    base-``base`` digit < ``max_digit``.  Returns None when the enumeration
    would exceed ``work_cap`` entries."""
    items = [(0, 0)]
    place = 1
    while place < limit:
        nxt = []
        for value, sq in items:
            for digit in range(max_digit):
                w = value + digit * place
                if w >= limit:
                    break
                nxt.append((w, sq + digit * digit))
        if len(nxt) > work_cap:
            return None
        items = nxt
        place *= base
    return items


def behrend_ap3_construct(
    n_ambient: int, work_cap: int = 2_000_000
) -> LatticePointSet:
    """AP3-free subset of [0, n_ambient) from digit-sphere shells.

    For each block parameter d, values below n_ambient with base-(2d-1)
    digits under d are generated; addition of two such values never carries,
    so each shell of constant digit-square-sum is AP3-free.  For d = 2 the
    whole digit-restricted set is AP3-free outright and is used as is,
    which dominates every shell.  The largest set over all d wins (smaller
    d, then smaller shell, on ties).
    """
    if n_ambient < 1:
        raise RangeError(f"ambient size must be >= 1, got {n_ambient}")
    best: list[int] = []
    best_key = (-1, 0, 0)
    d = 2
    while d == 2 or 2 * d - 1 <= n_ambient:
        items = _digit_restricted(n_ambient, 2 * d - 1, d, work_cap)
        if items is not None:
            if d == 2:
                candidates = [([v for v, _ in items], 0)]
            else:
                shells: dict[int, list[int]] = {}
                for value, sq in items:
                    shells.setdefault(sq, []).append(value)
                candidates = [(vals, sq) for sq, vals in sorted(shells.items())]
            for vals, sq in candidates:
                key = (len(vals), -d, -sq)
                if key > best_key:
                    best_key = key
                    best = vals
        d += 1
    result = LatticePointSet(
        dim=1, side=n_ambient, points=tuple((v,) for v in sorted(best))
    )
    witness = verification.verify_ap3_free(result)
    if witness is not None:
        raise CertificationError(f"construction contains a progression: {witness}")
    return dataclasses.replace(result, certificate="ap3-free")


def three_point_free_to_matrix(point_set: LatticePointSet) -> np.ndarray:
    """Encode a set with at most one point per Z-line as a side x side matrix.

    Cell (i, j) holds k + 1 when (i, j, k) is a member and 0 otherwise, so 0
    always means an empty line under 0-based coordinates.
    """
    if point_set.dim != 3:
        raise DimensionError("matrix encoding needs a 3-dimensional set")
    n = point_set.side
    matrix = np.zeros((n, n), dtype=np.int64)
    for x, y, z in point_set.points:
        if matrix[x, y] != 0:
            raise StructureError(
                f"two points share the Z-line through ({x}, {y})"
            )
        matrix[x, y] = z + 1
    return matrix


def matrix_to_three_point_free(matrix) -> LatticePointSet:
    """Inverse of :func:`three_point_free_to_matrix` (certificate not set)."""
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"matrix must be square, got shape {m.shape}")
    n = m.shape[0]
    if m.size and (m.min() < 0 or m.max() > n):
        raise ShapeError(f"entries must lie in [0, {n}]")
    points = tuple(
        (i, j, int(m[i, j]) - 1)
        for i in range(n)
        for j in range(n)
        if m[i, j] != 0
    )
    return LatticePointSet(dim=3, side=n, points=points)
