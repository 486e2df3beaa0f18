"""Brute-force oracles for the forbidden-pattern properties.

Each oracle either accepts a set (returns ``None``) or returns a
:class:`PatternWitness` holding a concrete violating configuration.  The
oracles check the defining conditions directly, point by point; they never
rely on how a set was constructed, which is what makes them usable as ground
truth in tests and as the certification step for constructed sets.

Scan orders are fixed (sorted coordinates), so the first witness found is
deterministic.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionError, ShapeError

#: Seed used by randomized small-instance fuzzing in the test suite.
DEFAULT_FUZZ_SEED = 1729


@dataclass(frozen=True)
class PatternWitness:
    """A concrete violation of a forbidden-pattern property.

    kind is one of ``corner``, ``three-point``, ``ap3``, ``matrix-row``,
    ``matrix-pair``; ``points`` holds the offending tuples (lattice points or
    matrix cell coordinates, depending on the kind).
    """

    kind: str
    points: tuple

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "points": [list(p) for p in self.points]}


def verify_corner_free(point_set) -> Optional[PatternWitness]:
    """Check that no corner (x, y), (x + d, y), (x, y + d) with d != 0 exists.

    Runs in O(sum of squared row sizes) by pairing points that share a row
    and probing the third point with a hash lookup.
    """
    if point_set.dim != 2:
        raise DimensionError(f"corner oracle needs dim 2, got {point_set.dim}")
    members = set(point_set.points)
    rows: dict[int, list[int]] = defaultdict(list)
    for x, y in point_set.points:
        rows[y].append(x)
    for y in sorted(rows):
        xs = sorted(rows[y])
        for x in xs:
            for x2 in xs:
                if x2 == x:
                    continue
                delta = x2 - x
                if (x, y + delta) in members:
                    return PatternWitness(
                        "corner", ((x, y), (x2, y), (x, y + delta))
                    )
    return None


def verify_three_point_free(point_set) -> Optional[PatternWitness]:
    """Check the three-point condition on a subset of [side]^3.

    A violation is a triple (x, y, z'), (x, y', z), (x', y, z) in the set
    that does not collapse to a single point.  Degenerate cases (two points
    on a line parallel to an axis) are violations as well and are found by
    the same scan, since the pattern allows repeated points.
    """
    if point_set.dim != 3:
        raise DimensionError(f"three-point oracle needs dim 3, got {point_set.dim}")
    zlines: dict[tuple[int, int], list[int]] = defaultdict(list)
    planes: dict[int, list[tuple[int, int, int]]] = defaultdict(list)
    for p in point_set.points:
        zlines[(p[0], p[1])].append(p[2])
        planes[p[2]].append(p)
    for z in sorted(planes):
        plane = sorted(planes[z])
        for p2 in plane:  # p2 = (x, y', z)
            for p3 in plane:  # p3 = (x', y, z)
                x, y = p2[0], p3[1]
                for z1 in zlines.get((x, y), ()):
                    if not (x == p3[0] and y == p2[1] and z1 == z):
                        return PatternWitness(
                            "three-point", ((x, y, z1), p2, p3)
                        )
    return None


def verify_ap3_free(point_set) -> Optional[PatternWitness]:
    """Check that no three distinct values a, b, c satisfy a + c = 2b."""
    if point_set.dim != 1:
        raise DimensionError(f"ap3 oracle needs dim 1, got {point_set.dim}")
    values = sorted(p[0] for p in point_set.points)
    present = set(values)
    for i, a in enumerate(values):
        for c in values[i + 1:]:
            if (a + c) % 2 == 0:
                b = (a + c) // 2
                if b in present:
                    return PatternWitness("ap3", ((a,), (b,), (c,)))
    return None


def verify_matrix_properties(matrix) -> Optional[PatternWitness]:
    """Check the two structural conditions of a three-point-free matrix.

    For every nonzero value k: (1) k appears at most once in each row and in
    each column; (2) if cells (i, j) and (i', j') both hold k, the opposite
    corners (i, j') and (i', j) are zero.
    """
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"matrix must be square, got shape {m.shape}")
    n = m.shape[0]
    if m.size and (m.min() < 0 or m.max() > n):
        raise ShapeError(f"entries must lie in [0, {n}]")
    positions: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for i in range(n):
        for j in range(n):
            k = int(m[i, j])
            if k != 0:
                positions[k].append((i, j))
    for k in sorted(positions):
        cells = positions[k]
        seen_rows: dict[int, tuple[int, int]] = {}
        seen_cols: dict[int, tuple[int, int]] = {}
        for cell in cells:
            i, j = cell
            if i in seen_rows:
                return PatternWitness("matrix-row", (seen_rows[i], cell))
            if j in seen_cols:
                return PatternWitness("matrix-row", (seen_cols[j], cell))
            seen_rows[i] = cell
            seen_cols[j] = cell
        for a in range(len(cells)):
            for b in range(a + 1, len(cells)):
                (i, j), (i2, j2) = cells[a], cells[b]
                if m[i, j2] != 0:
                    return PatternWitness(
                        "matrix-pair", ((i, j), (i2, j2), (i, j2))
                    )
                if m[i2, j] != 0:
                    return PatternWitness(
                        "matrix-pair", ((i, j), (i2, j2), (i2, j))
                    )
    return None


#: Oracle to run for an uncertified set of a given dimension.
ORACLE_BY_DIM = {
    1: ("ap3-free", verify_ap3_free),
    2: ("corner-free", verify_corner_free),
    3: ("three-point-free", verify_three_point_free),
}

#: Oracle matching each certificate label.
ORACLE_BY_CERTIFICATE = {
    "ap3-free": verify_ap3_free,
    "corner-free": verify_corner_free,
    "three-point-free": verify_three_point_free,
}


def run_matching_oracle(point_set) -> tuple[str, Optional[PatternWitness]]:
    """Run the oracle matching the set's certificate (or its dimension when
    uncertified).  Returns the property name checked and the outcome."""
    cert = point_set.certificate
    if cert != "none":
        if cert not in ORACLE_BY_CERTIFICATE:
            raise DimensionError(f"unknown certificate {cert!r}")
        return cert, ORACLE_BY_CERTIFICATE[cert](point_set)
    if point_set.dim not in ORACLE_BY_DIM:
        raise DimensionError(f"no oracle for dimension {point_set.dim}")
    name, oracle = ORACLE_BY_DIM[point_set.dim]
    return name, oracle(point_set)
