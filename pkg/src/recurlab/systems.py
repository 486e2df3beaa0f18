"""Built-in recurrence systems and the Haar shift reduction.

Each system fixes a torus dimension, a list of commuting-or-nilpotent
generators, which coordinates are averaged over and which feed the
indicator sets.  :func:`shift_reduction` computes the n-th powers
symbolically and extracts, for every generator and indicator coordinate,
the affine form (integer combination of averaged coordinates plus a
constant symbolic offset) by which that coordinate is shifted.  Forms that
are integer multiples of each other collapse to a single shift parameter;
the integer coefficient matrix of the parameters over the averaged
coordinates decides, through its rank, whether the parameters are jointly
Haar distributed, which is what licenses the exact measure engine.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .dynamics import AffineTorusMap, check_commute, power
from .errors import ConsistencyError, DimensionError
from .symbolic import SymScalar


@dataclass(frozen=True)
class RecurrenceSystem:
    key: str
    title: str
    dim: int
    generator_names: tuple[str, ...]
    generators: tuple[AffineTorusMap, ...]
    averaged_coords: tuple[int, ...]
    indicator_coords: tuple[int, ...]
    commuting: bool
    nilpotent_step: Optional[int] = None

    def __post_init__(self):
        if len(self.generator_names) != len(self.generators):
            raise DimensionError("one name per generator required")
        coords = sorted(self.averaged_coords + self.indicator_coords)
        if coords != list(range(self.dim)):
            raise DimensionError(
                "averaged and indicator coordinates must partition the torus"
            )
        if self.commuting:
            for i in range(len(self.generators)):
                for j in range(i + 1, len(self.generators)):
                    if not check_commute(self.generators[i], self.generators[j]).commutes:
                        raise ConsistencyError(
                            f"{self.key}: generators tagged commuting do not commute"
                        )

    def to_json_dict(self) -> dict:
        return {
            "key": self.key,
            "title": self.title,
            "dim": self.dim,
            "generators": {
                name: g.to_json_dict()
                for name, g in zip(self.generator_names, self.generators)
            },
            "averaged_coords": list(self.averaged_coords),
            "indicator_coords": list(self.indicator_coords),
        }


def _map(dim, rows, translation) -> AffineTorusMap:
    return AffineTorusMap(dim, tuple(tuple(r) for r in rows), tuple(translation))


@functools.cache
def commuting_pair_system() -> RecurrenceSystem:
    """Two commuting unipotent affine maps on T^6.

    Coordinates (x1, x2, x3, y1, y2, y3); the x block is rotated by the
    irrationals and feeds the y block, which carries the indicator set.
    """
    zero = SymScalar()
    a = SymScalar.alpha()
    b = SymScalar.beta()
    t1 = _map(
        6,
        [
            (1, 0, 0, 0, 0, 0),
            (0, 1, 0, 0, 0, 0),
            (0, 0, 1, 0, 0, 0),
            (1, 0, 0, 1, 0, 0),
            (0, 0, 0, 0, 1, 0),
            (1, 1, 1, 0, 0, 1),
        ],
        [a, b, zero, zero, zero, zero],
    )
    t2 = _map(
        6,
        [
            (1, 0, 0, 0, 0, 0),
            (0, 1, 0, 0, 0, 0),
            (0, 0, 1, 0, 0, 0),
            (0, 0, 0, 1, 0, 0),
            (0, 0, 1, 0, 1, 0),
            (1, 1, 1, 0, 0, 1),
        ],
        [zero, b, a, zero, zero, zero],
    )
    return RecurrenceSystem(
        key="t11",
        title="two commuting affine maps on T^6",
        dim=6,
        generator_names=("T1", "T2"),
        generators=(t1, t2),
        averaged_coords=(0, 1, 2),
        indicator_coords=(3, 4, 5),
        commuting=True,
    )


@functools.cache
def commuting_triple_system() -> RecurrenceSystem:
    """Three commuting maps on T^3 = (x, y, z); the indicator lives on z."""
    zero = SymScalar()
    a = SymScalar.alpha()
    t1 = _map(3, [(1, 0, 0), (0, 1, 0), (0, 1, 1)], [a, zero, zero])
    t2 = power(t1, 2)
    t3 = _map(3, [(1, 0, 0), (0, 1, 0), (1, 0, 1)], [zero, a, zero])
    return RecurrenceSystem(
        key="t12",
        title="three commuting affine maps on T^3",
        dim=3,
        generator_names=("T1", "T2", "T3"),
        generators=(t1, t2, t3),
        averaged_coords=(0, 1),
        indicator_coords=(2,),
        commuting=True,
    )


@functools.cache
def nilpotent_pair_system() -> RecurrenceSystem:
    """Two maps on T^3 generating a 2-step nilpotent group; indicator on (y, z)."""
    zero = SymScalar()
    a = SymScalar.alpha()
    t1 = _map(3, [(1, 0, 0), (1, 1, 0), (0, 0, 1)], [a, zero, zero])
    t2 = _map(3, [(1, 0, 0), (0, 1, 0), (1, 0, 1)], [a, zero, zero])
    return RecurrenceSystem(
        key="t13",
        title="nilpotent pair of affine maps on T^3",
        dim=3,
        generator_names=("T1", "T2"),
        generators=(t1, t2),
        averaged_coords=(0,),
        indicator_coords=(1, 2),
        commuting=False,
        nilpotent_step=2,
    )


SYSTEM_BUILDERS = {
    "t11": commuting_pair_system,
    "t12": commuting_triple_system,
    "t13": nilpotent_pair_system,
}


def get_system(key: str) -> RecurrenceSystem:
    if key not in SYSTEM_BUILDERS:
        raise KeyError(f"unknown system {key!r}; choose from {sorted(SYSTEM_BUILDERS)}")
    return SYSTEM_BUILDERS[key]()


@dataclass(frozen=True)
class ShiftReduction:
    """Shift structure of the n-th powers over the averaged coordinates.

    ``matrix`` has one row per shift parameter, giving its integer
    coefficients over the averaged coordinates; ``offsets`` are the constant
    symbolic parts.  ``assignments[g][c]`` is (param index, integer
    multiplier) for generator g and indicator coordinate c, or None when
    that coordinate is unshifted.  ``full_rank`` states whether the
    parameters are jointly Haar for the averaged coordinates.
    """

    matrix: tuple[tuple[int, ...], ...]
    offsets: tuple[SymScalar, ...]
    full_rank: bool
    assignments: tuple[tuple[Optional[tuple[int, int]], ...], ...]

    @property
    def n_params(self) -> int:
        return len(self.matrix)


def _rank(rows: Sequence[Sequence[int]]) -> int:
    m = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    row = 0
    for col in range(cols):
        pivot = next((r for r in range(row, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = 1 / m[row][col]
        m[row] = [v * inv for v in m[row]]
        for r in range(len(m)):
            if r != row and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[row])]
        row += 1
        rank += 1
    return rank


def shift_reduction(
    system: RecurrenceSystem,
    n: int,
    generator_indices: Optional[Sequence[int]] = None,
) -> ShiftReduction:
    """Extract the shift parameters of the n-th powers of the generators.

    Raises :class:`ConsistencyError` when a power does not have the expected
    structure (indicator coordinate not fixed up to averaged-coordinate
    contributions, or incompatible scalings between forms).
    """
    indices = list(range(len(system.generators))) if generator_indices is None \
        else list(generator_indices)
    averaged = system.averaged_coords
    indicator = system.indicator_coords
    params: list[tuple[tuple[int, ...], SymScalar]] = []
    # assignment entries are mutable while rebasing may rescale multipliers
    entries: list[list[Optional[list[int]]]] = []
    for gi in indices:
        p = power(system.generators[gi], n)
        row_entries: list[Optional[list[int]]] = []
        entries.append(row_entries)
        for c in indicator:
            row = p.matrix[c]
            if row[c] != 1 or any(row[k] != 0 for k in indicator if k != c):
                raise ConsistencyError(
                    f"{system.key}: power of generator {gi} mixes indicator "
                    f"coordinates at coordinate {c}"
                )
            form = tuple(row[k] for k in averaged)
            offset = p.translation[c]
            if all(f == 0 for f in form):
                if not offset.is_zero_mod1():
                    raise ConsistencyError(
                        f"{system.key}: constant shift without averaged-"
                        f"coordinate dependence at coordinate {c}"
                    )
                row_entries.append(None)
                continue
            row_entries.append(_assign(form, offset, params, entries))
    matrix = tuple(form for form, _ in params)
    offsets = tuple(off for _, off in params)
    full_rank = bool(params) and _rank(matrix) == len(params)
    assignments = tuple(
        tuple(None if e is None else (e[0], e[1]) for e in row) for row in entries
    )
    return ShiftReduction(
        matrix=matrix, offsets=offsets, full_rank=full_rank, assignments=assignments
    )


def _assign(form, offset, params, entries) -> list[int]:
    """Match a shift form against the known parameters, rebasing when the
    new form is a fractional multiple of an existing one."""
    for idx, (pform, poffset) in enumerate(params):
        k0 = next((k for k, v in enumerate(pform) if v != 0), None)
        if k0 is None or form[k0] == 0:
            continue
        ratio = Fraction(form[k0], pform[k0])
        if tuple(ratio * v for v in pform) != tuple(Fraction(f) for f in form):
            continue
        if not (ratio * poffset - offset).is_zero():
            raise ConsistencyError(
                "parallel shift forms with incompatible constant offsets"
            )
        if ratio.denominator == 1:
            return [idx, int(ratio)]
        q = ratio.denominator
        if any(v % q for v in pform):
            raise ConsistencyError("cannot rebase shift parameter to integers")
        params[idx] = (
            tuple(v // q for v in pform),
            poffset * Fraction(1, q),
        )
        for row in entries:
            for e in row:
                if e is not None and e[0] == idx:
                    e[1] *= q
        return [idx, ratio.numerator]
    params.append((tuple(int(f) for f in form), offset))
    return [len(params) - 1, 1]
