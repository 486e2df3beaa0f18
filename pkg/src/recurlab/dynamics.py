"""Exact algebra of unipotent affine maps on the k-torus.

A map is x -> A x + t with A an integer unipotent matrix ((A - I)^k = 0) and
t a vector of :class:`SymScalar` translations.  Composition, inversion,
integer powers and commutators are all computed symbolically; two maps are
equal when their matrices agree and their translations agree modulo the
integer lattice.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ConsistencyError, DimensionError, StructureError
from .symbolic import DEFAULT_ALPHA, DEFAULT_BETA, SymScalar

IntMatrix = tuple[tuple[int, ...], ...]


def mat_identity(k: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    k = len(a)
    return tuple(
        tuple(sum(a[i][l] * b[l][j] for l in range(k)) for j in range(k))
        for i in range(k)
    )


def mat_vec_sym(a: IntMatrix, v: Sequence[SymScalar]) -> tuple[SymScalar, ...]:
    k = len(a)
    out = []
    for i in range(k):
        acc = SymScalar()
        for j in range(k):
            if a[i][j]:
                acc = acc + a[i][j] * v[j]
        out.append(acc)
    return tuple(out)


def mat_sub(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return tuple(
        tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
    )


def is_unipotent(a: IntMatrix) -> bool:
    k = len(a)
    n = mat_sub(a, mat_identity(k))
    power = n
    for _ in range(k - 1):
        if all(all(x == 0 for x in row) for row in power):
            return True
        power = mat_mul(power, n)
    return all(all(x == 0 for x in row) for row in power)


def unipotent_inverse(a: IntMatrix) -> IntMatrix:
    """Integer inverse via the finite Neumann series of the nilpotent part."""
    k = len(a)
    n = mat_sub(a, mat_identity(k))
    result = mat_identity(k)
    term = mat_identity(k)
    for i in range(1, k):
        term = mat_mul(term, n)
        sign = -1 if i % 2 else 1
        result = tuple(
            tuple(r + sign * t for r, t in zip(rr, rt))
            for rr, rt in zip(result, term)
        )
    if mat_mul(result, a) != mat_identity(k):
        raise StructureError("matrix inverse check failed; matrix not unipotent")
    return result


@dataclass(frozen=True)
class AffineTorusMap:
    """x -> A x + t on the dim-torus, A unipotent, t symbolic-exact.

    Translations are normalized (rational parts reduced modulo 1) at
    construction, so dataclass equality is equality of torus maps.
    """

    dim: int
    matrix: IntMatrix
    translation: tuple[SymScalar, ...]

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if len(m) != self.dim or any(len(row) != self.dim for row in m):
            raise DimensionError(f"matrix shape does not match dim {self.dim}")
        t = tuple(s.normalized() for s in self.translation)
        if len(t) != self.dim:
            raise DimensionError("translation arity does not match dim")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "translation", t)
        if not is_unipotent(m):
            raise StructureError("matrix part must be unipotent")

    @classmethod
    def identity(cls, dim: int) -> "AffineTorusMap":
        return cls(dim, mat_identity(dim), tuple(SymScalar() for _ in range(dim)))

    def is_identity(self) -> bool:
        return self.matrix == mat_identity(self.dim) and all(
            s.is_zero_mod1() for s in self.translation
        )

    def float_parts(
        self, alpha: float = DEFAULT_ALPHA, beta: float = DEFAULT_BETA
    ) -> tuple[list[list[float]], list[float]]:
        a = [[float(x) for x in row] for row in self.matrix]
        t = [s.to_float(alpha, beta) for s in self.translation]
        return a, t

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "matrix": [list(row) for row in self.matrix],
            "translation": [s.to_json() for s in self.translation],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "AffineTorusMap":
        return cls(
            dim=int(data["dim"]),
            matrix=tuple(tuple(int(x) for x in row) for row in data["matrix"]),
            translation=tuple(SymScalar.from_json(s) for s in data["translation"]),
        )


def compose(g: AffineTorusMap, h: AffineTorusMap) -> AffineTorusMap:
    """g after h: x -> A_g A_h x + A_g t_h + t_g."""
    if g.dim != h.dim:
        raise DimensionError("dimension mismatch")
    matrix = mat_mul(g.matrix, h.matrix)
    moved = mat_vec_sym(g.matrix, h.translation)
    translation = tuple(a + b for a, b in zip(moved, g.translation))
    return AffineTorusMap(g.dim, matrix, translation)


def inverse(g: AffineTorusMap) -> AffineTorusMap:
    ai = unipotent_inverse(g.matrix)
    t = tuple(-s for s in mat_vec_sym(ai, g.translation))
    return AffineTorusMap(g.dim, ai, t)


def power(g: AffineTorusMap, n: int) -> AffineTorusMap:
    """Exact n-th power for any integer n (negative via the exact inverse)."""
    if n == 0:
        return AffineTorusMap.identity(g.dim)
    if n < 0:
        return power(inverse(g), -n)
    result = AffineTorusMap.identity(g.dim)
    base = g
    while n:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return result


def commutator(g: AffineTorusMap, h: AffineTorusMap) -> AffineTorusMap:
    """g h g^-1 h^-1, computed by direct composition."""
    return compose(compose(g, h), compose(inverse(g), inverse(h)))


@dataclass(frozen=True)
class CommuteReport:
    """Outcome of the direct commutation check and the matrix criterion.

    The criterion (A_g - I) t_h == (A_h - I) t_g on the torus only applies
    when the matrix parts commute; when applicable it provably agrees with
    the direct check, and disagreement raises.
    """

    commutes: bool
    matrices_commute: bool
    criterion_applicable: bool
    criterion_holds: Optional[bool]


def check_commute(g: AffineTorusMap, h: AffineTorusMap) -> CommuteReport:
    if g.dim != h.dim:
        raise DimensionError("dimension mismatch")
    direct = compose(g, h) == compose(h, g)
    mats = mat_mul(g.matrix, h.matrix) == mat_mul(h.matrix, g.matrix)
    criterion = None
    if mats:
        ident = mat_identity(g.dim)
        lhs = mat_vec_sym(mat_sub(g.matrix, ident), h.translation)
        rhs = mat_vec_sym(mat_sub(h.matrix, ident), g.translation)
        criterion = all(a.congruent(b) for a, b in zip(lhs, rhs))
        if criterion != direct:
            raise ConsistencyError(
                "commutation criterion disagrees with the direct check"
            )
    return CommuteReport(
        commutes=direct,
        matrices_commute=mats,
        criterion_applicable=mats,
        criterion_holds=criterion,
    )


def nilpotency_class(
    generators: Sequence[AffineTorusMap], max_depth: int = 8
) -> Optional[int]:
    """Least d such that all depth-(d+1) iterated commutators vanish.

    Levels are generated by commutating the previous level's elements with
    the generators.  For affine groups whose matrix parts commute, every
    commutator is a pure translation and products of (A - I) factors kill
    the levels, so this recursion terminates at the true class.  Returns
    None when the class is not resolved within ``max_depth``.
    """
    if max_depth < 1:
        raise StructureError("max_depth must be at least 1")
    gens = list(generators)
    level = gens
    for depth in range(1, max_depth + 1):
        nxt = []
        seen = set()
        for a in level:
            for g in gens:
                c = commutator(a, g)
                if not c.is_identity() and c not in seen:
                    seen.add(c)
                    nxt.append(c)
        if not nxt:
            return depth
        level = nxt
    return None


def orbit_statistics(
    maps: Sequence[AffineTorusMap],
    start: Optional[Sequence[float]] = None,
    steps: int = 100_000,
    grid: int = 20,
    seed: int = 1729,
    alpha: float = DEFAULT_ALPHA,
    beta: float = DEFAULT_BETA,
) -> "OrbitStatistics":
    """Box-counting discrepancy of a random-word orbit against uniform.

    The orbit is iterated in floating point with the concrete irrational
    values; the generator applied at each step is drawn uniformly with a
    fixed seed.  Low discrepancy is evidence, never proof, of minimality.
    """
    if not maps:
        raise DimensionError("need at least one map")
    dim = maps[0].dim
    if any(m.dim != dim for m in maps):
        raise DimensionError("all maps must share one dimension")
    point = list(start) if start is not None else [0.0] * dim
    if len(point) != dim:
        raise DimensionError("start point has wrong arity")
    parts = [m.float_parts(alpha, beta) for m in maps]
    rng = random.Random(seed)
    cells = grid**dim
    counts = [0] * cells
    for _ in range(steps):
        a, t = parts[rng.randrange(len(parts))]
        point = [
            (sum(a[i][j] * point[j] for j in range(dim)) + t[i]) % 1.0
            for i in range(dim)
        ]
        idx = 0
        for coord in point:
            cell = int(coord * grid)
            if cell == grid:  # guard against 1.0 after rounding
                cell = grid - 1
            idx = idx * grid + cell
        counts[idx] += 1
    uniform = 1.0 / cells
    discrepancy = max(abs(c / steps - uniform) for c in counts)
    return OrbitStatistics(
        discrepancy=discrepancy, steps=steps, grid=grid, cells=cells
    )


@dataclass(frozen=True)
class OrbitStatistics:
    discrepancy: float
    steps: int
    grid: int
    cells: int
