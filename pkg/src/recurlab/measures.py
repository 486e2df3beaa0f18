"""Exact intersection measures for box unions under Haar shift patterns.

The quantity computed here is

    integral over the shift parameters (jointly Haar) of
    volume{ y : y shifted per role r lies in the box union, for all roles }

expanded as a sum over ordered tuples of boxes, one box per role.  A
:class:`ShiftConstraintTable` records, for every role and coordinate, the
integer multipliers of each shift parameter.  Three structural facts reduce
each tuple's contribution to one-dimensional overlap profiles:

* a parameter constrained in exactly one place integrates out to the target
  interval's length (the constraint is dropped, "detached");
* coordinates whose remaining constraints involve no parameter contribute a
  plain interval intersection length;
* the remaining coordinates must each involve a single parameter; grouping
  them by parameter makes the parameters independent across groups, so the
  contribution is a product over groups of integrals of profile products.

The engine is exact end to end: all values are rationals.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .dynamics import AffineTorusMap, power
from .errors import DimensionError, StructureError
from .intervals import BoxUnion, Interval, box_union_from_set
from .piecewise import PiecewisePolynomial, integrate_product, overlap_profile
from .symbolic import DEFAULT_ALPHA, DEFAULT_BETA
from .systems import RecurrenceSystem, shift_reduction

#: Fixed Monte Carlo chunk size.  Chunks are seeded independently, so the
#: estimate depends only on (seed, samples), never on the worker count.
MC_CHUNK = 65536


@dataclass(frozen=True)
class ShiftConstraintTable:
    """Integer shift multipliers per role and coordinate.

    ``kappa[r][j]`` is the length-``n_params`` multiplier vector of role r
    at coordinate j; role 0 conventionally is the unshifted identity.
    ``full_rank`` certifies that the parameters are jointly Haar.
    """

    dim: int
    n_params: int
    kappa: tuple[tuple[tuple[int, ...], ...], ...]
    full_rank: bool = True

    def __post_init__(self):
        for role in self.kappa:
            if len(role) != self.dim:
                raise DimensionError("role with wrong coordinate count")
            for vec in role:
                if len(vec) != self.n_params:
                    raise DimensionError("kappa vector with wrong parameter count")

    @property
    def n_roles(self) -> int:
        return len(self.kappa)

    @classmethod
    def from_system(
        cls,
        system: RecurrenceSystem,
        n: int,
        generator_indices: Optional[Sequence[int]] = None,
    ) -> "ShiftConstraintTable":
        """Identity role plus one role per generator's n-th power."""
        red = shift_reduction(system, n, generator_indices)
        n_params = red.n_params
        dim = len(system.indicator_coords)
        zero = tuple(0 for _ in range(n_params))
        roles = [tuple(zero for _ in range(dim))]
        for row in red.assignments:
            role = []
            for entry in row:
                vec = [0] * n_params
                if entry is not None:
                    vec[entry[0]] = entry[1]
                role.append(tuple(vec))
            roles.append(tuple(role))
        return cls(
            dim=dim,
            n_params=n_params,
            kappa=tuple(roles),
            full_rank=red.full_rank,
        )


@dataclass(frozen=True)
class _TableStructure:
    detached: frozenset  # constraints (role, coord) integrated out
    loop_roles: tuple[int, ...]  # roles that still pick a box in the sum
    fixed_roles: tuple[int, ...]  # fully detached roles, factored out
    plain_rows: tuple[int, ...]  # coordinates with no parameter left
    group_rows: tuple[tuple[int, ...], ...]  # rows of each parameter group


def _analyze(table: ShiftConstraintTable) -> _TableStructure:
    n_roles, dim, n_params = table.n_roles, table.dim, table.n_params
    uses: dict[int, list[tuple[int, int]]] = {p: [] for p in range(n_params)}
    for r in range(n_roles):
        for j in range(dim):
            for p, k in enumerate(table.kappa[r][j]):
                if k:
                    uses[p].append((r, j))
    detached = set()
    for r in range(n_roles):
        for j in range(dim):
            ps = [p for p, k in enumerate(table.kappa[r][j]) if k]
            if ps and all(len(uses[p]) == 1 for p in ps):
                detached.add((r, j))
    row_params: list[set[int]] = [set() for _ in range(dim)]
    for r in range(n_roles):
        for j in range(dim):
            if (r, j) in detached:
                continue
            row_params[j].update(p for p, k in enumerate(table.kappa[r][j]) if k)
    for j, ps in enumerate(row_params):
        if len(ps) > 1:
            raise StructureError(
                f"coordinate {j} mixes shift parameters {sorted(ps)}; "
                "not a supported pattern"
            )
    groups: dict[int, list[int]] = {}
    plain = []
    for j, ps in enumerate(row_params):
        if ps:
            groups.setdefault(next(iter(ps)), []).append(j)
        else:
            plain.append(j)
    loop_roles = tuple(
        r for r in range(n_roles)
        if any((r, j) not in detached for j in range(dim))
    )
    fixed_roles = tuple(r for r in range(n_roles) if r not in loop_roles)
    return _TableStructure(
        detached=frozenset(detached),
        loop_roles=loop_roles,
        fixed_roles=fixed_roles,
        plain_rows=tuple(plain),
        group_rows=tuple(tuple(js) for _, js in sorted(groups.items())),
    )


def _row_key(constraints: Sequence[tuple[int, Interval]]):
    """Canonical key of a constraint row up to rotation of the circle."""
    best = None
    for _, base_iv in constraints:
        base = base_iv.lo
        key = tuple(
            sorted((k, (iv.lo - base) % 1, iv.length) for k, iv in constraints)
        )
        if best is None or key < best:
            best = key
    return best


def exact_intersection_measure(
    region: BoxUnion, table: ShiftConstraintTable
) -> Fraction:
    """Exact measure of the multi-role intersection pattern over ``region``."""
    if region.dim != table.dim:
        raise DimensionError(
            f"region dim {region.dim} does not match table dim {table.dim}"
        )
    boxes = region.boxes
    if not boxes:
        return Fraction(0)
    if table.n_params == 0:
        # every role pins the same point; disjoint boxes leave the diagonal
        return region.measure
    if not table.full_rank:
        raise StructureError(
            "shift parameters are not jointly Haar (rank-deficient reduction)"
        )
    st = _analyze(table)
    kappa = table.kappa

    fixed_factor = Fraction(1)
    for r in st.fixed_roles:
        fixed_factor *= sum(
            (math.prod((iv.length for iv in box), start=Fraction(1)) for box in boxes),
            Fraction(0),
        )
    if not st.loop_roles:
        return fixed_factor

    # coordinates where two loop roles share identical multiplier vectors
    # (and neither constraint is detached) force their intervals to overlap
    pair_coords: dict[tuple[int, int], tuple[int, ...]] = {}
    for ai, r1 in enumerate(st.loop_roles):
        for bi in range(ai):
            r0 = st.loop_roles[bi]
            shared = tuple(
                j for j in range(table.dim)
                if kappa[r0][j] == kappa[r1][j]
                and (r0, j) not in st.detached
                and (r1, j) not in st.detached
            )
            if shared:
                pair_coords[(bi, ai)] = shared

    profile_cache: dict = {}
    integral_cache: dict = {}

    def row_profile(constraints) -> PiecewisePolynomial:
        key = _row_key(constraints)
        prof = profile_cache.get(key)
        if prof is None:
            prof = overlap_profile(constraints)
            profile_cache[key] = prof
        return prof

    def tuple_value(choice: list) -> Fraction:
        value = Fraction(1)
        for pos, r in enumerate(st.loop_roles):
            box = choice[pos]
            for j in range(table.dim):
                if (r, j) in st.detached:
                    value *= box[j].length
        if value == 0:
            return value
        for j in st.plain_rows:
            lo, hi = Fraction(0), Fraction(1)
            for pos, r in enumerate(st.loop_roles):
                if (r, j) in st.detached:
                    continue
                iv = choice[pos][j]
                lo, hi = max(lo, iv.lo), min(hi, iv.hi)
            if lo >= hi:
                return Fraction(0)
            value *= hi - lo
        for rows in st.group_rows:
            keys = []
            row_constraints = []
            for j in rows:
                constraints = []
                for pos, r in enumerate(st.loop_roles):
                    if (r, j) in st.detached:
                        continue
                    vec = kappa[r][j]
                    k = next((v for v in vec if v), 0)
                    constraints.append((k, choice[pos][j]))
                row_constraints.append(constraints)
                keys.append(_row_key(constraints))
            gkey = tuple(sorted(keys))
            integral = integral_cache.get(gkey)
            if integral is None:
                profiles = [row_profile(c) for c in row_constraints]
                if any(p.is_zero() for p in profiles):
                    integral = Fraction(0)
                else:
                    integral = integrate_product(profiles)
                integral_cache[gkey] = integral
            if integral == 0:
                return Fraction(0)
            value *= integral
        return value

    total = Fraction(0)
    n_loop = len(st.loop_roles)
    choice: list = [None] * n_loop

    def rec(pos: int):
        nonlocal total
        if pos == n_loop:
            total += tuple_value(choice)
            return
        for box in boxes:
            ok = True
            for (bi, ai), shared in pair_coords.items():
                if ai != pos:
                    continue
                other = choice[bi]
                for j in shared:
                    a, b = other[j], box[j]
                    if max(a.lo, b.lo) >= min(a.hi, b.hi):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            choice[pos] = box
            rec(pos + 1)
        choice[pos] = None

    rec(0)
    return fixed_factor * total


def triple_intersection_measure_factorized(
    region: BoxUnion, table: ShiftConstraintTable
) -> Fraction:
    """Engine entry for patterns whose rows carry independent parameters.

    Requires that, after detaching single-use parameters, every remaining
    parameter appears in exactly one coordinate row.
    """
    if table.n_params == 0:
        return exact_intersection_measure(region, table)
    st = _analyze(table)
    for rows in st.group_rows:
        if len(rows) != 1:
            raise StructureError(
                "pattern is not factorized: a parameter couples "
                f"coordinates {rows}; use the shared-shift engine"
            )
    return exact_intersection_measure(region, table)


def triple_intersection_measure_shared_shift(
    region: BoxUnion, table: ShiftConstraintTable
) -> Fraction:
    """Engine entry for patterns driven by one shared shift parameter."""
    if table.n_params > 1:
        raise StructureError(
            f"shared-shift engine needs one parameter, table has {table.n_params}"
        )
    return exact_intersection_measure(region, table)


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    stderr: float
    hits: int
    samples: int


def monte_carlo_measure(
    system: RecurrenceSystem,
    region: BoxUnion,
    n: int,
    samples: int,
    seed: int,
    jobs: int = 1,
    alpha: float = DEFAULT_ALPHA,
    beta: float = DEFAULT_BETA,
) -> MonteCarloEstimate:
    """Monte Carlo estimate of the same intersection measure.

    Full torus points are iterated with the concrete irrational values, so
    the constant symbolic offsets that the exact engine drops stay in play;
    agreement with the exact value cross-checks that reduction.  Sampling is
    split into fixed-size chunks seeded by (seed, chunk index); ``jobs``
    only parallelizes chunks and never changes the result.
    """
    if samples < 1:
        raise StructureError("samples must be positive")
    if len(region.boxes) == 0:
        return MonteCarloEstimate(0.0, 0.0, 0, samples)
    role_maps = [AffineTorusMap.identity(system.dim)]
    role_maps += [power(g, n) for g in system.generators]
    mats = [np.array(m.matrix, dtype=float) for m in role_maps]
    trans = [
        np.array([s.to_float(alpha, beta) for s in m.translation]) for m in role_maps
    ]
    idx_cols = np.array(system.indicator_coords, dtype=int)
    los = np.array([[float(iv.lo) for iv in box] for box in region.boxes])
    his = np.array([[float(iv.hi) for iv in box] for box in region.boxes])

    n_chunks = (samples + MC_CHUNK - 1) // MC_CHUNK
    sizes = [
        MC_CHUNK if (i + 1) * MC_CHUNK <= samples else samples - i * MC_CHUNK
        for i in range(n_chunks)
    ]

    def run_chunk(i: int) -> int:
        rng = np.random.default_rng([seed, i])
        pts = rng.random((sizes[i], system.dim))
        ok = np.ones(sizes[i], dtype=bool)
        for a, t in zip(mats, trans):
            img = (pts @ a.T + t) % 1.0
            proj = img[:, idx_cols]
            inside = np.zeros(sizes[i], dtype=bool)
            for b in range(los.shape[0]):
                inside |= np.all((proj >= los[b]) & (proj < his[b]), axis=1)
            ok &= inside
            if not ok.any():
                return 0
        return int(ok.sum())

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            hits = sum(pool.map(run_chunk, range(n_chunks)))
    else:
        hits = sum(run_chunk(i) for i in range(n_chunks))
    estimate = hits / samples
    stderr = math.sqrt(estimate * (1.0 - estimate) / samples)
    return MonteCarloEstimate(estimate, stderr, hits, samples)


__all__ = [
    "MC_CHUNK",
    "MonteCarloEstimate",
    "ShiftConstraintTable",
    "box_union_from_set",
    "exact_intersection_measure",
    "monte_carlo_measure",
    "triple_intersection_measure_factorized",
    "triple_intersection_measure_shared_shift",
]
