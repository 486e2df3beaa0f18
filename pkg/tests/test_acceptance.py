"""Acceptance suite: one test per criterion, each printing a pass line.

Run with  pytest tests/test_acceptance.py -v -s  to see the per-criterion
lines; each test also enforces its runtime budget.
"""

import json
import random
import time
from fractions import Fraction

import mpmath
import pytest

from recurlab import (
    DigitProfile,
    LatticePointSet,
    StructureError,
    behrend_ap3_construct,
    box_union_from_set,
    commuting_pair_system,
    commuting_triple_system,
    check_commute,
    corner_free_cardinality,
    corner_free_enumerate,
    exponent_threshold,
    monte_carlo_measure,
    nilpotency_class,
    nilpotent_pair_system,
    power,
    run_theorem_pipeline,
    three_point_free_from_corner_free,
    three_point_free_to_matrix,
    triple_intersection_measure_factorized,
    triple_intersection_measure_shared_shift,
    verify_corner_free,
    verify_matrix_properties,
    verify_three_point_free,
    commutator,
)
from recurlab.measures import ShiftConstraintTable
from recurlab.symbolic import SymScalar
from oracle_utils import (
    TABLE_AP3,
    TABLE_NILPOTENT,
    TABLE_PAIR_6D,
    naive_factorized_measure,
    naive_shared_measure,
)

F = Fraction


class Budget:
    def __init__(self, seconds):
        self.limit = seconds
        self.start = time.perf_counter()

    def done(self, label):
        elapsed = time.perf_counter() - self.start
        assert elapsed < self.limit, f"{label}: {elapsed:.1f}s over {self.limit}s"
        return elapsed


def announce(number, text, elapsed):
    print(f"ACCEPTANCE {number:>2} PASS ({elapsed:.2f}s): {text}")


def test_criterion_01_construction_correctness():
    budget = Budget(5)
    lam1 = corner_free_enumerate(DigitProfile(2, 1))
    assert len(lam1) == 24 == corner_free_cardinality(DigitProfile(2, 1))
    assert lam1.side == 81
    assert verify_corner_free(lam1) is None
    lam2 = corner_free_enumerate(DigitProfile(2, 2))
    assert len(lam2) == 2520 == corner_free_cardinality(DigitProfile(2, 2))
    assert verify_corner_free(lam2) is None
    elapsed = budget.done("construction")
    announce(1, "corner-free sets of sizes 24 and 2520 certified", elapsed)


def test_criterion_02_slicing():
    budget = Budget(5)
    lam = corner_free_enumerate(DigitProfile(2, 1))
    sliced, selection = three_point_free_from_corner_free(lam)
    assert len(sliced) >= 9  # pigeonhole: ceil(24 * 81 / 241)
    assert -(-24 * 81 // 241) == 9
    assert verify_three_point_free(sliced) is None
    elapsed = budget.done("slicing")
    announce(2, f"best slice s={selection.s} has {len(sliced)} >= 9 points", elapsed)


def test_criterion_03_matrix_equivalence():
    budget = Budget(10)
    rng = random.Random(1729)
    checked = 0
    side = 6
    cube = [
        (i, j, k) for i in range(side) for j in range(side) for k in range(side)
    ]
    for _ in range(500):
        pts = tuple(rng.sample(cube, rng.randint(0, 12)))
        v = LatticePointSet(dim=3, side=side, points=pts)
        try:
            matrix = three_point_free_to_matrix(v)
        except StructureError:
            continue
        checked += 1
        assert (verify_three_point_free(v) is None) == (
            verify_matrix_properties(matrix) is None
        )
    assert checked >= 250  # most instances satisfy the line precondition
    elapsed = budget.done("matrix equivalence")
    announce(3, f"oracle equivalence on {checked} random sets in [6]^3", elapsed)


def test_criterion_04_nilpotent_measure():
    budget = Budget(60)
    lam = corner_free_enumerate(DigitProfile(2, 1))
    box = box_union_from_set(lam, 81)
    system = nilpotent_pair_system()
    values = set()
    for n in range(1, 6):
        table = ShiftConstraintTable.from_system(system, n)
        values.add(triple_intersection_measure_shared_shift(box, table))
    assert values == {F(2, 81**3)}
    assert F(2, 81**3) <= F(1, 81) * F(24, 4 * 81**2)  # exact rational bound
    mc = monte_carlo_measure(system, box, 1, 1_000_000, seed=1729)
    assert abs(mc.estimate - float(F(2, 81**3))) <= 4 * mc.stderr
    elapsed = budget.done("nilpotent measure")
    announce(4, "exact 2/81^3 for n in 1..5, Monte Carlo within 4 sigma", elapsed)


def test_criterion_05_pair_measure():
    budget = Budget(60)
    lam = corner_free_enumerate(DigitProfile(2, 1))
    sliced, _ = three_point_free_from_corner_free(lam)
    box = box_union_from_set(sliced, 81)
    system = commuting_pair_system()
    size = len(sliced)
    for n in range(1, 6):
        table = ShiftConstraintTable.from_system(system, n)
        value = triple_intersection_measure_factorized(box, table)
        assert value == F(size, 64 * 81**6)
        assert value <= F(size, 8 * 81**6)
    report = run_theorem_pipeline("t11", d=2, m=1, n_values=[1, 2, 3, 4, 5])
    assert report.overall_pass
    star = exponent_threshold("commuting2", 81, 24)
    assert abs(star.ell_star - (1 + mpmath.mpf(12) / 11)) < 1e-12
    elapsed = budget.done("pair measure")
    announce(
        5,
        f"exact {size}/(64*81^6) below mu(A)^ell up to ell*=1+12/11",
        elapsed,
    )


def test_criterion_06_triple_pipeline():
    budget = Budget(30)
    report = run_theorem_pipeline("t12", n_side=20, n_values=[1, 2, 3, 5])
    size = report.set_size
    length = F(1, 40)
    strip = behrend_ap3_construct(10)
    assert len(strip) == size and strip.certificate == "ap3-free"
    pattern_values = {row.pattern_2d for row in report.rows}
    assert pattern_values == {size * length**2 / 2}
    exact_values = {row.exact for row in report.rows}
    assert len(exact_values) == 1  # n-invariance
    assert report.overall_pass
    elapsed = budget.done("triple pipeline")
    announce(
        6,
        f"strip pattern measure {size}*(1/40)^2/2, all scanned ell pass",
        elapsed,
    )


def test_criterion_07_symbolic_algebra():
    budget = Budget(5)
    t13 = nilpotent_pair_system()
    comm = commutator(*t13.generators)
    assert comm.matrix == tuple(
        tuple(1 if i == j else 0 for j in range(3)) for i in range(3)
    )
    assert comm.translation == (
        SymScalar(),
        SymScalar.alpha(1),
        SymScalar.alpha(-1).normalized(),
    )
    assert check_commute(comm, t13.generators[0]).commutes
    assert check_commute(comm, t13.generators[1]).commutes
    assert nilpotency_class(list(t13.generators)) == 2
    for system in (commuting_pair_system(), commuting_triple_system()):
        gens = system.generators
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                report = check_commute(gens[i], gens[j])
                assert report.commutes and report.criterion_holds
    import math

    t1 = t13.generators[0]
    for n in range(1, 7):
        p = power(t1, n)
        assert p.matrix[1] == (n, 1, 0)
        assert p.translation[1] == SymScalar.alpha(math.comb(n, 2)).normalized()
    elapsed = budget.done("symbolic algebra")
    announce(7, "commutator, centrality, class 2, power formula all exact", elapsed)


def test_criterion_08_oracle_equivalence():
    budget = Budget(60)
    rng = random.Random(1729)
    instances = 0
    for kind in range(100):
        if kind % 3 == 0:
            side = rng.randint(1, 4)
            dim, table, engine, oracle = (
                3, TABLE_PAIR_6D,
                triple_intersection_measure_factorized,
                naive_factorized_measure,
            )
        elif kind % 3 == 1:
            side = rng.randint(1, 4)
            dim, table, engine, oracle = (
                2, TABLE_NILPOTENT,
                triple_intersection_measure_shared_shift,
                naive_shared_measure,
            )
        else:
            side = rng.randint(2, 8)
            dim, table, engine, oracle = (
                1, TABLE_AP3,
                triple_intersection_measure_shared_shift,
                naive_shared_measure,
            )
        cells = []
        if dim == 1:
            cells = [(x,) for x in range(side)]
        elif dim == 2:
            cells = [(x, y) for x in range(side) for y in range(side)]
        else:
            cells = [
                (x, y, z)
                for x in range(side)
                for y in range(side)
                for z in range(side)
            ]
        rng.shuffle(cells)
        pts = tuple(cells[: rng.randint(0, min(5, len(cells)))])
        box = box_union_from_set(
            LatticePointSet(dim=dim, side=side, points=pts), side
        )
        assert engine(box, table) == oracle(box, table)
        instances += 1
    assert instances == 100
    elapsed = budget.done("oracle equivalence")
    announce(8, "engines match the interval-arithmetic oracle on 100 instances", elapsed)


def test_criterion_09_threshold_monotonicity():
    budget = Budget(5)
    stars = []
    for d in (2, 3, 4):
        profile = DigitProfile(d, 1)
        stars.append(
            exponent_threshold(
                "commuting2", profile.side, corner_free_cardinality(profile), 50
            ).ell_star
        )
    assert stars[0] < stars[1] < stars[2]
    assert all(1 < float(s) < 4 for s in stars)
    elapsed = budget.done("threshold monotonicity")
    announce(
        9,
        "ell* strictly increasing over profiles d=2,3,4: "
        + ", ".join(mpmath.nstr(s, 8) for s in stars),
        elapsed,
    )


def test_criterion_10_reproducibility():
    budget = Budget(30)
    docs = []
    for jobs in (1, 4):
        report = run_theorem_pipeline(
            "t13", d=2, m=1, n_values=[1, 2], mc_samples=80_000, seed=99, jobs=jobs
        )
        doc = json.loads(report.to_json_str(include_timestamp=False))
        doc["config"].pop("jobs")
        docs.append(json.dumps(doc, sort_keys=True))
    assert docs[0] == docs[1]
    repeat = run_theorem_pipeline(
        "t13", d=2, m=1, n_values=[1, 2], mc_samples=80_000, seed=99, jobs=1
    )
    doc = json.loads(repeat.to_json_str(include_timestamp=False))
    doc["config"].pop("jobs")
    assert json.dumps(doc, sort_keys=True) == docs[0]
    elapsed = budget.done("reproducibility")
    announce(10, "byte-identical reports across repeats and worker counts", elapsed)
