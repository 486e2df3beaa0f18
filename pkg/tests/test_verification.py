import random

import pytest

from recurlab import (
    DimensionError,
    LatticePointSet,
    ShapeError,
    StructureError,
    three_point_free_to_matrix,
    verify_ap3_free,
    verify_corner_free,
    verify_matrix_properties,
    verify_three_point_free,
)
from recurlab.verification import DEFAULT_FUZZ_SEED, run_matching_oracle
from oracle_utils import brute_ap3_free, brute_corner_free, brute_three_point_free


def pset(dim, side, pts, cert="none"):
    return LatticePointSet(dim=dim, side=side, points=tuple(pts), certificate=cert)


class TestCornerOracle:
    def test_canonical_corner(self):
        w = verify_corner_free(pset(2, 4, [(0, 0), (1, 0), (0, 1)]))
        assert w is not None and w.kind == "corner"
        (x, y), (x2, _), (_, y2) = w.points
        assert x2 - x == y2 - y != 0

    def test_mismatched_offsets_ok(self):
        assert verify_corner_free(pset(2, 4, [(0, 0), (1, 0), (0, 2)])) is None

    def test_negative_offset_found(self):
        # corner with d = -1: (1, 1), (0, 1), (1, 0)
        assert verify_corner_free(pset(2, 4, [(1, 1), (0, 1), (1, 0)])) is not None

    def test_dimension_error(self):
        with pytest.raises(DimensionError):
            verify_corner_free(pset(1, 4, [(0,)]))

    def test_matches_brute_force(self):
        rng = random.Random(DEFAULT_FUZZ_SEED)
        for _ in range(300):
            side = rng.randint(1, 7)
            cells = [(x, y) for x in range(side) for y in range(side)]
            rng.shuffle(cells)
            pts = cells[: rng.randint(0, min(8, len(cells)))]
            got = verify_corner_free(pset(2, side, pts))
            assert (got is None) == brute_corner_free(pts)


class TestThreePointOracle:
    def test_z_line_degenerate(self):
        w = verify_three_point_free(pset(3, 2, [(0, 0, 0), (0, 0, 1)]))
        assert w is not None and w.kind == "three-point"

    def test_nondegenerate_pattern(self):
        w = verify_three_point_free(pset(3, 2, [(0, 0, 1), (0, 1, 0), (1, 0, 0)]))
        assert w is not None

    def test_witness_revalidates(self):
        w = verify_three_point_free(pset(3, 2, [(0, 0, 1), (0, 1, 0), (1, 0, 0)]))
        (x, y, z1), (a, b, z), (c, d, e) = w.points
        assert a == x and d == y and e == z
        assert not (x == c and y == b and z1 == z)

    def test_matches_brute_force(self):
        rng = random.Random(DEFAULT_FUZZ_SEED)
        for _ in range(200):
            side = rng.randint(1, 5)
            cells = [
                (x, y, z)
                for x in range(side)
                for y in range(side)
                for z in range(side)
            ]
            rng.shuffle(cells)
            pts = cells[: rng.randint(0, min(7, len(cells)))]
            got = verify_three_point_free(pset(3, side, pts))
            assert (got is None) == brute_three_point_free(pts)

    def test_subset_monotone(self):
        rng = random.Random(DEFAULT_FUZZ_SEED + 1)
        base = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 0, 0)]
        if verify_three_point_free(pset(3, 3, base)) is None:
            for _ in range(10):
                sub = [p for p in base if rng.random() < 0.6]
                assert verify_three_point_free(pset(3, 3, sub)) is None


class TestAp3Oracle:
    def test_progression(self):
        w = verify_ap3_free(pset(1, 4, [(1,), (2,), (3,)]))
        assert w is not None and w.kind == "ap3"
        (a,), (b,), (c,) = w.points
        assert a + c == 2 * b and a != c

    def test_known_free_set(self):
        assert verify_ap3_free(pset(1, 5, [(0,), (1,), (3,), (4,)])) is None

    def test_singleton(self):
        assert verify_ap3_free(pset(1, 6, [(5,)])) is None

    def test_matches_brute_force(self):
        rng = random.Random(DEFAULT_FUZZ_SEED)
        for _ in range(300):
            side = rng.randint(1, 12)
            vals = rng.sample(range(side), rng.randint(0, min(6, side)))
            got = verify_ap3_free(pset(1, side, [(v,) for v in vals]))
            assert (got is None) == brute_ap3_free(vals)


class TestMatrixOracle:
    def test_permutation_ok(self):
        assert verify_matrix_properties([[1, 0], [0, 1]]) is None

    def test_row_duplicate(self):
        w = verify_matrix_properties([[1, 1], [0, 0]])
        assert w is not None and w.kind == "matrix-row"

    def test_pair_condition(self):
        # value 1 at (0,0) and (1,1) forces zeros at (0,1) and (1,0)
        w = verify_matrix_properties([[1, 2], [0, 1]])
        assert w is not None and w.kind == "matrix-pair"

    def test_shape_errors(self):
        with pytest.raises(ShapeError):
            verify_matrix_properties([[1, 0, 0], [0, 1, 0]])
        with pytest.raises(ShapeError):
            verify_matrix_properties([[5, 0], [0, 0]])

    def test_equivalence_with_point_oracle(self):
        rng = random.Random(DEFAULT_FUZZ_SEED)
        checked = 0
        for _ in range(300):
            side = rng.randint(1, 6)
            lines = [(i, j) for i in range(side) for j in range(side)]
            rng.shuffle(lines)
            pts = tuple(
                (i, j, rng.randrange(side))
                for i, j in lines[: rng.randint(0, min(9, len(lines)))]
            )
            v = pset(3, side, pts)
            try:
                matrix = three_point_free_to_matrix(v)
            except StructureError:
                continue
            checked += 1
            point_ok = verify_three_point_free(v) is None
            matrix_ok = verify_matrix_properties(matrix) is None
            assert point_ok == matrix_ok
        assert checked > 100


class TestDispatch:
    def test_uncertified_uses_dimension(self):
        name, w = run_matching_oracle(pset(1, 4, [(1,), (2,), (3,)]))
        assert name == "ap3-free" and w is not None

    def test_certified_uses_label(self):
        name, w = run_matching_oracle(
            pset(2, 4, [(0, 0), (1, 0), (0, 2)], cert="corner-free")
        )
        assert name == "corner-free" and w is None

    def test_witness_serialization(self):
        _, w = run_matching_oracle(pset(1, 4, [(1,), (2,), (3,)]))
        data = w.to_json_dict()
        assert data["kind"] == "ap3"
        assert data["points"] == [[1], [2], [3]]
