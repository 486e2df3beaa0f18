import math
import random

import pytest

from recurlab import (
    CertificationError,
    DigitProfile,
    LatticePointSet,
    RangeError,
    SizeCapError,
    StructureError,
    behrend_ap3_construct,
    choose_parameters,
    corner_free_cardinality,
    corner_free_contains,
    corner_free_enumerate,
    matrix_to_three_point_free,
    omega,
    three_point_free_from_corner_free,
    three_point_free_to_matrix,
    verify_ap3_free,
    verify_corner_free,
    verify_three_point_free,
)
from oracle_utils import brute_ap3_free, brute_corner_free, brute_max_ap3_size


class TestChooseParameters:
    def test_exact_fit(self):
        p = choose_parameters(81)
        assert (p.d, p.m, p.oversized) == (2, 1, False)
        assert p.side == 81

    def test_too_small_is_flagged(self):
        p = choose_parameters(80)
        assert (p.d, p.m, p.oversized) == (2, 1, True)

    def test_next_block(self):
        p = choose_parameters(1953125)
        assert (p.d, p.m) == (3, 1)
        assert p.side == 5**9

    def test_between_blocks(self):
        p = choose_parameters(10**6)
        assert (p.d, p.m, p.oversized) == (2, 1, False)

    def test_rejects_tiny_ambient(self):
        with pytest.raises(RangeError):
            choose_parameters(2)

    def test_omega_floor(self):
        assert omega(2) == 1
        assert omega(10) == 1
        assert omega(11) == 2


class TestCardinality:
    def test_smallest_profile(self):
        assert corner_free_cardinality(DigitProfile(2, 1)) == 24

    def test_multiplicity_two(self):
        assert corner_free_cardinality(DigitProfile(2, 2)) == 2520

    def test_formula(self):
        p = DigitProfile(3, 1)
        assert corner_free_cardinality(p) == math.factorial(9)

    def test_type_rejects_d1(self):
        with pytest.raises(Exception):
            DigitProfile(1, 1)


class TestContains:
    def test_hand_checked_member(self):
        # digits of 36 are (0,0,1,1), digits of 30 are (0,1,0,1): every pair once
        assert corner_free_contains(DigitProfile(2, 1), 36, 30)

    def test_origin_rejected(self):
        assert not corner_free_contains(DigitProfile(2, 1), 0, 0)

    def test_large_digit_rejected(self):
        # 2 has a base-3 digit equal to 2
        assert not corner_free_contains(DigitProfile(2, 1), 2, 30)

    def test_out_of_range(self):
        with pytest.raises(RangeError):
            corner_free_contains(DigitProfile(2, 1), 81, 0)


class TestEnumerate:
    def test_smallest_profile(self):
        lam = corner_free_enumerate(DigitProfile(2, 1))
        assert len(lam) == 24
        assert lam.side == 81
        assert lam.certificate == "corner-free"
        assert lam.points == tuple(sorted(lam.points))

    def test_cap(self):
        with pytest.raises(SizeCapError) as err:
            corner_free_enumerate(DigitProfile(2, 1), cap=10)
        assert err.value.cap == 10
        assert err.value.required == 24

    def test_membership_consistency_exhaustive(self):
        p = DigitProfile(2, 1)
        members = set(corner_free_enumerate(p).points)
        accepted = {
            (x, y)
            for x in range(81)
            for y in range(81)
            if corner_free_contains(p, x, y)
        }
        assert accepted == members

    def test_multiplicity_two(self):
        p = DigitProfile(2, 2)
        lam = corner_free_enumerate(p)
        assert len(lam) == 2520
        assert lam.side == 3**8
        # all members accepted; random non-members rejected
        assert all(corner_free_contains(p, x, y) for x, y in lam.points[:200])
        rng = random.Random(1729)
        members = set(lam.points)
        for _ in range(500):
            q = (rng.randrange(3**8), rng.randrange(3**8))
            assert corner_free_contains(p, *q) == (q in members)

    def test_against_brute_force(self):
        lam = corner_free_enumerate(DigitProfile(2, 1))
        assert brute_corner_free(lam.points)


class TestSlice:
    def test_smallest_profile(self):
        lam = corner_free_enumerate(DigitProfile(2, 1))
        sliced, sel = three_point_free_from_corner_free(lam)
        assert sel.total == 24 * 81
        assert sum(sel.slice_sizes.values()) == sel.total
        # all coordinates sit below half the side, so one hyperplane
        # catches the whole set; the smallest such sum wins the tie-break
        assert sel.s == 66
        assert len(sliced) == 24
        assert sliced.certificate == "three-point-free"
        assert len(sliced) >= -(-sel.total // sel.slots)

    def test_counts_match_materialization(self):
        lam = corner_free_enumerate(DigitProfile(2, 1))
        _, sel = three_point_free_from_corner_free(lam)
        n = lam.side
        for s in range(0, sel.slots, 17):
            direct = sum(
                1 for x, y in lam.points if 0 <= s - x - y < n
            )
            assert sel.size_of(s) == direct

    def test_needs_certificate(self):
        bare = LatticePointSet(dim=2, side=3, points=((0, 0),))
        with pytest.raises(CertificationError):
            three_point_free_from_corner_free(bare)

    def test_single_point(self):
        lam = LatticePointSet(
            dim=2, side=1, points=((0, 0),), certificate="corner-free"
        )
        sliced, sel = three_point_free_from_corner_free(lam)
        assert sliced.points == ((0, 0, 0),)
        assert sel.s == 0

    def test_empty_set(self):
        lam = LatticePointSet(dim=2, side=4, points=(), certificate="corner-free")
        sliced, sel = three_point_free_from_corner_free(lam)
        assert len(sliced) == 0
        assert sel.s == 0
        assert sel.slice_sizes == {}

    def test_side_mismatch(self):
        lam = corner_free_enumerate(DigitProfile(2, 1))
        with pytest.raises(RangeError):
            three_point_free_from_corner_free(lam, side=100)


class TestBehrend:
    def test_singleton(self):
        s = behrend_ap3_construct(1)
        assert s.points == ((0,),)
        assert s.certificate == "ap3-free"

    def test_ten(self):
        s = behrend_ap3_construct(10)
        assert len(s) >= 4
        assert verify_ap3_free(s) is None
        assert brute_max_ap3_size(10) == 5

    def test_hundred(self):
        s = behrend_ap3_construct(100)
        assert len(s) >= 10
        assert verify_ap3_free(s) is None

    def test_various_sizes_certified(self):
        for n in (2, 3, 7, 16, 33, 64, 200):
            s = behrend_ap3_construct(n)
            assert s.side == n
            assert brute_ap3_free([p[0] for p in s.points])


class TestMatrixEncoding:
    def test_single_point(self):
        v = LatticePointSet(dim=3, side=1, points=((0, 0, 0),))
        m = three_point_free_to_matrix(v)
        assert m.tolist() == [[1]]

    def test_empty(self):
        v = LatticePointSet(dim=3, side=2, points=())
        assert three_point_free_to_matrix(v).tolist() == [[0, 0], [0, 0]]

    def test_round_trip_slice(self):
        lam = corner_free_enumerate(DigitProfile(2, 1))
        sliced, _ = three_point_free_from_corner_free(lam)
        back = matrix_to_three_point_free(three_point_free_to_matrix(sliced))
        assert back.points == sliced.points

    def test_shared_line_rejected(self):
        v = LatticePointSet(dim=3, side=2, points=((0, 0, 0), (0, 0, 1)))
        with pytest.raises(StructureError):
            three_point_free_to_matrix(v)

    def test_round_trip_random(self):
        rng = random.Random(1729)
        for _ in range(50):
            n = rng.randint(1, 6)
            lines = [(i, j) for i in range(n) for j in range(n)]
            rng.shuffle(lines)
            pts = tuple(
                (i, j, rng.randrange(n)) for i, j in lines[: rng.randint(0, n * n)]
            )
            v = LatticePointSet(dim=3, side=n, points=pts)
            back = matrix_to_three_point_free(three_point_free_to_matrix(v))
            assert back.points == v.points


class TestPointSetIO:
    def test_json_round_trip(self, tmp_path):
        lam = corner_free_enumerate(DigitProfile(2, 1))
        path = tmp_path / "set.json"
        lam.save(path)
        loaded = LatticePointSet.load(path)
        assert loaded == lam

    def test_validation(self):
        with pytest.raises(RangeError):
            LatticePointSet(dim=2, side=3, points=((0, 3),))
        with pytest.raises(RangeError):
            LatticePointSet(dim=1, side=3, points=((0,), (0,)))

    def test_slice_oracle_confirms(self):
        lam = corner_free_enumerate(DigitProfile(2, 1))
        sliced, _ = three_point_free_from_corner_free(lam)
        assert verify_three_point_free(sliced) is None
        assert verify_corner_free(lam) is None
