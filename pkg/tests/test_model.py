import datetime

import numpy as np
import pytest

import residency as ry
from residency import (
    UNKNOWN,
    Alphabet,
    CostModel,
    LocationHistory,
    Mode,
    ResidenceSegment,
    TimeWarpedHistory,
    score,
    unwarp,
    validate,
    warp,
)
from residency.errors import HistoryLengthMismatch, InvalidWarpedHistory

from conftest import hist, segs

A, B = 0, 1


class TestAlphabet:
    def test_bijection(self):
        alpha = Alphabet(("x", "y", "z"))
        assert len(alpha) == 3
        assert alpha.id_of("y") == 1
        assert alpha.label_of(2) == "z"
        assert "x" in alpha and "w" not in alpha

    def test_duplicate_label_rejected(self):
        with pytest.raises(ValueError):
            Alphabet(("x", "x"))

    def test_unknown_label(self):
        assert Alphabet(("x",)).label_of(UNKNOWN) == "?"


class TestLocationHistory:
    def test_id_range_enforced(self):
        with pytest.raises(ValueError):
            LocationHistory([0, 2], 2)
        with pytest.raises(ValueError):
            LocationHistory([-2], 2)

    def test_unknown_allowed(self):
        h = LocationHistory([0, UNKNOWN, 1], 2)
        assert h.units() == (0, UNKNOWN, 1)

    def test_immutable(self):
        h = hist([A, B])
        with pytest.raises(AttributeError):
            h.n_locations = 5
        with pytest.raises(ValueError):
            h.values[0] = 1

    def test_from_labels(self):
        h, alpha = LocationHistory.from_labels(["b", None, "a", "b"])
        assert alpha.labels == ("a", "b")
        assert h.units() == (1, UNKNOWN, 0, 1)


class TestWarp:
    def test_simple(self):
        assert warp(hist([A, A, B])).runs == ((A, 2), (B, 1))

    def test_empty(self):
        assert warp(hist([], n_locations=1)).runs == ()

    def test_worked_example(self):
        h = hist([A] * 16 + [B] * 14 + [A] * 16 + [B] * 44)
        w = warp(h)
        assert w.runs == ((A, 16), (B, 14), (A, 16), (B, 44))
        assert w.total_units == 90
        assert w.moves == 3

    def test_unwarp_inverse(self):
        w = TimeWarpedHistory.from_runs([(A, 2), (B, 1)])
        assert unwarp(w).units() == (A, A, B)
        assert unwarp(TimeWarpedHistory.from_runs([])).units() == ()

    def test_round_trip(self):
        for units in ([A], [A, B, B, A], [UNKNOWN, UNKNOWN, A], [B] * 7):
            h = hist(units, n_locations=2)
            assert unwarp(warp(h)) == h
        w = TimeWarpedHistory.from_runs([(A, 16), (B, 14), (A, 16), (B, 44)])
        assert warp(unwarp(w)) == w

    def test_invalid_runs_rejected(self):
        with pytest.raises(InvalidWarpedHistory):
            TimeWarpedHistory([A, A], [2, 1], 3)  # adjacent equal
        with pytest.raises(InvalidWarpedHistory):
            TimeWarpedHistory([A], [0], 0)  # zero count
        with pytest.raises(InvalidWarpedHistory):
            TimeWarpedHistory([A], [2], 3)  # wrong total


class TestResidenceHistory:
    def test_tiling_enforced(self):
        with pytest.raises(ValueError):
            ry.ResidenceHistory((ResidenceSegment(2, 3, A),))  # gap at start
        with pytest.raises(ValueError):
            ry.ResidenceHistory((ResidenceSegment(1, 2, A),
                                 ResidenceSegment(4, 1, B)))  # hole
        with pytest.raises(ValueError):
            ry.ResidenceHistory((ResidenceSegment(1, 2, A),
                                 ResidenceSegment(3, 1, A)))  # same location

    def test_dense_round_trip(self):
        r = segs((A, 2), (B, 3), (A, 1))
        assert r.total_units == 6
        assert list(r.to_dense()) == [A, A, B, B, B, A]
        assert ry.ResidenceHistory.from_dense(r.to_dense()) == r
        assert r.move_units == (3, 6)

    def test_hashable(self):
        assert segs((A, 2)) in {segs((A, 2)), segs((B, 2))}


class TestScore:
    def test_identity_zero(self):
        h = hist([A, B, A, B])
        assert score(h, segs((A, 1), (B, 1), (A, 1), (B, 1))) == 0.0

    def test_worked_example(self):
        h = hist([A] * 16 + [B] * 14 + [A] * 16 + [B] * 44)
        assert score(h, segs((A, 46), (B, 44))) == 14.0
        assert score(h, segs((A, 90))) == 58.0

    def test_unknown_costs_nothing(self):
        h = hist([UNKNOWN, UNKNOWN, B], n_locations=2)
        assert score(h, segs((A, 3))) == 1.0
        assert score(h, segs((B, 3))) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(HistoryLengthMismatch):
            score(hist([A, B]), segs((A, 3)))

    def test_empty(self):
        assert score(hist([], n_locations=1), segs()) == 0.0

    def test_matches_dense_computation(self, rng):
        # run-weighted evaluation equals the unit-by-unit sum
        for _ in range(50):
            n = int(rng.integers(1, 40))
            h_vals = rng.integers(-1, 3, size=n)
            h = ry.LocationHistory(h_vals, 3)
            r = ry.ResidenceHistory.from_dense(rng.integers(0, 3, size=n))
            expected = sum(1.0 for hv, rv in zip(h_vals, r.to_dense())
                           if hv != rv and hv != UNKNOWN)
            assert score(h, r) == expected

    def test_custom_cost_and_penalty(self):
        cost = CostModel(
            day_cost=lambda res, obs: 0.0 if obs in (res, UNKNOWN) else 2.5,
            segment_penalty=lambda d: 0.5)
        h = hist([A, B, A])
        assert score(h, segs((A, 3)), cost) == 2.5 + 0.5
        assert score(h, segs((A, 1), (B, 1), (A, 1)), cost) == 1.5


class TestValidate:
    def test_single_segment_always_feasible(self):
        assert validate(segs((A, 3)), 5, Mode.FULL) == []
        assert validate(segs((A, 3)), 5, Mode.TRAILING_RELAXED) == []

    def test_trailing_segment_rule(self):
        r = segs((A, 6), (B, 5))
        full = validate(r, 6, Mode.FULL)
        assert [v.segment_index for v in full] == [2]
        assert validate(r, 6, Mode.TRAILING_RELAXED) == []

    def test_interior_segment_rule(self):
        r = segs((A, 4), (B, 6))
        for mode in Mode:
            bad = validate(r, 6, mode)
            assert [v.segment_index for v in bad] == [1]

    def test_mode_monotone(self, rng):
        # anything feasible under FULL is feasible under TRAILING_RELAXED
        for _ in range(100):
            pieces = []
            loc = -1
            for _ in range(int(rng.integers(1, 5))):
                nxt = int(rng.integers(0, 3))
                if nxt == loc:
                    nxt = (nxt + 1) % 3
                pieces.append((nxt, int(rng.integers(1, 6))))
                loc = nxt
            r = segs(*pieces)
            rho = int(rng.integers(1, 6))
            if validate(r, rho, Mode.FULL) == []:
                assert validate(r, rho, Mode.TRAILING_RELAXED) == []

    def test_relabeling_leaves_score_unchanged(self, rng):
        perm = np.array([2, 0, 1])
        for _ in range(30):
            n = int(rng.integers(1, 30))
            h_vals = rng.integers(-1, 3, size=n)
            r_vals = rng.integers(0, 3, size=n)
            h = ry.LocationHistory(h_vals, 3)
            r = ry.ResidenceHistory.from_dense(r_vals)
            hp = ry.LocationHistory(
                np.where(h_vals == UNKNOWN, UNKNOWN, perm[h_vals]), 3)
            rp = ry.ResidenceHistory.from_dense(perm[r_vals])
            assert score(h, r) == score(hp, rp)


def test_epoch_and_unit_duration_defaults():
    h = hist([A], epoch=datetime.date(2021, 5, 1), unit_duration=7)
    assert h.epoch == datetime.date(2021, 5, 1)
    assert h.unit_duration == 7
    assert hist([A]).epoch == ry.DEFAULT_EPOCH
