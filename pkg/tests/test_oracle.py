import numpy as np
import pytest

import residency as ry
from residency import Mode, SolverConfig, UNKNOWN, validate
from residency.errors import InstanceTooLarge
from residency.oracle import enumerate_feasible, solve_bruteforce

from conftest import hist, segs

A, B = 0, 1


class TestEnumeration:
    def test_no_constraint_at_rho_one(self):
        seqs = [tuple(r.to_dense()) for r in enumerate_feasible(2, 2, 1)]
        assert seqs == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_filtering(self):
        seqs = [tuple(r.to_dense()) for r in enumerate_feasible(2, 2, 2, Mode.FULL)]
        assert seqs == [(0, 0), (1, 1)]

    def test_single_location(self):
        assert [tuple(r.to_dense()) for r in enumerate_feasible(3, 1, 7)] == [(0, 0, 0)]

    def test_count_is_alphabet_power_n(self):
        for n in range(1, 7):
            assert sum(1 for _ in enumerate_feasible(n, 2, 1)) == 2 ** n
        assert sum(1 for _ in enumerate_feasible(4, 3, 1)) == 81

    def test_yields_pass_validate_without_duplicates(self):
        for rho in (1, 2, 3):
            for mode in Mode:
                out = list(enumerate_feasible(5, 2, rho, mode))
                assert len(set(out)) == len(out)
                for r in out:
                    assert validate(r, rho, mode) == []

    def test_trailing_relaxed_superset(self):
        full = set(enumerate_feasible(5, 2, 3, Mode.FULL))
        relaxed = set(enumerate_feasible(5, 2, 3, Mode.TRAILING_RELAXED))
        assert full < relaxed

    def test_budget_guards(self):
        with pytest.raises(InstanceTooLarge):
            list(enumerate_feasible(15, 2, 1))
        with pytest.raises(InstanceTooLarge):
            list(enumerate_feasible(14, 3, 1))


class TestBruteforce:
    def test_two_day_example(self):
        out = solve_bruteforce(hist([A, B]), SolverConfig(rho=2))
        assert out.min_score == 1.0
        assert out.histories == {segs((A, 2)), segs((B, 2))}

    def test_forced_boundary_unique(self):
        out = solve_bruteforce(hist([A] * 7 + [B] * 5), SolverConfig(rho=6))
        assert out.min_score == 1.0
        assert out.histories == {segs((A, 6), (B, 6))}

    def test_constant(self):
        out = solve_bruteforce(hist([A] * 5), SolverConfig(rho=3))
        assert out.min_score == 0.0
        assert segs((A, 5)) in out

    def test_budget(self):
        with pytest.raises(InstanceTooLarge):
            solve_bruteforce(hist([A] * 15), SolverConfig(rho=1))

    def test_relabeling_equivariance(self, rng):
        perm = np.array([1, 2, 0])
        for _ in range(20):
            n = int(rng.integers(1, 7))
            vals = rng.integers(-1, 3, size=n)
            cfg = SolverConfig(rho=int(rng.integers(1, 4)))
            base = solve_bruteforce(ry.LocationHistory(vals, 3), cfg)
            mapped = solve_bruteforce(ry.LocationHistory(
                np.where(vals == UNKNOWN, UNKNOWN, perm[vals]), 3), cfg)
            assert base.min_score == mapped.min_score
            expected = {
                ry.ResidenceHistory.from_dense(perm[r.to_dense()])
                for r in base.histories}
            assert mapped.histories == expected

    def test_custom_cost(self):
        cost = ry.CostModel(day_cost=lambda res, obs:
                            0.0 if obs in (res, UNKNOWN) else 0.25)
        out = solve_bruteforce(hist([A, B, A, B]), SolverConfig(rho=4), cost)
        assert out.min_score == 0.5
        d = ry.solve_daylevel(hist([A, B, A, B]), SolverConfig(rho=4), cost)
        assert d.score == out.min_score and d.residence in out
