"""Property-based invariants across the model and the solvers."""

import numpy as np
from hypothesis import given, settings, strategies as st

import residency as ry
from residency import Mode, SolverConfig, UNKNOWN
from residency.oracle import solve_bruteforce

UNITS = st.lists(st.integers(min_value=-1, max_value=2), min_size=1, max_size=12)
TINY_UNITS = st.lists(st.integers(min_value=-1, max_value=2), min_size=1, max_size=8)
RHO = st.integers(min_value=1, max_value=5)
MODES = st.sampled_from([Mode.FULL, Mode.TRAILING_RELAXED])


def hist(units):
    return ry.LocationHistory(units, 3)


@settings(max_examples=200, deadline=None)
@given(UNITS)
def test_warp_round_trip(units):
    h = hist(units)
    assert ry.unwarp(ry.warp(h)) == h


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(1, 5)),
                min_size=0, max_size=8))
def test_unwarp_round_trip(pairs):
    merged = []
    for value, count in pairs:  # collapse adjacent equal values first
        if merged and merged[-1][0] == value:
            merged[-1][1] += count
        else:
            merged.append([value, count])
    w = ry.TimeWarpedHistory.from_runs([(v, c) for v, c in merged])
    assert ry.warp(ry.unwarp(w)) == w


@settings(max_examples=200, deadline=None)
@given(UNITS, st.data())
def test_score_matches_dense_sum(units, data):
    h = hist(units)
    residence = ry.ResidenceHistory.from_dense(
        data.draw(st.lists(st.integers(0, 2), min_size=len(units),
                           max_size=len(units))))
    expected = sum(1.0 for hv, rv in zip(units, residence.to_dense())
                   if hv != rv and hv != UNKNOWN)
    assert ry.score(h, residence) == expected


@settings(max_examples=100, deadline=None)
@given(UNITS, st.permutations([0, 1, 2]), st.data())
def test_relabeling_equivariance(units, perm, data):
    perm = np.asarray(perm)
    residence_vals = np.asarray(
        data.draw(st.lists(st.integers(0, 2), min_size=len(units),
                           max_size=len(units))))
    arr = np.asarray(units)
    h1 = hist(units)
    h2 = ry.LocationHistory(np.where(arr == UNKNOWN, UNKNOWN, perm[arr]), 3)
    r1 = ry.ResidenceHistory.from_dense(residence_vals)
    r2 = ry.ResidenceHistory.from_dense(perm[residence_vals])
    assert ry.score(h1, r1) == ry.score(h2, r2)


@settings(max_examples=100, deadline=None)
@given(TINY_UNITS, st.integers(1, 4), MODES)
def test_daylevel_matches_oracle(units, rho, mode):
    h = hist(units)
    cfg = SolverConfig(rho=rho, mode=mode)
    optima = solve_bruteforce(h, cfg)
    sol = ry.solve_daylevel(h, cfg)
    assert sol.score == optima.min_score
    assert sol.residence in optima


@settings(max_examples=150, deadline=None)
@given(UNITS, RHO, MODES)
def test_candidate_matches_daylevel(units, rho, mode):
    h = hist(units)
    cfg = SolverConfig(rho=rho, mode=mode)
    assert ry.solve_candidate(h, cfg).score == ry.solve_daylevel(h, cfg).score


@settings(max_examples=150, deadline=None)
@given(UNITS, RHO, MODES)
def test_warped_dominates_daylevel(units, rho, mode):
    h = hist(units)
    cfg = SolverConfig(rho=rho, mode=mode)
    sol = ry.solve_warped(h, cfg)
    assert sol.score >= ry.solve_daylevel(h, cfg).score
    assert ry.validate(sol.residence, rho, mode) == []


@settings(max_examples=150, deadline=None)
@given(UNITS, RHO)
def test_mode_ordering(units, rho):
    h = hist(units)
    relaxed = ry.solve_daylevel(
        h, SolverConfig(rho=rho, mode=Mode.TRAILING_RELAXED)).score
    full = ry.solve_daylevel(h, SolverConfig(rho=rho, mode=Mode.FULL)).score
    assert relaxed <= full


@settings(max_examples=80, deadline=None)
@given(UNITS)
def test_rho_monotone_and_bounded(units):
    h = hist(units)
    scores = [ry.solve_daylevel(h, SolverConfig(rho=rho)).score
              for rho in range(1, 7)]
    assert scores == sorted(scores)
    best_single = min(
        ry.score(h, ry.ResidenceHistory.from_segments([(l, len(units))]))
        for l in range(3))
    assert scores[-1] <= best_single


@settings(max_examples=80, deadline=None)
@given(UNITS, RHO, MODES)
def test_solvers_are_pure_functions(units, rho, mode):
    h = hist(units)
    cfg = SolverConfig(rho=rho, mode=mode)
    for solver in (ry.solve_daylevel, ry.solve_candidate, ry.solve_warped):
        assert solver(h, cfg) == solver(h, cfg)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 7), st.integers(1, 3), st.integers(1, 4), MODES)
def test_enumeration_counts_and_validity(n, alphabet_size, rho, mode):
    histories = list(ry.enumerate_feasible(n, alphabet_size, rho, mode))
    assert len(set(histories)) == len(histories)
    for r in histories:
        assert ry.validate(r, rho, mode) == []
    if rho == 1:
        assert len(histories) == alphabet_size ** n


@settings(max_examples=100, deadline=None)
@given(UNITS, RHO)
def test_mode_ordering_holds_for_literal_window(units, rho):
    h = hist(units)
    relaxed = ry.solve_warped(h, SolverConfig(
        rho=rho, mode=Mode.TRAILING_RELAXED,
        q_interpretation=ry.QInterpretation.LITERAL)).score
    full = ry.solve_warped(h, SolverConfig(
        rho=rho, q_interpretation=ry.QInterpretation.LITERAL)).score
    assert relaxed <= full
