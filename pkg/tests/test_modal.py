import pytest

import residency as ry
from residency import UNKNOWN
from residency.errors import EmptyHistory, InsufficientData
from residency.modal import ModalConfig, solve_modal

from conftest import hist

A, B, C = 0, 1, 2


def test_worked_example_assignments():
    h = hist([A] * 16 + [B] * 14 + [A] * 16 + [B] * 44)
    sol = solve_modal(h, ModalConfig(30))
    assert [(s.location, s.start_unit, s.end_unit)
            for s in sol.residence.segments] == [(A, 1, 60), (B, 61, 90)]
    assert sol.score == 28.0  # 14 away-days in each of the first two intervals


def test_constant():
    sol = solve_modal(hist([A] * 45), ModalConfig(30))
    assert [(s.location, s.length) for s in sol.residence.segments] == [(A, 45)]
    assert sol.score == 0.0


def test_tie_keeps_previous_assignment():
    h = hist([A] * 30 + [A] * 15 + [B] * 15)
    sol = solve_modal(h, ModalConfig(30))
    assert [(s.location, s.length) for s in sol.residence.segments] == [(A, 60)]


def test_tie_without_previous_takes_smallest_id():
    sol = solve_modal(hist([B, A]), ModalConfig(2))
    assert sol.residence.segments[0].location == A


def test_unknowns_excluded_from_counts():
    h = hist([UNKNOWN, B, UNKNOWN, A, B], n_locations=2)
    sol = solve_modal(h, ModalConfig(5))
    assert sol.residence.segments[0].location == B


def test_all_unknown_interval_inherits():
    h = hist([A, A, UNKNOWN, UNKNOWN, B, B], n_locations=2)
    sol = solve_modal(h, ModalConfig(2))
    assert [(s.location, s.length) for s in sol.residence.segments] == [(A, 4), (B, 2)]


def test_first_interval_needs_data():
    with pytest.raises(InsufficientData):
        solve_modal(hist([UNKNOWN, UNKNOWN, A], n_locations=1), ModalConfig(2))


def test_empty_history():
    with pytest.raises(EmptyHistory):
        solve_modal(hist([], n_locations=1))


def test_partial_final_interval():
    h = hist([A] * 30 + [B] * 10)
    sol = solve_modal(h, ModalConfig(30))
    assert [(s.location, s.length) for s in sol.residence.segments] == [(A, 30), (B, 10)]


def test_output_not_constrained_by_rho():
    # 10-unit flip-flop with interval 2: the heuristic happily moves often
    h = hist(([A] * 2 + [B] * 2) * 3)
    sol = solve_modal(h, ModalConfig(2))
    assert len(sol.residence) == 6


def test_exact_never_scores_worse(rng):
    # The modal output has all non-final segments >= interval_length, so it
    # is one feasible candidate whenever rho <= interval_length and the
    # trailing segment is exempt; the exact optimum can only be better.
    for _ in range(40):
        n = int(rng.integers(1, 120))
        h = ry.LocationHistory(rng.integers(0, 3, size=n), 3)
        interval = int(rng.integers(1, 40))
        modal = solve_modal(h, ModalConfig(interval))
        exact = ry.solve_daylevel(h, ry.SolverConfig(
            rho=int(rng.integers(1, interval + 1)),
            mode=ry.Mode.TRAILING_RELAXED))
        assert exact.score <= modal.score
