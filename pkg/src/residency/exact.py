"""Exact solvers for minimum-away-day residence histories.

Three routes to the optimum are provided:

* :func:`solve_daylevel` - the reference dynamic program over individual
  units, quadratic in the history length.
* :func:`solve_warped` - the same recurrence over the run-length encoded
  history, with residence changes restricted to run boundaries. Fast, but
  the restriction is lossy under a hard minimum-stay constraint: see
  ``q_set`` for the two window rules and README for a worked divergence
  example. Its score can exceed the day-level optimum (exclusive rule) or
  its history can violate the minimum stay (literal rule).
* :func:`solve_candidate` - a corrected fast path: a day-level DP restricted
  to a provably sufficient set of candidate boundary days
  (:func:`candidate_boundaries`), so it returns day-level-optimal scores at
  run-count-governed cost.

All solvers minimize (score, segment count) lexicographically and break the
remaining ties deterministically: smallest predecessor index, then smallest
location id. They are pure functions of their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import EmptyHistory
from .model import (
    DEFAULT_COST,
    UNKNOWN,
    Algorithm,
    CostModel,
    Mode,
    QInterpretation,
    ResidenceHistory,
    ResidenceSegment,
    SolverConfig,
    TimeWarpedHistory,
    warp,
)


@dataclass(frozen=True)
class Solution:
    """A residence history with its score and the configuration that produced it."""

    residence: ResidenceHistory
    score: float
    algorithm: Algorithm
    config: object  # SolverConfig or ModalConfig


@dataclass(frozen=True)
class DpCell:
    """One cell of the day-level DP table (introspection aid).

    ``back`` is the (predecessor end unit, predecessor location) pair, absent
    for cells whose segment is the first.
    """

    score: float
    segment_count: int
    back: tuple[int, int] | None


def _as_warped(history) -> tuple[TimeWarpedHistory, int, int]:
    """Normalize solver input to a run-length encoded history.

    Solvers accept either a dense :class:`LocationHistory` or an already
    encoded :class:`TimeWarpedHistory` (which must carry ``n_locations``);
    passing the encoded form skips the O(n) encoding pass.
    """
    if isinstance(history, TimeWarpedHistory):
        warped = history
        if warped.n_locations is None:
            raise ValueError("warped history must carry n_locations to solve")
    else:
        warped = warp(history)
    n = warped.total_units
    if n == 0:
        raise EmptyHistory("cannot infer a residence history from zero units")
    n_locations = warped.n_locations
    if n_locations < 1:
        raise ValueError("history has an empty location alphabet")
    return warped, n, n_locations


def _unit_cost_matrix(warped: TimeWarpedHistory, n_locations: int,
                      cost: CostModel) -> np.ndarray:
    """Per-unit cost of each (location, run) pair, shape (L, runs)."""
    values = warped.values
    if cost.day_cost is DEFAULT_COST.day_cost:
        ids = np.arange(n_locations, dtype=np.int64)
        uc = ((values[None, :] != ids[:, None])
              & (values[None, :] != UNKNOWN)).astype(np.float64)
    else:
        uc = np.empty((n_locations, values.size), dtype=np.float64)
        for l in range(n_locations):
            for r, v in enumerate(values):
                uc[l, r] = cost.day_cost(l, int(v))
    return uc


def _run_prefix(uc: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Cumulative cost of runs ``1..r`` per location, shape (L, runs+1)."""
    L = uc.shape[0]
    rc = np.concatenate(
        (np.zeros((L, 1)), np.cumsum(uc * counts[None, :], axis=1)), axis=1)
    return np.ascontiguousarray(rc)


def _day_prefix(uc: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Cumulative cost of units ``1..t`` per location, shape (L, n+1)."""
    L = uc.shape[0]
    per_day = np.repeat(uc, counts, axis=1)
    p = np.concatenate((np.zeros((L, 1)), np.cumsum(per_day, axis=1)), axis=1)
    return np.ascontiguousarray(p)


def _penalty_table(cost: CostModel, n: int) -> np.ndarray | None:
    if not cost.has_penalty:
        return None
    pen = np.empty(n + 1, dtype=np.float64)
    pen[0] = 0.0
    for d in range(1, n + 1):
        pen[d] = float(cost.segment_penalty(d))
    return pen


def _walk_back(fin_t: int, fin_lp: int, fin_l: int, end_idx: int,
               back_t: np.ndarray, back_l: np.ndarray) -> list[tuple[int, int, int]]:
    """Recover ``(from_idx, to_idx, location)`` triples, ascending.

    Segment boundaries are expressed in the DP's own index space; the caller
    converts them to unit spans.
    """
    triples = [(fin_t, end_idx, fin_l)]
    i, l = fin_t, fin_lp
    while i > 0:
        bt = int(back_t[i, l])
        bl = int(back_l[i, l])
        triples.append((bt, i, l))
        i, l = bt, bl
    triples.reverse()
    return triples


def _segments_from_days(triples) -> ResidenceHistory:
    return ResidenceHistory(tuple(
        ResidenceSegment(frm + 1, to - frm, loc) for frm, to, loc in triples))


def q_set(i: int, warped: TimeWarpedHistory, rho: int,
          interpretation: QInterpretation = QInterpretation.EXCLUSIVE) -> set[int]:
    """Admissible predecessor run indices for a segment ending at run ``i``.

    EXCLUSIVE admits ``t`` (0 meaning the virtual start) when the candidate
    segment, runs ``t+1..i``, spans at least ``rho`` units. LITERAL admits
    ``0 < t < i`` when runs ``t..i`` span at least ``rho`` units, i.e. the
    window starts one run early and never admits the virtual start.
    """
    k = len(warped)
    if not 1 <= i <= k:
        raise IndexError(f"run index {i} out of range 1..{k}")
    cum = warped.cum
    if interpretation is QInterpretation.EXCLUSIVE:
        return {t for t in range(0, i) if cum[i] - cum[t] >= rho}
    return {t for t in range(1, i) if cum[i] - cum[t - 1] >= rho}


def candidate_boundaries(warped: TimeWarpedHistory, rho: int) -> np.ndarray:
    """Sufficient segment-boundary days: the smallest set containing day 1,
    day n+1 and every run start, closed under +/- rho steps within [1, n+1].

    Some optimal solution only uses boundaries from this set: unit costs are
    constant within a run, so an interior boundary that is not pinned at
    exactly rho units from a neighbor can slide to a run edge without
    increasing the score. Returned ascending.
    """
    n = warped.total_units
    if n < 1:
        raise EmptyHistory("cannot enumerate boundaries of an empty history")
    seeds = {1, n + 1}
    seeds.update(int(c) + 1 for c in warped.cum[:-1])
    residues = sorted({(s - 1) % rho for s in seeds})
    chains = [np.arange(r + 1, n + 2, rho, dtype=np.int64) for r in residues]
    return np.unique(np.concatenate(chains))


def solve_daylevel(history, config: SolverConfig,
                   cost: CostModel = DEFAULT_COST) -> Solution:
    """Reference exact solver: DP over every unit and location.

    Runs in O(n^2 L^2) time and O(n L) space. The optimum is taken over all
    residence histories drawn from the full location alphabet that are
    feasible under ``config.mode``; single-segment candidates are always
    considered, so the problem stays feasible when n < rho.
    """
    warped, n, L = _as_warped(history)
    uc = _unit_cost_matrix(warped, L, cost)
    P = _day_prefix(uc, warped.counts)
    pen = _penalty_table(cost, n)
    backend = _backend.active()
    fin_score, _, fin_t, fin_lp, fin_l, _, _, bt, bl = backend.daylevel_solve(
        P, pen, int(config.rho), config.mode is Mode.TRAILING_RELAXED)
    triples = _walk_back(fin_t, fin_lp, fin_l, n, bt, bl)
    return Solution(_segments_from_days(triples), float(fin_score),
                    Algorithm.DAYLEVEL, config)


def solve_candidate(history, config: SolverConfig,
                    cost: CostModel = DEFAULT_COST) -> Solution:
    """Fast exact solver: day-level DP restricted to candidate boundaries.

    Scores match :func:`solve_daylevel` whenever the duration penalty is
    constant (the default model has none); with a non-constant
    ``segment_penalty`` the boundary restriction is not justified and the
    day-level solver should be used instead. Runtime is governed by the
    candidate count and the alphabet, not by n.
    """
    warped, n, L = _as_warped(history)
    uc = _unit_cost_matrix(warped, L, cost)
    rc = _run_prefix(uc, warped.counts)
    days = candidate_boundaries(warped, int(config.rho))
    cum = np.asarray(warped.cum, dtype=np.int64)
    pos = days - 1
    run_of = np.searchsorted(cum, pos, side="right") - 1
    uc_ext = np.concatenate((uc, np.zeros((L, 1))), axis=1)
    partial = (pos - cum[run_of]).astype(np.float64)
    pc = np.ascontiguousarray(rc[:, run_of] + uc_ext[:, run_of] * partial[None, :])
    pen = _penalty_table(cost, n)
    backend = _backend.active()
    fin_score, _, fin_t, fin_lp, fin_l, _, _, bt, bl = backend.boundary_solve(
        pc, days, pen, int(config.rho), config.mode is Mode.TRAILING_RELAXED)
    triples = _walk_back(fin_t, fin_lp, fin_l, len(days) - 1, bt, bl)
    residence = ResidenceHistory(tuple(
        ResidenceSegment(int(days[frm]), int(days[to] - days[frm]), loc)
        for frm, to, loc in triples))
    return Solution(residence, float(fin_score), Algorithm.CANDIDATE, config)


def solve_warped(history, config: SolverConfig,
                 cost: CostModel = DEFAULT_COST) -> Solution:
    """Run-boundary solver in O(runs^2 L^2) after the O(n) encoding pass.

    Residence changes are only considered where the observed location
    changes. Under the exclusive window rule the result is feasible but may
    score worse than the true optimum; under the literal rule segments
    shorter than rho can be produced. First segments must span at least rho
    units under both rules (single-segment candidates are always included,
    whatever their length).
    """
    warped, n, L = _as_warped(history)
    uc = _unit_cost_matrix(warped, L, cost)
    rc = _run_prefix(uc, warped.counts)
    cum = np.ascontiguousarray(warped.cum, dtype=np.int64)
    pen = _penalty_table(cost, n)
    backend = _backend.active()
    fin_score, _, fin_t, fin_lp, fin_l, _, _, bt, bl = backend.warped_solve(
        rc, cum, pen, int(config.rho),
        config.mode is Mode.TRAILING_RELAXED,
        config.q_interpretation is QInterpretation.LITERAL)
    triples = _walk_back(fin_t, fin_lp, fin_l, len(warped), bt, bl)
    residence = ResidenceHistory(tuple(
        ResidenceSegment(int(cum[frm]) + 1, int(cum[to] - cum[frm]), loc)
        for frm, to, loc in triples))
    return Solution(residence, float(fin_score), Algorithm.WARPED, config)


def dp_cells(history, config: SolverConfig,
             cost: CostModel = DEFAULT_COST) -> dict[tuple[int, int], DpCell]:
    """Finite cells of the day-level DP table, keyed by (end unit, location).

    Debugging aid for small instances; the virtual start appears as
    ``(0, -1)``.
    """
    warped, n, L = _as_warped(history)
    if n > 64:
        raise ValueError("dp_cells is an introspection aid; use n <= 64")
    uc = _unit_cost_matrix(warped, L, cost)
    P = _day_prefix(uc, warped.counts)
    pen = _penalty_table(cost, n)
    backend = _backend.active()
    _, _, _, _, _, S, C, BT, BL = backend.daylevel_solve(
        P, pen, int(config.rho), config.mode is Mode.TRAILING_RELAXED)
    cells = {(0, -1): DpCell(0.0, 0, None)}
    for i in range(1, n + 1):
        for l in range(L):
            if np.isfinite(S[i, l]):
                back = None if BL[i, l] < 0 else (int(BT[i, l]), int(BL[i, l]))
                cells[(i, l)] = DpCell(float(S[i, l]), int(C[i, l]), back)
    return cells


def solve(history, config: SolverConfig,
          cost: CostModel = DEFAULT_COST, modal_config=None) -> Solution:
    """Dispatch on ``config.algorithm``.

    The brute-force route reports the lexicographically smallest optimal
    history (by dense residence sequence); the modal route uses
    ``modal_config`` (defaults apply when omitted).
    """
    algorithm = config.algorithm
    if algorithm is Algorithm.DAYLEVEL:
        return solve_daylevel(history, config, cost)
    if algorithm is Algorithm.CANDIDATE:
        return solve_candidate(history, config, cost)
    if algorithm is Algorithm.WARPED:
        return solve_warped(history, config, cost)
    if algorithm is Algorithm.BRUTEFORCE:
        from .oracle import solve_bruteforce

        optima = solve_bruteforce(history, config, cost)
        best = min(optima.histories, key=lambda r: tuple(r.to_dense()))
        return Solution(best, optima.min_score, Algorithm.BRUTEFORCE, config)
    if algorithm is Algorithm.MODAL:
        from .modal import ModalConfig, solve_modal

        return solve_modal(history, modal_config or ModalConfig())
    raise ValueError(f"unknown algorithm {algorithm!r}")
