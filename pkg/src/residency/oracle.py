"""Obviously-correct brute-force solver, used as the ground truth in tests.

The oracle enumerates every dense residence sequence over the alphabet,
filters by feasibility, and scores the survivors. Deliberately naive and
capped: it exists to check the dynamic programs, not to be fast.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import EmptyHistory, InstanceTooLarge
from .model import (
    DEFAULT_COST,
    UNKNOWN,
    CostModel,
    LocationHistory,
    Mode,
    ResidenceHistory,
    SolverConfig,
    validate,
)

MAX_UNITS = 14
MAX_SEQUENCES = 4_000_000


def _check_budget(n: int, alphabet_size: int, max_units: int, budget: int):
    if n > max_units:
        raise InstanceTooLarge(
            f"brute force refuses n={n} > {max_units} units")
    if alphabet_size ** n > budget:
        raise InstanceTooLarge(
            f"brute force refuses {alphabet_size}^{n} = {alphabet_size ** n} "
            f"sequences > budget {budget}")


def _feasible_lengths(lengths: list[int], rho: int, mode: Mode) -> bool:
    # Same rules as model.validate: single segments are always feasible,
    # otherwise all but the last need >= rho, the last too under FULL.
    if len(lengths) <= 1:
        return True
    for length in lengths[:-1]:
        if length < rho:
            return False
    if mode is Mode.FULL and lengths[-1] < rho:
        return False
    return True


def _run_lengths(seq: tuple[int, ...]) -> list[int]:
    lengths = []
    count = 0
    previous = None
    for v in seq:
        if v == previous:
            count += 1
        else:
            if count:
                lengths.append(count)
            previous = v
            count = 1
    lengths.append(count)
    return lengths


def _feasible_sequences(n, alphabet_size, rho, mode):
    for seq in itertools.product(range(alphabet_size), repeat=n):
        if _feasible_lengths(_run_lengths(seq), rho, mode):
            yield seq


def enumerate_feasible(n: int, alphabet_size: int, rho: int,
                       mode: Mode = Mode.FULL, *,
                       max_units: int = MAX_UNITS,
                       budget: int = MAX_SEQUENCES):
    """Yield every feasible residence history of length ``n``, exactly once,
    in lexicographic order of the dense sequence."""
    if n < 1:
        raise EmptyHistory("cannot enumerate residence histories of length 0")
    if alphabet_size < 1:
        raise ValueError("alphabet_size must be >= 1")
    _check_budget(n, alphabet_size, max_units, budget)
    for seq in _feasible_sequences(n, alphabet_size, rho, mode):
        yield ResidenceHistory.from_dense(seq)


@dataclass(frozen=True)
class OptimaSet:
    """Minimum score together with every history that achieves it."""

    min_score: float
    histories: frozenset[ResidenceHistory]

    def __contains__(self, residence: ResidenceHistory) -> bool:
        return residence in self.histories


def solve_bruteforce(history: LocationHistory, config: SolverConfig,
                     cost: CostModel = DEFAULT_COST, *,
                     max_units: int = MAX_UNITS,
                     budget: int = MAX_SEQUENCES) -> OptimaSet:
    """Score every feasible history and return all minimizers."""
    n = len(history)
    if n == 0:
        raise EmptyHistory("cannot infer a residence history from zero units")
    alphabet_size = history.n_locations
    if alphabet_size < 1:
        raise ValueError("history has an empty location alphabet")
    _check_budget(n, alphabet_size, max_units, budget)

    observed = history.units()
    default = cost.is_default
    best = None
    best_seqs: list[tuple[int, ...]] = []
    for seq in _feasible_sequences(n, alphabet_size, config.rho, config.mode):
        if default:
            s = 0.0
            for h, r in zip(observed, seq):
                if h != r and h != UNKNOWN:
                    s += 1.0
        else:
            s = 0.0
            for h, r in zip(observed, seq):
                s += cost.day_cost(r, h)
            for length in _run_lengths(seq):
                s += cost.segment_penalty(length)
        if best is None or s < best:
            best = s
            best_seqs = [seq]
        elif s == best:
            best_seqs.append(seq)
    return OptimaSet(float(best), frozenset(
        ResidenceHistory.from_dense(seq) for seq in best_seqs))
