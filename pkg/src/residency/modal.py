"""Modal-location baseline: fixed intervals, most frequent location wins.

Linear-time heuristic kept for comparison against the exact solvers. It
knows nothing about the minimum stay, so its output may fail
:func:`residency.model.validate`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyHistory, InsufficientData
from .exact import Solution
from .model import (
    DEFAULT_COST,
    UNKNOWN,
    Algorithm,
    LocationHistory,
    ResidenceHistory,
    score,
)


@dataclass(frozen=True)
class ModalConfig:
    """Interval length in units; intervals are aligned to the trace start and
    the final partial interval is processed as-is."""

    interval_length: int = 30

    def __post_init__(self):
        if self.interval_length < 1:
            raise ValueError("interval_length must be >= 1")


def solve_modal(history: LocationHistory,
                config: ModalConfig = ModalConfig()) -> Solution:
    """Assign each interval its most frequent observed location.

    Ties keep the previous interval's assignment when it is among the modes,
    otherwise the smallest location id wins; an interval with no
    observations inherits the previous assignment. The first interval must
    contain at least one observation.
    """
    n = len(history)
    if n == 0:
        raise EmptyHistory("cannot infer a residence history from zero units")
    n_locations = max(history.n_locations, 1)
    values = history.values
    step = config.interval_length

    assignments: list[int] = []
    previous = None
    for start in range(0, n, step):
        chunk = values[start:start + step]
        observed = chunk[chunk != UNKNOWN]
        if observed.size == 0:
            if previous is None:
                raise InsufficientData(
                    "first interval contains no observations")
            assignments.append(previous)
            continue
        counts = np.bincount(observed, minlength=n_locations)
        top = int(counts.max())
        if previous is not None and counts[previous] == top:
            choice = previous
        else:
            choice = int(np.argmax(counts))  # first maximum = smallest id
        assignments.append(choice)
        previous = choice

    segments = []
    for idx, loc in enumerate(assignments):
        length = min(step, n - idx * step)
        if segments and segments[-1][0] == loc:
            segments[-1][1] += length
        else:
            segments.append([loc, length])
    residence = ResidenceHistory.from_segments((loc, length) for loc, length in segments)
    return Solution(residence, score(history, residence, DEFAULT_COST),
                    Algorithm.MODAL, config)
