"""Core domain types: location histories, residence histories, scoring.

Conventions used throughout the package:

* Locations are dense integer ids ``0 .. n_locations-1``; an :class:`Alphabet`
  maps them to human-readable labels.
* Time units (days by default) are 1-based in every public contract: unit 1
  is the first unit of the history. Internally values live in 0-based numpy
  arrays.
* ``UNKNOWN`` (-1) marks units with no observation. An unknown unit costs
  nothing against any residence location.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import HistoryLengthMismatch, InvalidWarpedHistory

UNKNOWN = -1

DEFAULT_EPOCH = datetime.date(2000, 1, 1)


class Mode(str, Enum):
    """Feasibility rule for the final residence segment.

    FULL requires every segment of a multi-segment history, including the
    last, to span at least ``rho`` units. TRAILING_RELAXED exempts the last
    segment, which may then be arbitrarily short. A single-segment history
    is feasible at any length under both modes.
    """

    FULL = "full"
    TRAILING_RELAXED = "trailing-relaxed"


class QInterpretation(str, Enum):
    """Window rule used by the run-boundary solver.

    EXCLUSIVE requires the new segment itself to span at least ``rho``
    units. LITERAL starts counting at the previous segment's final run, so
    it can admit segments shorter than ``rho``; it is kept for comparison
    and its output may fail :func:`validate`.
    """

    EXCLUSIVE = "exclusive"
    LITERAL = "literal"


class Algorithm(str, Enum):
    DAYLEVEL = "daylevel"
    WARPED = "warped"
    CANDIDATE = "candidate"
    BRUTEFORCE = "bruteforce"
    MODAL = "modal"


@dataclass(frozen=True)
class Alphabet:
    """Bijective mapping between location labels and dense integer ids."""

    labels: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        index = {}
        for i, label in enumerate(labels):
            if label in index:
                raise ValueError(f"duplicate label {label!r}")
            index[label] = i
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> "Alphabet":
        return cls(tuple(labels))

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def id_of(self, label: str) -> int:
        return self._index[label]

    def label_of(self, location: int) -> str:
        if location == UNKNOWN:
            return "?"
        return self.labels[location]


def _as_unit_array(units) -> np.ndarray:
    arr = np.asarray(units, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("history units must be one-dimensional")
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


class LocationHistory:
    """Dense per-unit sequence of observed location ids.

    ``values[i]`` is the observation for unit ``i+1`` (1-based contracts),
    either a location id below ``n_locations`` or ``UNKNOWN``. ``epoch`` is
    the calendar date of unit 1 and ``unit_duration`` the unit size in days.
    Instances are immutable.
    """

    __slots__ = ("values", "n_locations", "epoch", "unit_duration")

    def __init__(self, units, n_locations: int,
                 epoch: datetime.date = DEFAULT_EPOCH, unit_duration: int = 1):
        values = _as_unit_array(units)
        if n_locations < 0:
            raise ValueError("n_locations must be non-negative")
        if unit_duration < 1:
            raise ValueError("unit_duration must be a positive number of days")
        if values.size:
            lo = int(values.min())
            hi = int(values.max())
            if lo < UNKNOWN or hi >= n_locations:
                raise ValueError(
                    f"location ids must be UNKNOWN or in [0, {n_locations}); "
                    f"got range [{lo}, {hi}]")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "n_locations", int(n_locations))
        object.__setattr__(self, "epoch", epoch)
        object.__setattr__(self, "unit_duration", int(unit_duration))

    def __setattr__(self, name, value):
        raise AttributeError("LocationHistory is immutable")

    @classmethod
    def from_ids(cls, units: Sequence[int], n_locations: int | None = None,
                 epoch: datetime.date = DEFAULT_EPOCH,
                 unit_duration: int = 1) -> "LocationHistory":
        """Build a history from raw ids, inferring the alphabet size if absent."""
        arr = np.asarray(list(units) if not isinstance(units, np.ndarray) else units,
                         dtype=np.int64)
        if n_locations is None:
            n_locations = int(arr.max()) + 1 if arr.size and arr.max() >= 0 else 0
        return cls(arr, n_locations, epoch, unit_duration)

    @classmethod
    def from_labels(cls, labels: Sequence[str | None],
                    alphabet: Alphabet | None = None,
                    epoch: datetime.date = DEFAULT_EPOCH,
                    unit_duration: int = 1) -> tuple["LocationHistory", Alphabet]:
        """Build a history from label strings; ``None`` marks unknown units.

        When no alphabet is given one is built from the distinct labels in
        sorted order.
        """
        if alphabet is None:
            alphabet = Alphabet(tuple(sorted({x for x in labels if x is not None})))
        ids = [UNKNOWN if x is None else alphabet.id_of(x) for x in labels]
        return cls(ids, len(alphabet), epoch, unit_duration), alphabet

    def __len__(self) -> int:
        return int(self.values.size)

    def units(self) -> tuple[int, ...]:
        """The unit values as a plain tuple (UNKNOWN for missing units)."""
        return tuple(int(v) for v in self.values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocationHistory):
            return NotImplemented
        return (self.n_locations == other.n_locations
                and self.epoch == other.epoch
                and self.unit_duration == other.unit_duration
                and np.array_equal(self.values, other.values))

    __hash__ = None

    def __repr__(self) -> str:
        return (f"LocationHistory(n={len(self)}, n_locations={self.n_locations}, "
                f"epoch={self.epoch.isoformat()}, unit_duration={self.unit_duration})")


class TimeWarpedHistory:
    """Run-length encoding of a location history.

    Each run is a ``(value, count)`` pair; adjacent runs have different
    values and counts are positive. ``cum[r]`` gives the number of units in
    runs ``0..r-1``, so run ``r`` covers 1-based units
    ``cum[r]+1 .. cum[r+1]``.
    """

    __slots__ = ("values", "counts", "total_units", "cum",
                 "n_locations", "epoch", "unit_duration")

    def __init__(self, values, counts, total_units: int,
                 n_locations: int | None = None,
                 epoch: datetime.date = DEFAULT_EPOCH, unit_duration: int = 1):
        v = _as_unit_array(values)
        c = _as_unit_array(counts)
        if v.size != c.size:
            raise InvalidWarpedHistory("values and counts differ in length")
        if c.size and int(c.min()) < 1:
            raise InvalidWarpedHistory("run counts must be positive")
        if v.size > 1 and np.any(v[1:] == v[:-1]):
            raise InvalidWarpedHistory("adjacent runs must have different values")
        if int(c.sum()) != int(total_units):
            raise InvalidWarpedHistory(
                f"run counts sum to {int(c.sum())}, expected {total_units}")
        cum = np.concatenate(([0], np.cumsum(c)))
        cum.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "counts", c)
        object.__setattr__(self, "total_units", int(total_units))
        object.__setattr__(self, "cum", cum)
        object.__setattr__(self, "n_locations", n_locations)
        object.__setattr__(self, "epoch", epoch)
        object.__setattr__(self, "unit_duration", int(unit_duration))

    def __setattr__(self, name, value):
        raise AttributeError("TimeWarpedHistory is immutable")

    @classmethod
    def from_runs(cls, runs: Iterable[tuple[int, int]], **kwargs) -> "TimeWarpedHistory":
        runs = list(runs)
        values = [v for v, _ in runs]
        counts = [c for _, c in runs]
        return cls(values, counts, int(sum(counts)), **kwargs)

    @property
    def runs(self) -> tuple[tuple[int, int], ...]:
        return tuple((int(v), int(c)) for v, c in zip(self.values, self.counts))

    @property
    def moves(self) -> int:
        """Number of observed location changes (runs minus one)."""
        if self.total_units == 0:
            return 0
        return int(self.values.size) - 1

    def __len__(self) -> int:
        return int(self.values.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeWarpedHistory):
            return NotImplemented
        return (self.total_units == other.total_units
                and np.array_equal(self.values, other.values)
                and np.array_equal(self.counts, other.counts))

    __hash__ = None

    def __repr__(self) -> str:
        return f"TimeWarpedHistory(runs={len(self)}, total_units={self.total_units})"


@dataclass(frozen=True)
class ResidenceSegment:
    """A contiguous stay: ``length`` units at ``location`` from ``start_unit`` on."""

    start_unit: int
    length: int
    location: int

    def __post_init__(self):
        if self.start_unit < 1:
            raise ValueError("start_unit must be >= 1")
        if self.length < 1:
            raise ValueError("segment length must be >= 1")
        if self.location < 0:
            raise ValueError("segment location must be a real location id")

    @property
    def end_unit(self) -> int:
        """Last unit covered by the segment (inclusive)."""
        return self.start_unit + self.length - 1


@dataclass(frozen=True)
class ResidenceHistory:
    """Piecewise-constant residence assignment tiling units 1..n."""

    segments: tuple[ResidenceSegment, ...]

    def __post_init__(self):
        segments = tuple(self.segments)
        object.__setattr__(self, "segments", segments)
        expected_start = 1
        previous_location = None
        for seg in segments:
            if seg.start_unit != expected_start:
                raise ValueError(
                    f"segment starting at {seg.start_unit} leaves a gap or overlap "
                    f"(expected start {expected_start})")
            if seg.location == previous_location:
                raise ValueError("adjacent segments must have different locations")
            expected_start = seg.start_unit + seg.length
            previous_location = seg.location

    @classmethod
    def from_segments(cls, triples: Iterable[tuple[int, int]]) -> "ResidenceHistory":
        """Build from ``(location, length)`` pairs laid end to end from unit 1."""
        segments = []
        start = 1
        for location, length in triples:
            segments.append(ResidenceSegment(start, int(length), int(location)))
            start += int(length)
        return cls(tuple(segments))

    @classmethod
    def from_dense(cls, values: Sequence[int]) -> "ResidenceHistory":
        """Build from a dense per-unit residence sequence (no UNKNOWN allowed)."""
        arr = np.asarray(values, dtype=np.int64)
        if arr.size == 0:
            return cls(())
        if int(arr.min()) < 0:
            raise ValueError("residence values must be real location ids")
        change = np.flatnonzero(arr[1:] != arr[:-1]) + 1
        starts = np.concatenate(([0], change))
        ends = np.concatenate((change, [arr.size]))
        return cls(tuple(
            ResidenceSegment(int(s) + 1, int(e - s), int(arr[s]))
            for s, e in zip(starts, ends)))

    @property
    def total_units(self) -> int:
        return sum(seg.length for seg in self.segments)

    @property
    def move_units(self) -> tuple[int, ...]:
        """1-based units at which the residence changes (start of each later segment)."""
        return tuple(seg.start_unit for seg in self.segments[1:])

    def to_dense(self) -> np.ndarray:
        if not self.segments:
            return np.empty(0, dtype=np.int64)
        return np.repeat(
            np.array([seg.location for seg in self.segments], dtype=np.int64),
            np.array([seg.length for seg in self.segments], dtype=np.int64))

    def __len__(self) -> int:
        return len(self.segments)


def default_day_cost(residence: int, observed: int) -> float:
    """Mismatch cost: 1 when the observation disagrees with the residence.

    Unknown observations are free against any residence.
    """
    if observed == residence or observed == UNKNOWN:
        return 0.0
    return 1.0


def zero_penalty(duration: int) -> float:
    return 0.0


@dataclass(frozen=True)
class CostModel:
    """Pluggable objective: per-unit cost plus a per-segment duration penalty.

    ``day_cost(residence_id, observed)`` is charged for every unit;
    ``segment_penalty(length)`` once per segment. The defaults reproduce the
    plain away-day count, which is integer-valued and compared exactly.
    """

    day_cost: Callable[[int, int], float] = default_day_cost
    segment_penalty: Callable[[int], float] = zero_penalty

    @property
    def has_penalty(self) -> bool:
        return self.segment_penalty is not zero_penalty

    @property
    def is_default(self) -> bool:
        return self.day_cost is default_day_cost and not self.has_penalty


DEFAULT_COST = CostModel()


@dataclass(frozen=True)
class SolverConfig:
    """Solver parameters: minimum stay ``rho`` plus rule variants."""

    rho: int
    mode: Mode = Mode.FULL
    q_interpretation: QInterpretation = QInterpretation.EXCLUSIVE
    algorithm: Algorithm = Algorithm.DAYLEVEL

    def __post_init__(self):
        if self.rho < 1:
            raise ValueError("rho must be >= 1")


@dataclass(frozen=True)
class Violation:
    """One feasibility failure reported by :func:`validate`."""

    segment_index: int  # 1-based
    length: int
    required: int
    message: str


def warp(history: LocationHistory) -> TimeWarpedHistory:
    """Run-length encode a history; inverse of :func:`unwarp`."""
    from . import _backend

    values = history.values
    n = values.size
    if n == 0:
        return TimeWarpedHistory([], [], 0, history.n_locations,
                                 history.epoch, history.unit_duration)
    run_values, run_counts = _backend.active().rle_encode(values)
    return TimeWarpedHistory(run_values, run_counts, int(n),
                             history.n_locations, history.epoch,
                             history.unit_duration)


def unwarp(warped: TimeWarpedHistory) -> LocationHistory:
    """Expand a run-length encoded history back to its dense form."""
    if len(warped) == 0:
        units = np.empty(0, dtype=np.int64)
    else:
        units = np.repeat(warped.values, warped.counts)
    n_locations = warped.n_locations
    if n_locations is None:
        observed = units[units != UNKNOWN]
        n_locations = int(observed.max()) + 1 if observed.size else 0
    return LocationHistory(units, n_locations, warped.epoch, warped.unit_duration)


def score(history: LocationHistory, residence: ResidenceHistory,
          cost: CostModel = DEFAULT_COST) -> float:
    """Objective value of a residence history against an observed history.

    Sums ``day_cost`` over all units plus ``segment_penalty`` over segments.
    Computed piecewise over observation runs, so it costs O(runs + segments)
    cost-function calls rather than O(n).
    """
    n = len(history)
    if residence.total_units != n:
        raise HistoryLengthMismatch(
            f"residence covers {residence.total_units} units, history has {n}")
    total = 0.0
    if cost.has_penalty:
        for seg in residence.segments:
            total += cost.segment_penalty(seg.length)
    if n == 0:
        return total
    warped = warp(history)
    run_values = warped.values
    run_ends = warped.cum[1:]  # 1-based end unit of each run
    r = 0
    for seg in residence.segments:
        unit = seg.start_unit
        seg_end = seg.end_unit
        while unit <= seg_end:
            while run_ends[r] < unit:
                r += 1
            take = min(seg_end, int(run_ends[r])) - unit + 1
            total += cost.day_cost(seg.location, int(run_values[r])) * take
            unit += take
    return total


def validate(residence: ResidenceHistory, rho: int,
             mode: Mode = Mode.FULL) -> list[Violation]:
    """Check segment lengths against the minimum stay ``rho``.

    Returns an empty list when feasible. A single-segment history is always
    feasible. With two or more segments every segment except the last must
    span at least ``rho`` units; the last one too under FULL, while
    TRAILING_RELAXED leaves it unconstrained.
    """
    if rho < 1:
        raise ValueError("rho must be >= 1")
    segments = residence.segments
    violations: list[Violation] = []
    if len(segments) <= 1:
        return violations
    last = len(segments) - 1
    for idx, seg in enumerate(segments):
        if idx == last and mode is Mode.TRAILING_RELAXED:
            continue
        if seg.length < rho:
            violations.append(Violation(
                idx + 1, seg.length, rho,
                f"segment {idx + 1} lasts {seg.length} < {rho} units"))
    return violations
