"""Synthetic ground truth, evaluation metrics, and solver comparison.

Randomness comes from an in-package SplitMix64 generator rather than a
library RNG so that a (seed, config) pair identifies the same instance
everywhere, independent of library versions. The exact draw sequence is
part of :func:`generate`'s contract and documented there.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, HistoryLengthMismatch
from .exact import Solution, solve
from .modal import ModalConfig, solve_modal
from .model import (
    DEFAULT_COST,
    UNKNOWN,
    LocationHistory,
    ResidenceHistory,
    SolverConfig,
    score,
)

_MASK = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 PRNG (Steele, Lea and Flood's 64-bit mixer).

    next_u64:   state += 0x9E3779B97F4A7C15 (mod 2^64), then mix
                z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
                z ^= z >> 27; z *= 0x94D049BB133111EB;
                z ^= z >> 31  (all mod 2^64).
    next_below: next_u64() % k (modulo reduction; the bias is negligible for
                the small k used here and keeps the mapping portable).
    next_float: next_u64() >> 11, times 2^-53, uniform in [0, 1).
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def next_below(self, k: int) -> int:
        if k < 1:
            raise ValueError("k must be >= 1")
        return self.next_u64() % k

    def next_float(self) -> float:
        return (self.next_u64() >> 11) * 2.0 ** -53


@dataclass(frozen=True)
class GenConfig:
    """Synthetic instance parameters.

    Truth segment lengths are uniform on [rho_truth, max_segment_length].
    ``p_travel`` is the probability, at each unit not already covered by a
    trip, of starting a trip whose length is uniform on
    [1, max_trip_length] (clipped at the segment end, so trips never
    straddle residence changes). With max_trip_length = 1 this makes each
    unit independently observed away with probability p_travel.
    ``p_missing`` then blanks each unit independently.
    """

    n_units: int
    n_locations: int
    rho_truth: int
    max_segment_length: int
    p_travel: float = 0.0
    max_trip_length: int = 1
    p_missing: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n_units < 1:
            raise ConfigError("n_units must be >= 1")
        if self.n_locations < 1:
            raise ConfigError("n_locations must be >= 1")
        if self.rho_truth < 1:
            raise ConfigError("rho_truth must be >= 1")
        if self.n_units < self.rho_truth:
            raise ConfigError("n_units must be >= rho_truth")
        if self.max_segment_length < self.rho_truth:
            raise ConfigError("max_segment_length must be >= rho_truth")
        if self.max_trip_length < 1:
            raise ConfigError("max_trip_length must be >= 1")
        for name in ("p_travel", "p_missing"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1]")
        if self.n_locations < 2:
            if self.p_travel > 0:
                raise ConfigError("trips need at least 2 locations")
            if self.n_units > self.max_segment_length:
                raise ConfigError(
                    "more than one residence segment requires at least 2 locations")


def generate(config: GenConfig) -> tuple[ResidenceHistory, LocationHistory]:
    """Draw (truth, observed) deterministically from ``config.seed``.

    Draw sequence, in order:

    1. Truth segments until the span is tiled: a length (uniform via
       next_below, extended to absorb the tail when the remainder would
       drop below rho_truth), then a location (uniform over the alphabet,
       excluding the previous segment's location after the first draw).
    2. Trips, scanning units left to right inside each truth segment: one
       next_float per uncovered unit; when it falls below p_travel, one
       length draw and one destination draw (uniform excluding the true
       residence), and the scan resumes after the trip.
    3. Missing units: one next_float per unit; below p_missing the unit
       becomes UNKNOWN.
    """
    rng = SplitMix64(config.seed)

    segments: list[tuple[int, int]] = []  # (location, length)
    if config.n_locations == 1:
        # no second location to move to: one segment, no draws consumed
        segments.append((0, config.n_units))
    remaining = config.n_units if not segments else 0
    previous = None
    while remaining > 0:
        span = config.max_segment_length - config.rho_truth + 1
        length = config.rho_truth + rng.next_below(span)
        if remaining - length < config.rho_truth:
            length = remaining
        if previous is None:
            location = rng.next_below(config.n_locations)
        else:
            location = rng.next_below(config.n_locations - 1)
            if location >= previous:
                location += 1
        segments.append((location, length))
        previous = location
        remaining -= length

    truth = ResidenceHistory.from_segments(segments)
    observed = truth.to_dense().copy()

    start = 0
    for location, length in segments:
        end = start + length
        u = start
        while u < end:
            if rng.next_float() < config.p_travel:
                trip_len = 1 + rng.next_below(config.max_trip_length)
                trip_end = min(u + trip_len, end)
                dest = rng.next_below(config.n_locations - 1)
                if dest >= location:
                    dest += 1
                observed[u:trip_end] = dest
                u = trip_end
            else:
                u += 1
        start = end

    for u in range(config.n_units):
        if rng.next_float() < config.p_missing:
            observed[u] = UNKNOWN

    return truth, LocationHistory(observed, config.n_locations)


@dataclass(frozen=True)
class EvalReport:
    """Agreement between an inferred residence history and the truth."""

    per_day_accuracy: float
    true_moves: int
    inferred_moves: int
    matched_moves: int
    lags: tuple[int, ...]  # inferred change unit minus true change unit
    away_score_inferred: float | None = None
    away_score_truth: float | None = None

    def to_dict(self) -> dict:
        return {
            "per_day_accuracy": self.per_day_accuracy,
            "true_moves": self.true_moves,
            "inferred_moves": self.inferred_moves,
            "matched_moves": self.matched_moves,
            "lags": list(self.lags),
            "away_score_inferred": self.away_score_inferred,
            "away_score_truth": self.away_score_truth,
        }


def evaluate(inferred: ResidenceHistory, truth: ResidenceHistory,
             match_tolerance: int = 0,
             observed: LocationHistory | None = None) -> EvalReport:
    """Per-unit accuracy plus greedy move matching within a tolerance.

    Moves are matched in chronological order of the true moves, each taking
    the earliest unmatched inferred move within ``match_tolerance`` units.
    Away-day scores are reported when the observed history is supplied.
    """
    if inferred.total_units != truth.total_units:
        raise HistoryLengthMismatch(
            f"inferred covers {inferred.total_units} units, truth "
            f"{truth.total_units}")
    dense_inferred = inferred.to_dense()
    dense_truth = truth.to_dense()
    n = dense_truth.size
    accuracy = float(np.mean(dense_inferred == dense_truth)) if n else 1.0

    true_moves = truth.move_units
    inferred_moves = inferred.move_units
    used = [False] * len(inferred_moves)
    lags: list[int] = []
    for tm in true_moves:
        for idx, im in enumerate(inferred_moves):
            if not used[idx] and abs(im - tm) <= match_tolerance:
                used[idx] = True
                lags.append(im - tm)
                break

    away_inferred = away_truth = None
    if observed is not None:
        away_inferred = score(observed, inferred, DEFAULT_COST)
        away_truth = score(observed, truth, DEFAULT_COST)
    return EvalReport(accuracy, len(true_moves), len(inferred_moves),
                      len(lags), tuple(lags), away_inferred, away_truth)


@dataclass(frozen=True)
class SolverSpec:
    """A labelled solver configuration for :func:`compare`."""

    label: str
    config: object  # SolverConfig or ModalConfig


@dataclass(frozen=True)
class CompareRow:
    label: str
    instances: int
    mean_accuracy: float
    median_accuracy: float
    matched_moves: int
    true_moves: int
    mean_lag: float | None
    mean_away_inferred: float
    mean_away_truth: float

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "instances": self.instances,
            "mean_accuracy": self.mean_accuracy,
            "median_accuracy": self.median_accuracy,
            "matched_moves": self.matched_moves,
            "true_moves": self.true_moves,
            "mean_lag": self.mean_lag,
            "mean_away_inferred": self.mean_away_inferred,
            "mean_away_truth": self.mean_away_truth,
        }


@dataclass(frozen=True)
class CompareReport:
    seeds: tuple[int, ...]
    rows: tuple[CompareRow, ...]

    def to_json_dict(self) -> dict:
        return {"seeds": list(self.seeds),
                "rows": [row.to_dict() for row in self.rows]}

    def to_text(self) -> str:
        header = (f"{'solver':<24} {'acc_mean':>9} {'acc_med':>9} "
                  f"{'moves':>11} {'lag_mean':>9} {'away_inf':>9} {'away_tru':>9}")
        lines = [header, "-" * len(header)]
        for row in self.rows:
            lag = "-" if row.mean_lag is None else f"{row.mean_lag:.2f}"
            lines.append(
                f"{row.label:<24} {row.mean_accuracy:>9.4f} "
                f"{row.median_accuracy:>9.4f} "
                f"{str(row.matched_moves) + '/' + str(row.true_moves):>11} "
                f"{lag:>9} {row.mean_away_inferred:>9.2f} "
                f"{row.mean_away_truth:>9.2f}")
        return "\n".join(lines)


def _run_spec(spec: SolverSpec, history: LocationHistory) -> Solution:
    if isinstance(spec.config, ModalConfig):
        return solve_modal(history, spec.config)
    if isinstance(spec.config, SolverConfig):
        return solve(history, spec.config)
    raise TypeError(f"unsupported solver config {type(spec.config).__name__}")


def compare(seeds, specs, gen_config: GenConfig,
            match_tolerance: int = 0) -> CompareReport:
    """Generate one instance per seed, run every solver, aggregate reports.

    Deterministic given the seed list; seeds are processed in sorted order.
    """
    seeds = tuple(sorted(int(s) for s in seeds))
    instances = []
    import dataclasses

    for seed in seeds:
        cfg = dataclasses.replace(gen_config, seed=seed)
        truth, observed = generate(cfg)
        instances.append((truth, observed))

    rows = []
    for spec in specs:
        reports = []
        for truth, observed in instances:
            solution = _run_spec(spec, observed)
            reports.append(evaluate(solution.residence, truth,
                                    match_tolerance, observed))
        accs = [r.per_day_accuracy for r in reports]
        all_lags = [lag for r in reports for lag in r.lags]
        rows.append(CompareRow(
            label=spec.label,
            instances=len(reports),
            mean_accuracy=statistics.fmean(accs),
            median_accuracy=statistics.median(accs),
            matched_moves=sum(r.matched_moves for r in reports),
            true_moves=sum(r.true_moves for r in reports),
            mean_lag=statistics.fmean(all_lags) if all_lags else None,
            mean_away_inferred=statistics.fmean(
                r.away_score_inferred for r in reports),
            mean_away_truth=statistics.fmean(
                r.away_score_truth for r in reports),
        ))
    return CompareReport(seeds, tuple(rows))
