"""Benchmark harness: solver scaling and compiled-vs-pure comparison.

The key measurements mirror the package's complexity story: the run-boundary
and candidate solvers should be governed by the run count rather than the
history length, the day-level reference should scale quadratically, and the
modal heuristic linearly. ``run_bench`` drives everything from a flat
key-value config (see configs/bench_example.cfg).
"""

from __future__ import annotations

import math
import time

import numpy as np

from . import _backend
from .errors import ConfigError
from .exact import solve_candidate, solve_daylevel, solve_warped
from .modal import ModalConfig, solve_modal
from .model import Algorithm, LocationHistory, SolverConfig
from .synth import GenConfig, SolverSpec, SplitMix64, compare

_SOLVERS = {
    "daylevel": solve_daylevel,
    "candidate": solve_candidate,
    "warped": solve_warped,
}


def make_run_history(n: int, runs: int, n_locations: int,
                     seed: int = 0) -> LocationHistory:
    """A history of exactly ``runs`` runs spanning ``n`` units, deterministic
    in ``seed``; adjacent runs always differ."""
    if not 1 <= runs <= n:
        raise ValueError("need 1 <= runs <= n")
    if n_locations < 2 and runs > 1:
        raise ValueError("multiple runs need at least 2 locations")
    rng = SplitMix64(seed)
    base, extra = divmod(n, runs)
    counts = np.full(runs, base, dtype=np.int64)
    counts[:extra] += 1
    values = np.empty(runs, dtype=np.int64)
    previous = -1
    for i in range(runs):
        v = rng.next_below(n_locations - 1 if previous >= 0 else n_locations)
        if previous >= 0 and v >= previous:
            v += 1
        values[i] = v
        previous = v
    return LocationHistory(np.repeat(values, counts), n_locations)


def make_random_history(n: int, n_locations: int, seed: int = 0) -> LocationHistory:
    """Unit-wise random history (many runs), deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    return LocationHistory(rng.integers(0, n_locations, size=n), n_locations)


def best_time(fn, repeats: int = 3) -> float:
    """Minimum wall time over ``repeats`` calls of ``fn()``."""
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def fit_loglog_slope(xs, ys) -> float:
    """Least-squares slope of log(y) against log(x)."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    lx = lx - lx.mean()
    return float((lx * (ly - ly.mean())).sum() / (lx * lx).sum())


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def _names(text: str) -> list[str]:
    return [x for x in text.replace(",", " ").split() if x]


def scaling_rows(ns, runs, n_locations, rho_fraction, backends,
                 algorithms, repeats=3, seed=1):
    """Time each fast solver at each n with rho scaled as a fraction of n."""
    rows = []
    for n in ns:
        history = make_run_history(n, runs, n_locations, seed)
        rho = max(1, int(n * rho_fraction))
        config = SolverConfig(rho=rho)
        for backend in backends:
            with _backend.use_backend(backend):
                for name in algorithms:
                    solver = _SOLVERS[name]
                    solution = solver(history, config)
                    seconds = best_time(lambda: solver(history, config), repeats)
                    rows.append({
                        "measure": "scaling",
                        "algorithm": name,
                        "backend": backend,
                        "n": n,
                        "runs": runs,
                        "locations": n_locations,
                        "rho": rho,
                        "seconds": seconds,
                        "score": solution.score,
                    })
    return rows


def daylevel_rows(ns, n_locations, rho, backends, repeats=3, seed=1):
    """Time the day-level reference solver on unit-wise random histories."""
    rows = []
    for n in ns:
        history = make_random_history(n, n_locations, seed)
        config = SolverConfig(rho=rho)
        for backend in backends:
            with _backend.use_backend(backend):
                solution = solve_daylevel(history, config)
                seconds = best_time(lambda: solve_daylevel(history, config),
                                    repeats)
                rows.append({
                    "measure": "daylevel",
                    "algorithm": "daylevel",
                    "backend": backend,
                    "n": n,
                    "runs": None,
                    "locations": n_locations,
                    "rho": rho,
                    "seconds": seconds,
                    "score": solution.score,
                })
    return rows


def modal_rows(ns, n_locations, interval, repeats=3, seed=1):
    rows = []
    config = ModalConfig(interval_length=interval)
    for n in ns:
        history = make_random_history(n, n_locations, seed)
        solution = solve_modal(history, config)
        seconds = best_time(lambda: solve_modal(history, config), repeats)
        rows.append({
            "measure": "modal",
            "algorithm": "modal",
            "backend": "pure",
            "n": n,
            "runs": None,
            "locations": n_locations,
            "rho": None,
            "seconds": seconds,
            "score": solution.score,
        })
    return rows


def rows_to_text(rows) -> str:
    header = (f"{'measure':<10} {'algorithm':<10} {'backend':<9} {'n':>9} "
              f"{'runs':>6} {'L':>3} {'rho':>7} {'seconds':>12} {'score':>12}")
    lines = [header, "-" * len(header)]
    for row in rows:
        runs = "-" if row["runs"] is None else str(row["runs"])
        rho = "-" if row["rho"] is None else str(row["rho"])
        lines.append(
            f"{row['measure']:<10} {row['algorithm']:<10} {row['backend']:<9} "
            f"{row['n']:>9} {runs:>6} {row['locations']:>3} {rho:>7} "
            f"{row['seconds']:>12.6f} {row['score']:>12.1f}")
    return "\n".join(lines)


def _parse_solver_specs(text: str) -> list[SolverSpec]:
    """Entries like ``daylevel:30`` (rho) or ``modal:30`` (interval)."""
    specs = []
    for item in (x.strip() for x in text.split(",") if x.strip()):
        name, _, arg = item.partition(":")
        if not arg:
            raise ConfigError(f"solver entry {item!r} needs a :parameter")
        value = int(arg)
        if name == "modal":
            specs.append(SolverSpec(item, ModalConfig(value)))
        else:
            try:
                algorithm = Algorithm(name)
            except ValueError:
                raise ConfigError(f"unknown solver {name!r}") from None
            specs.append(SolverSpec(item, SolverConfig(rho=value,
                                                       algorithm=algorithm)))
    return specs


def _compare_report(kv: dict[str, str]):
    gen = GenConfig(
        n_units=int(kv.get("gen_n_units", "365")),
        n_locations=int(kv.get("gen_n_locations", "3")),
        rho_truth=int(kv.get("gen_rho_truth", "45")),
        max_segment_length=int(kv.get("gen_max_segment_length", "150")),
        p_travel=float(kv.get("gen_p_travel", "0.05")),
        max_trip_length=int(kv.get("gen_max_trip_length", "4")),
        p_missing=float(kv.get("gen_p_missing", "0.05")),
    )
    specs = _parse_solver_specs(kv.get(
        "compare_solvers", "candidate:45,modal:30"))
    seeds = _ints(kv["compare_seeds"])
    return compare(seeds, specs, gen,
                   match_tolerance=int(kv.get("compare_tolerance", "0")))


def run_bench(kv: dict[str, str]) -> tuple[str, dict]:
    """Run the benchmark described by a flat key-value config.

    Recognized keys (all optional, defaults in parentheses):
    ns (36500,365000), runs (60), locations (5), rho_fraction (0.1),
    algorithms (candidate,warped), backends (auto), repeats (3), seed (1),
    daylevel_ns (500,1000,2000,4000), daylevel_locations (3),
    daylevel_rho (30), modal_ns (empty), modal_interval (30).

    A solver-quality comparison over synthetic instances runs when
    compare_seeds is present, driven by compare_solvers (entries like
    ``daylevel:45`` with rho, or ``modal:30`` with the interval),
    compare_tolerance, and the generator keys gen_n_units, gen_n_locations,
    gen_rho_truth, gen_max_segment_length, gen_p_travel,
    gen_max_trip_length, gen_p_missing.
    """
    backends_key = kv.get("backends", "auto")
    if backends_key == "auto":
        backends = ["compiled", "pure"] if _backend.compiled_available() else ["pure"]
    else:
        backends = _names(backends_key)
        for name in backends:
            if name not in ("compiled", "pure"):
                raise ConfigError(f"unknown backend {name!r}")
            if name == "compiled" and not _backend.compiled_available():
                raise ConfigError("compiled backend is not built")
    repeats = int(kv.get("repeats", "3"))
    seed = int(kv.get("seed", "1"))

    rows = []
    ns = _ints(kv.get("ns", "36500,365000"))
    if ns:
        algorithms = _names(kv.get("algorithms", "candidate,warped"))
        for name in algorithms:
            if name not in _SOLVERS:
                raise ConfigError(f"unknown algorithm {name!r}")
        rows.extend(scaling_rows(
            ns, int(kv.get("runs", "60")), int(kv.get("locations", "5")),
            float(kv.get("rho_fraction", "0.1")), backends, algorithms,
            repeats, seed))
    daylevel_ns = _ints(kv.get("daylevel_ns", "500,1000,2000,4000"))
    if daylevel_ns:
        rows.extend(daylevel_rows(
            daylevel_ns, int(kv.get("daylevel_locations", "3")),
            int(kv.get("daylevel_rho", "30")), backends, repeats, seed))
    modal_ns = _ints(kv.get("modal_ns", ""))
    if modal_ns:
        rows.extend(modal_rows(modal_ns, int(kv.get("locations", "5")),
                               int(kv.get("modal_interval", "30")),
                               repeats, seed))
    text = rows_to_text(rows)
    data = {"rows": rows}
    if "compare_seeds" in kv:
        report = _compare_report(kv)
        text = text + "\n\n" + report.to_text()
        data["compare"] = report.to_json_dict()
    return text, data
