"""Command-line interface.

Subcommands: ``infer`` (trace file in, residence segments out), ``gen``
(synthetic trace plus ground truth), ``eval`` (inferred vs truth), ``bench``
(solver and backend timing). Exit codes: 0 success, 1 usage error, 2 parse
or data error, 3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from pathlib import Path

from .errors import (
    ConfigError,
    EmptyHistory,
    EmptyInput,
    HistoryLengthMismatch,
    InstanceTooLarge,
    InsufficientData,
    InvalidWarpedHistory,
    ParseError,
    UsageError,
)
from .exact import solve
from .io import (
    RunManifest,
    build_alphabet,
    dumps_documents,
    gen_config_from_kv,
    observations_to_jsonl,
    parse_kv_config,
    parse_observations,
    quantize,
    render_solution,
    residence_from_document,
    segments_to_json,
    json_number,
)
from .modal import ModalConfig, solve_modal
from .model import Algorithm, Alphabet, Mode, QInterpretation, SolverConfig, score
from .synth import evaluate, generate

_DATA_ERRORS = (ParseError, EmptyInput, EmptyHistory, InsufficientData,
                ConfigError, InvalidWarpedHistory, HistoryLengthMismatch)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="residency",
                     description="Infer residence histories from location traces.")
    sub = parser.add_subparsers(dest="command", metavar="command")

    infer = sub.add_parser("infer", help="solve a trace file")
    infer.add_argument("--input", required=True, help="trace file path")
    infer.add_argument("--format", required=True, choices=["csv", "jsonl"])
    infer.add_argument("--algorithm", required=True,
                       choices=["daylevel", "warped", "candidate",
                                "bruteforce", "modal"])
    infer.add_argument("--rho", type=int,
                       help="minimum stay in units (required except for modal)")
    infer.add_argument("--mode", choices=["full", "trailing-relaxed"],
                       default="full")
    infer.add_argument("--q", choices=["exclusive", "literal"],
                       default="exclusive",
                       help="window rule for the warped solver")
    infer.add_argument("--interval", type=int, default=30,
                       help="interval length for the modal heuristic")
    infer.add_argument("--unit-days", type=int, default=1,
                       help="days per time unit")
    infer.add_argument("--range", nargs=2, metavar=("START", "END"),
                       help="restrict to an inclusive ISO date range")
    infer.add_argument("--output", required=True,
                       help="output JSON path, '-' for stdout")

    gen = sub.add_parser("gen", help="generate a synthetic trace")
    gen.add_argument("--config", required=True, help="key=value config file")
    gen.add_argument("--seed", type=int, help="override the config seed")
    gen.add_argument("--output", required=True,
                     help="JSONL trace path; truth goes to <output>.truth.json")

    ev = sub.add_parser("eval", help="compare an inference against the truth")
    ev.add_argument("--inferred", required=True)
    ev.add_argument("--truth", required=True)
    ev.add_argument("--tolerance", type=int, default=0,
                    help="move matching tolerance in units")

    bench = sub.add_parser("bench", help="time solvers and backends")
    bench.add_argument("--config", required=True, help="key=value config file")
    bench.add_argument("--json", help="also write rows as JSON to this path")
    return parser


def _write_output(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _parse_range(args) -> tuple[datetime.date, datetime.date] | None:
    if args.range is None:
        return None
    try:
        start = datetime.date.fromisoformat(args.range[0])
        end = datetime.date.fromisoformat(args.range[1])
    except ValueError as exc:
        raise UsageError(f"bad --range: {exc}") from None
    if end < start:
        raise UsageError("--range end precedes start")
    return start, end


def _cmd_infer(args) -> int:
    algorithm = Algorithm(args.algorithm)
    if algorithm is not Algorithm.MODAL and args.rho is None:
        raise UsageError(f"--rho is required for --algorithm {args.algorithm}")
    if args.unit_days < 1:
        raise UsageError("--unit-days must be >= 1")
    date_range = _parse_range(args)

    with open(args.input, "r", encoding="utf-8", newline="") as handle:
        grouped = parse_observations(handle, args.format)

    range_echo = (tuple(d.isoformat() for d in date_range)
                  if date_range else None)
    documents = []
    for user, records in grouped.items():
        alphabet = build_alphabet(records)
        try:
            history = quantize(records, alphabet, args.unit_days, date_range)
        except EmptyInput:
            raise EmptyInput(
                f"user {user!r} has no observations inside the range") from None
        if algorithm is Algorithm.MODAL:
            solution = solve_modal(history, ModalConfig(args.interval))
            manifest = RunManifest(
                algorithm=algorithm.value, unit_duration=args.unit_days,
                input_path=args.input, input_format=args.format,
                date_range=range_echo, interval_length=args.interval)
        else:
            config = SolverConfig(rho=args.rho, mode=Mode(args.mode),
                                  q_interpretation=QInterpretation(args.q),
                                  algorithm=algorithm)
            solution = solve(history, config)
            manifest = RunManifest(
                algorithm=algorithm.value, unit_duration=args.unit_days,
                input_path=args.input, input_format=args.format,
                date_range=range_echo, rho=args.rho, mode=args.mode,
                q_interpretation=args.q)
        documents.append(render_solution(user, solution, alphabet,
                                         history.epoch, args.unit_days,
                                         manifest))
    _write_output(args.output, dumps_documents(documents))
    return 0


def _cmd_gen(args) -> int:
    if args.output == "-":
        raise UsageError("gen needs a real --output path for the truth sidecar")
    kv = parse_kv_config(Path(args.config).read_text(encoding="utf-8"))
    config = gen_config_from_kv(kv, seed=args.seed)
    truth, observed = generate(config)
    alphabet = Alphabet(tuple(f"L{i}" for i in range(config.n_locations)))
    user = "synthetic"

    _write_output(args.output, observations_to_jsonl(observed, alphabet, user))

    manifest = RunManifest(algorithm="truth", unit_duration=1,
                           rho=config.rho_truth, seed=config.seed)
    truth_doc = {
        "user": user,
        "algorithm": "truth",
        "rho": config.rho_truth,
        "mode": None,
        "score": json_number(score(observed, truth)),
        "segments": segments_to_json(truth, alphabet, observed.epoch,
                                     observed.unit_duration),
        "manifest": manifest.to_dict(),
    }
    _write_output(args.output + ".truth.json", dumps_documents([truth_doc]))
    return 0


def _load_documents(path: str) -> list[dict]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg})") from None
    if isinstance(data, dict):
        return [data]
    if isinstance(data, list) and all(isinstance(d, dict) for d in data):
        return data
    raise ParseError(f"{path}: expected a document or list of documents")


def _doc_alphabet(*docs) -> Alphabet:
    labels = sorted({seg["location"] for doc in docs for seg in doc["segments"]})
    return Alphabet(tuple(labels))


def _cmd_eval(args) -> int:
    inferred_docs = _load_documents(args.inferred)
    truth_docs = {doc.get("user"): doc for doc in _load_documents(args.truth)}
    reports = []
    for doc in inferred_docs:
        user = doc.get("user")
        truth_doc = truth_docs.get(user)
        if truth_doc is None:
            continue
        try:
            epoch = datetime.date.fromisoformat(doc["segments"][0]["start"])
            truth_epoch = datetime.date.fromisoformat(
                truth_doc["segments"][0]["start"])
            if epoch != truth_epoch:
                raise ParseError(f"user {user!r}: inferred starts {epoch}, "
                                 f"truth {truth_epoch}")
            unit = int(doc.get("manifest", {}).get("unit_duration") or 1)
            alphabet = _doc_alphabet(doc, truth_doc)
            inferred = residence_from_document(doc, alphabet, epoch, unit)
            truth = residence_from_document(truth_doc, alphabet, epoch, unit)
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ParseError(
                f"user {user!r}: malformed document ({exc})") from None
        report = evaluate(inferred, truth, args.tolerance)
        reports.append({"user": user, **report.to_dict()})
    if not reports:
        raise EmptyInput("no users common to both files")
    sys.stdout.write(dumps_documents(reports))
    return 0


def _cmd_bench(args) -> int:
    from .bench import run_bench

    kv = parse_kv_config(Path(args.config).read_text(encoding="utf-8"))
    text, data = run_bench(kv)
    print(text)
    if args.json:
        Path(args.json).write_text(json.dumps(data, indent=2) + "\n",
                                   encoding="utf-8")
    return 0


_COMMANDS = {
    "infer": _cmd_infer,
    "gen": _cmd_gen,
    "eval": _cmd_eval,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InstanceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
