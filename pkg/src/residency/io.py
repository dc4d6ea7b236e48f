"""Trace ingestion, time quantization, and result serialization.

Input formats (UTF-8 throughout):

* CSV with header ``user,time,location`` (RFC 4180 quoting; extra columns
  are ignored).
* JSONL with one ``{"user", "time", "location"}`` object per line.

Timestamps are ISO dates or date-times; a bare date means midnight UTC and
zoneless date-times are assumed UTC. Output documents are JSON with a fixed
key order, so identical inputs and flags yield byte-identical files.
"""

from __future__ import annotations

import csv
import datetime
import io as _io
import json
from dataclasses import dataclass

from .errors import ConfigError, EmptyInput, ParseError
from .model import (
    UNKNOWN,
    Alphabet,
    LocationHistory,
    ResidenceHistory,
    ResidenceSegment,
)

UTC = datetime.timezone.utc


@dataclass(frozen=True)
class ObservationRecord:
    user: str
    time: datetime.datetime  # timezone-aware, UTC
    location: str


@dataclass(frozen=True)
class RunManifest:
    """Echo of the configuration that produced an output document."""

    algorithm: str
    unit_duration: int = 1
    input_path: str | None = None
    input_format: str | None = None
    date_range: tuple[str, str] | None = None
    rho: int | None = None
    mode: str | None = None
    q_interpretation: str | None = None
    interval_length: int | None = None
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "input": self.input_path,
            "format": self.input_format,
            "unit_duration": self.unit_duration,
            "date_range": list(self.date_range) if self.date_range else None,
            "rho": self.rho,
            "mode": self.mode,
            "algorithm": self.algorithm,
            "q_interpretation": self.q_interpretation,
            "interval_length": self.interval_length,
            "seed": self.seed,
        }


def parse_timestamp(text: str, line: int | None = None) -> datetime.datetime:
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        ts = datetime.datetime.fromisoformat(raw)
    except ValueError:
        raise ParseError(f"unparseable time {text!r}", line) from None
    if ts.tzinfo is None:
        return ts.replace(tzinfo=UTC)
    return ts.astimezone(UTC)


def _make_record(user, time_text, location, line) -> ObservationRecord:
    if not user:
        raise ParseError("missing user", line)
    if not location:
        raise ParseError("missing location", line)
    if not time_text:
        raise ParseError("missing time", line)
    return ObservationRecord(str(user), parse_timestamp(str(time_text), line),
                             str(location))


def _parse_csv(stream) -> list[ObservationRecord]:
    reader = csv.DictReader(stream)
    if reader.fieldnames is None:
        raise EmptyInput("no CSV header")
    missing = {"user", "time", "location"} - set(reader.fieldnames)
    if missing:
        raise ParseError(f"missing column(s): {', '.join(sorted(missing))}", 1)
    records = []
    for row in reader:
        line = reader.line_num
        records.append(_make_record(row.get("user"), row.get("time"),
                                    row.get("location"), line))
    return records


def _parse_jsonl(stream) -> list[ObservationRecord]:
    records = []
    for line_no, line in enumerate(stream, 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON ({exc.msg})", line_no) from None
        if not isinstance(obj, dict):
            raise ParseError("expected a JSON object", line_no)
        records.append(_make_record(obj.get("user"), obj.get("time"),
                                    obj.get("location"), line_no))
    return records


def parse_observations(stream, format: str) -> dict[str, list[ObservationRecord]]:
    """Parse a trace stream into per-user record lists, sorted by time.

    Users come back in sorted order; within a user, records are sorted by
    timestamp with the input order preserved among ties.
    """
    if isinstance(stream, (str, bytes)):
        stream = _io.StringIO(stream if isinstance(stream, str)
                              else stream.decode("utf-8"))
    fmt = format.lower()
    if fmt == "csv":
        records = _parse_csv(stream)
    elif fmt == "jsonl":
        records = _parse_jsonl(stream)
    else:
        raise ValueError(f"unknown format {format!r}")
    if not records:
        raise EmptyInput("input contains no observations")
    grouped: dict[str, list[ObservationRecord]] = {}
    for rec in records:
        grouped.setdefault(rec.user, []).append(rec)
    return {user: sorted(grouped[user], key=lambda r: r.time)
            for user in sorted(grouped)}


def build_alphabet(records) -> Alphabet:
    """Alphabet over the labels appearing in ``records``, sorted for stable ids."""
    return Alphabet(tuple(sorted({rec.location for rec in records})))


def quantize(records, alphabet: Alphabet, unit_duration: int = 1,
             date_range: tuple[datetime.date, datetime.date] | None = None
             ) -> LocationHistory:
    """Collapse observations into one location per time unit.

    Units run from the range start (default: the day of the earliest
    observation) to the range end (day of the latest); a unit's value is the
    majority location among its observations, ties going to the location
    observed earliest within the unit, and units without observations are
    UNKNOWN. Records outside an explicit range are dropped.
    """
    if not records:
        raise EmptyInput("no observations to quantize")
    if unit_duration < 1:
        raise ValueError("unit_duration must be >= 1")
    if date_range is not None:
        start, end = date_range
        if end < start:
            raise ValueError("date range end precedes start")
        records = [r for r in records if start <= r.time.date() <= end]
        if not records:
            raise EmptyInput("no observations inside the requested range")
    else:
        start = min(r.time for r in records).date()
        end = max(r.time for r in records).date()
    span_days = (end - start).days + 1
    n_units = -(-span_days // unit_duration)  # ceil

    per_unit: dict[int, dict[str, list]] = {}
    for rec in records:
        unit = (rec.time.date() - start).days // unit_duration
        stats = per_unit.setdefault(unit, {})
        entry = stats.get(rec.location)
        if entry is None:
            stats[rec.location] = [1, rec.time]
        else:
            entry[0] += 1
            if rec.time < entry[1]:
                entry[1] = rec.time

    units = []
    for unit in range(n_units):
        stats = per_unit.get(unit)
        if not stats:
            units.append(UNKNOWN)
            continue
        top = max(count for count, _ in stats.values())
        label = min((earliest, label) for label, (count, earliest)
                    in stats.items() if count == top)[1]
        units.append(alphabet.id_of(label))
    return LocationHistory(units, len(alphabet), epoch=start,
                           unit_duration=unit_duration)


def json_number(value: float):
    value = float(value)
    return int(value) if value.is_integer() else value


def segments_to_json(residence: ResidenceHistory, alphabet: Alphabet,
                     epoch: datetime.date, unit_duration: int) -> list[dict]:
    """Segment list with inclusive calendar date spans."""
    segments = []
    for seg in residence.segments:
        start = epoch + datetime.timedelta(days=(seg.start_unit - 1) * unit_duration)
        end = epoch + datetime.timedelta(
            days=(seg.start_unit - 1 + seg.length) * unit_duration - 1)
        segments.append({
            "start": start.isoformat(),
            "end": end.isoformat(),
            "location": alphabet.label_of(seg.location),
        })
    return segments


def render_solution(user: str, solution, alphabet: Alphabet,
                    epoch: datetime.date, unit_duration: int,
                    manifest: RunManifest) -> dict:
    """Serializable document for one user's solution; key order is fixed."""
    cfg = solution.config
    rho = getattr(cfg, "rho", None)
    mode = getattr(cfg, "mode", None)
    return {
        "user": user,
        "algorithm": solution.algorithm.value,
        "rho": rho,
        "mode": mode.value if mode is not None else None,
        "score": json_number(solution.score),
        "segments": segments_to_json(solution.residence, alphabet, epoch,
                                     unit_duration),
        "manifest": manifest.to_dict(),
    }


def residence_from_document(doc: dict, alphabet: Alphabet,
                            epoch: datetime.date,
                            unit_duration: int) -> ResidenceHistory:
    """Inverse of :func:`render_solution` for the segments block."""
    segments = []
    for seg in doc["segments"]:
        start = datetime.date.fromisoformat(seg["start"])
        end = datetime.date.fromisoformat(seg["end"])
        start_unit = (start - epoch).days // unit_duration + 1
        length = ((end - start).days + 1) // unit_duration
        segments.append(ResidenceSegment(start_unit, length,
                                         alphabet.id_of(seg["location"])))
    return ResidenceHistory(tuple(segments))


def dumps_documents(docs) -> str:
    """Canonical JSON text: two-space indent, fixed key order, one trailing
    newline. Byte-stable for identical inputs."""
    return json.dumps(docs, indent=2, ensure_ascii=True) + "\n"


def observations_to_jsonl(history: LocationHistory, alphabet: Alphabet,
                          user: str) -> str:
    """One JSONL row per observed unit (UNKNOWN units produce no row)."""
    lines = []
    for idx, value in enumerate(history.values):
        if value == UNKNOWN:
            continue
        day = history.epoch + datetime.timedelta(days=idx * history.unit_duration)
        lines.append(json.dumps({
            "user": user,
            "time": day.isoformat(),
            "location": alphabet.label_of(int(value)),
        }, ensure_ascii=True))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_kv_config(text: str) -> dict[str, str]:
    """Flat ``key = value`` file: one pair per line, ``#`` comments, blank
    lines ignored."""
    out: dict[str, str] = {}
    for line_no, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ParseError(f"expected 'key = value', got {stripped!r}", line_no)
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ParseError("empty key", line_no)
        out[key] = value
    return out


def _convert(kv: dict[str, str], key: str, conv, default=None, required=False):
    if key not in kv:
        if required:
            raise ConfigError(f"missing config key {key!r}")
        return default
    try:
        return conv(kv[key])
    except ValueError:
        raise ConfigError(f"bad value for {key!r}: {kv[key]!r}") from None


def gen_config_from_kv(kv: dict[str, str], seed: int | None = None):
    """Build a :class:`residency.synth.GenConfig` from parsed key-values."""
    from .synth import GenConfig

    cfg = GenConfig(
        n_units=_convert(kv, "n_units", int, required=True),
        n_locations=_convert(kv, "n_locations", int, required=True),
        rho_truth=_convert(kv, "rho_truth", int, required=True),
        max_segment_length=_convert(kv, "max_segment_length", int, required=True),
        p_travel=_convert(kv, "p_travel", float, 0.0),
        max_trip_length=_convert(kv, "max_trip_length", int, 1),
        p_missing=_convert(kv, "p_missing", float, 0.0),
        seed=_convert(kv, "seed", int, 0),
    )
    if seed is not None:
        import dataclasses

        cfg = dataclasses.replace(cfg, seed=seed)
    return cfg
