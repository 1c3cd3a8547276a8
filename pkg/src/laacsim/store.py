"""Bit-exact persistence and replay of deployment records.

A record bundle is a directory holding samples.csv (fixed-point, six
significant digits), events.json and meta.json.  Writes are atomic
(temp file + rename); reads are lenient about missing sidecars so that
externally recorded force logs can still be analyzed.
"""

from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, List, Union

from .telemetry import (DeploymentRecord, EventKind, PhaseEvent,
                        TelemetrySample, format_fixed, validate_trace)

logger = logging.getLogger(__name__)

SAMPLES_FILE = "samples.csv"
EVENTS_FILE = "events.json"
META_FILE = "meta.json"
CSV_HEADER = "t_s,force_N,disp_mm"


@dataclass(frozen=True)
class RecordBundle:
    path: Path


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _event_to_dict(e: PhaseEvent) -> dict:
    return {"kind": e.kind.value, "t": e.t,
            "displacement": e.displacement, "force": e.force}


def _event_from_dict(d: dict) -> PhaseEvent:
    try:
        kind = EventKind(d["kind"])
    except ValueError:
        raise ValueError(f"unknown event kind: {d.get('kind')!r}") from None
    return PhaseEvent(kind, d["t"], d["displacement"], d["force"])


def write_record(record: DeploymentRecord, path: Union[str, Path],
                 force: bool = False) -> RecordBundle:
    """Persist a record as a bundle directory at ``path``.

    Refuses to overwrite an existing bundle unless ``force`` is set.
    """
    path = Path(path)
    if path.exists() and any(path.iterdir()) and not force:
        raise FileExistsError(f"record bundle already exists: {path} (use force)")
    try:
        path.mkdir(parents=True, exist_ok=True)
        rows = [CSV_HEADER]
        rows.extend(f"{format_fixed(s.t)},{format_fixed(s.force)},"
                    f"{format_fixed(s.displacement)}" for s in record.samples)
        _atomic_write(path / SAMPLES_FILE, "\n".join(rows) + "\n")
        events = {"truth_events": [_event_to_dict(e) for e in record.truth_events],
                  "detected_events": [_event_to_dict(e) for e in record.detected_events]}
        _atomic_write(path / EVENTS_FILE, json.dumps(events, indent=1) + "\n")
        _atomic_write(path / META_FILE, json.dumps(record.meta, indent=1) + "\n")
    except OSError as exc:
        raise OSError(f"failed to write record bundle at {path}: {exc}") from exc
    return RecordBundle(path=path)


def read_record(path: Union[str, Path]) -> DeploymentRecord:
    """Load a record bundle; exact inverse of write_record.

    Missing events.json or meta.json load as empty (with a warning);
    malformed or invalid sample data is rejected.
    """
    path = Path(path)
    csv_path = path / SAMPLES_FILE
    if not csv_path.exists():
        raise FileNotFoundError(f"no {SAMPLES_FILE} in {path}")
    samples: List[TelemetrySample] = []
    lines = csv_path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip() != CSV_HEADER:
        raise ValueError(f"{csv_path}: missing or wrong header")
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise ValueError(f"{csv_path}:{i}: malformed CSV row (expected 3 fields)")
        try:
            t, f, d = (float(p) for p in parts)
        except ValueError:
            raise ValueError(f"{csv_path}:{i}: unparseable CSV row") from None
        samples.append(TelemetrySample(t, f, d))

    report = validate_trace(samples)
    if not report.ok:
        raise ValueError(f"{csv_path}: invalid trace: {report.violations[0]}")

    truth: List[PhaseEvent] = []
    detected: List[PhaseEvent] = []
    events_path = path / EVENTS_FILE
    if events_path.exists():
        payload = json.loads(events_path.read_text(encoding="utf-8"))
        truth = [_event_from_dict(d) for d in payload.get("truth_events", [])]
        detected = [_event_from_dict(d) for d in payload.get("detected_events", [])]
    else:
        logger.warning("%s: no %s, loading with empty event lists", path, EVENTS_FILE)

    meta_path = path / META_FILE
    if meta_path.exists():
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
    else:
        logger.warning("%s: no %s, loading with empty metadata", path, META_FILE)
        meta = {}
    return DeploymentRecord(meta=meta, samples=samples,
                            truth_events=truth, detected_events=detected)


def replay(record: Union[DeploymentRecord, str, Path],
           speed_factor: float = 1.0) -> Iterator[TelemetrySample]:
    """Yield samples paced at the original intervals over speed_factor.

    A factor of 0 replays as fast as possible.  Sample values are never
    modified, reordered or dropped.
    """
    if speed_factor < 0:
        raise ValueError("speed factor must be >= 0")
    if not isinstance(record, DeploymentRecord):
        record = read_record(record)
    prev_t = None
    for s in record.samples:
        if speed_factor > 0 and prev_t is not None:
            time.sleep((s.t - prev_t) / speed_factor)
        prev_t = s.t
        yield s
