"""Report records: one canonical JSON object per line.

Big integers travel as decimal strings so no consumer ever rounds them.
Everything that varies between runs (wall clock, elapsed time) lives under
``timestamps`` and can be suppressed, so identical inputs give identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from datetime import datetime, timezone

SCHEMA_VERSION = 1
KINDS = ("coeff", "verify", "scan", "fermat", "hecke", "flag")


@dataclass(frozen=True)
class ReportRecord:
    kind: str
    payload: dict
    timestamps: dict | None = None
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown record kind {self.kind!r}")
        if not isinstance(self.schema_version, int):
            raise ValueError("schema_version must be an integer")


def stamp(elapsed=None, enabled=True):
    if not enabled:
        return None
    out = {"created_at": datetime.now(timezone.utc).isoformat(timespec="microseconds")}
    if elapsed is not None:
        out["elapsed"] = round(elapsed, 6)
    return out


def serialize(record):
    obj = {
        "schema_version": record.schema_version,
        "kind": record.kind,
        "payload": record.payload,
        "timestamps": record.timestamps,
    }
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def parse(line):
    obj = json.loads(line)
    if "schema_version" not in obj:
        raise ValueError("record without schema_version")
    if obj["schema_version"] != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {obj['schema_version']}")
    return ReportRecord(obj["kind"], obj["payload"], obj.get("timestamps"), obj["schema_version"])


def read_lines(text):
    return [parse(line) for line in text.splitlines() if line.strip()]


def _cell(v):
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    if v is None:
        return ""
    return str(v)


def to_csv(records):
    """Flatten record payloads into one CSV table (columns from the first record)."""
    buf = io.StringIO()
    if not records:
        return ""
    cols = list(records[0].payload)
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for rec in records:
        w.writerow([_cell(rec.payload.get(c)) for c in cols])
    return buf.getvalue()
