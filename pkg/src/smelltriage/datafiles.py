"""JSON-lines output files with a header line carrying the run seed."""

from __future__ import annotations

import json
from pathlib import Path


def write_jsonl(path: str | Path, records: list[dict], seed: int | None = None,
                kind: str = "") -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        if seed is not None:
            fh.write(json.dumps({"_header": {"kind": kind, "seed": seed}},
                                sort_keys=True) + "\n")
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def read_jsonl(path: str | Path) -> tuple[dict | None, list[dict]]:
    """Returns (header or None, records); header lines carry a `_header` key."""
    header = None
    records = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        if isinstance(rec, dict) and "_header" in rec:
            header = rec["_header"]
        else:
            records.append(rec)
    return header, records
