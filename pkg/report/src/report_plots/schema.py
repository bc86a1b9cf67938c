"""Versioned-CSV intake: this package renders exactly one schema and
refuses anything else."""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass

SUPPORTED_SCHEMA = "seqcover-results-v1"


class SchemaMismatch(Exception):
    pass


@dataclass
class ResultTable:
    rows: list[dict]
    digest: str
    path: str


def load_results(path: str) -> ResultTable:
    with open(path, "rb") as fh:
        raw = fh.read()
    digest = hashlib.sha256(raw).hexdigest()[:12]
    text = raw.decode()
    lines = text.splitlines()
    if not lines or not lines[0].startswith(f"# schema={SUPPORTED_SCHEMA}"):
        head = lines[0] if lines else "<empty>"
        raise SchemaMismatch(f"{path}: expected {SUPPORTED_SCHEMA}, found {head!r}")
    rows = list(csv.DictReader(lines[1:]))
    return ResultTable(rows=rows, digest=digest, path=path)


def series_key(row: dict) -> str:
    parts = [row.get(k, "") for k in ("class", "loss", "predictor", "adversary", "distribution")]
    return "/".join(p for p in parts if p) or "default"


def numeric(row: dict, key: str):
    value = row.get(key, "")
    if value in ("", None):
        return None
    try:
        return float(value)
    except ValueError:
        return None
