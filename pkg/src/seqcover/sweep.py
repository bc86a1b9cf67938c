"""Sweep orchestration and the versioned results CSV.

One row per (T, trial); partial failures become rows with status != ok and
are never dropped.  Rows are written ordered by (T, trial) whatever the
execution order, and every random stream is derived from (seed, T, trial),
so a repeated run is byte-identical apart from the wall-time column.
"""

from __future__ import annotations

import csv
import io
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import ExperimentConfig
from .game import run_game

SCHEMA_VERSION = "seqcover-results-v1"

COLUMNS = [
    "schema",
    "kind",
    "T",
    "trial",
    "seed",
    "class",
    "loss",
    "predictor",
    "adversary",
    "distribution",
    "cover_construction",
    "cover_size_log2",
    "regret",
    "regret_vs_target",
    "mistakes",
    "metric_name",
    "metric_x",
    "metric_value",
    "status",
    "wall_time_s",
]


@dataclass
class ResultRecord:
    kind: str
    T: int
    trial: int
    seed: int
    status: str = "ok"
    regret: Optional[float] = None
    regret_vs_target: Optional[float] = None
    mistakes: Optional[int] = None
    cover_construction: str = ""
    cover_size_log2: Optional[float] = None
    metric_name: str = ""
    metric_x: Optional[float] = None
    metric_value: Optional[float] = None
    labels: dict = None
    wall_time_s: float = 0.0

    def row(self) -> dict:
        labels = self.labels or {}
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, float):
                return repr(v)
            return v
        return {
            "schema": SCHEMA_VERSION,
            "kind": self.kind,
            "T": self.T,
            "trial": self.trial,
            "seed": self.seed,
            "class": labels.get("class", ""),
            "loss": labels.get("loss", ""),
            "predictor": labels.get("predictor", ""),
            "adversary": labels.get("adversary", ""),
            "distribution": labels.get("distribution", ""),
            "cover_construction": self.cover_construction,
            "cover_size_log2": fmt(self.cover_size_log2),
            "regret": fmt(self.regret),
            "regret_vs_target": fmt(self.regret_vs_target),
            "mistakes": fmt(self.mistakes),
            "metric_name": self.metric_name,
            "metric_x": fmt(self.metric_x),
            "metric_value": fmt(self.metric_value),
            "status": self.status,
            "wall_time_s": f"{self.wall_time_s:.3f}",
        }


def write_rows(path: str, records: list[ResultRecord]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# schema={SCHEMA_VERSION}\n")
        writer = csv.DictWriter(fh, fieldnames=COLUMNS)
        writer.writeheader()
        for rec in sorted(records, key=lambda r: (r.T, r.trial, r.kind, r.metric_name, r.metric_x or 0)):
            writer.writerow(rec.row())


def read_rows(path: str) -> list[dict]:
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith(f"# schema={SCHEMA_VERSION}"):
            raise ValueError(f"unsupported results schema: {first.strip()!r}")
        return list(csv.DictReader(fh))


def _progress(payload: dict) -> None:
    print(json.dumps(payload), file=sys.stderr, flush=True)


def game_labels(config: ExperimentConfig) -> dict:
    return {
        "class": config.class_spec.get("kind", ""),
        "loss": config.loss_spec.get("kind", "log"),
        "predictor": config.predictor_spec.get("kind", ""),
        "adversary": config.adversary_spec.get("kind", ""),
        "distribution": config.distribution_spec.get("kind", ""),
    }


def run_one_trial(config: ExperimentConfig, T: int, trial: int) -> ResultRecord:
    start = time.perf_counter()
    labels = game_labels(config)
    try:
        cls = config.hypothesis_class()
        loss_spec = config.loss(T)
        rng = np.random.default_rng(np.random.SeedSequence((config.seed, T, trial)))
        transcript = run_game(
            cls,
            loss_spec,
            config.learner_factory(cls, T),
            config.distribution(cls),
            config.adversary(),
            T,
            rng,
        )
        return ResultRecord(
            kind="game",
            T=T,
            trial=trial,
            seed=config.seed,
            regret=transcript.regret,
            regret_vs_target=transcript.regret_vs_target,
            mistakes=transcript.mistakes,
            labels=labels,
            wall_time_s=time.perf_counter() - start,
        )
    except Exception as exc:  # recorded, never dropped
        return ResultRecord(
            kind="game",
            T=T,
            trial=trial,
            seed=config.seed,
            status=f"error:{type(exc).__name__}",
            metric_name=str(exc)[:120],
            labels=labels,
            wall_time_s=time.perf_counter() - start,
        )


def sweep(config: ExperimentConfig, progress: bool = True) -> list[ResultRecord]:
    jobs = [(T, trial) for T in config.t_list for trial in range(config.trials)]
    records = []
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            for rec in pool.map(lambda jt: run_one_trial(config, *jt), jobs):
                records.append(rec)
                if progress:
                    _progress({"event": "trial", "T": rec.T, "trial": rec.trial, "status": rec.status})
    else:
        for T, trial in jobs:
            rec = run_one_trial(config, T, trial)
            records.append(rec)
            if progress:
                _progress({"event": "trial", "T": rec.T, "trial": rec.trial, "status": rec.status})
    return records
