#!/usr/bin/env python3
"""Produce a demo results.csv: regret sweep, cover verification, and the
claim oracles, all in one output directory.

Usage: python scripts/run_demo_sweep.py [outdir]

The CSV feeds the report package: `report --in <outdir>/results.csv --out figs`.
"""

import json
import math
import sys
import time

import numpy as np

from seqcover import complexity, covers, oracles
from seqcover.config import ExperimentConfig
from seqcover.sweep import ResultRecord, game_labels, sweep, write_rows

OUT = sys.argv[1] if len(sys.argv) > 1 else "demo_results"

BASE = {
    "T_list": [2**k for k in range(6, 12)],
    "trials": 4,
    "seed": 2024,
    "delta": 0.05,
    "class": {"kind": "threshold1d", "grid_denominator": 2**20},
    "loss": {"kind": "log"},
    "predictor": {"kind": "stb_tree", "alpha": "1/T"},
    "distribution": {"kind": "iid"},
    "adversary": {"kind": "realizable"},
}


def mistake_sweep_rows(cfg):
    """One-inclusion mistake counts across the same horizons."""
    rows = []
    labels = dict(game_labels(cfg), predictor="one_inclusion")
    for T in cfg.t_list:
        for trial in range(cfg.trials):
            rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, T, trial)))
            draw = [int(v) for v in rng.integers(0, 2**20 + 1, size=T)]
            from seqcover.predictors import threshold_mistake_counts

            _, counts = threshold_mistake_counts(draw)
            rows.append(
                ResultRecord(
                    kind="oracle", T=T, trial=trial, seed=cfg.seed,
                    metric_name="sup_behavior_mistakes", metric_x=float(T),
                    metric_value=float(counts.max()), labels=labels,
                )
            )
    return rows


def cover_rows(cfg):
    rows = []
    cls = cfg.hypothesis_class()
    for T in cfg.t_list:
        m_bits = covers.tree_index_bits(1, 2, T, cfg.delta)
        rows.append(
            ResultRecord(
                kind="cover", T=T, trial=0, seed=cfg.seed,
                cover_construction="realization_tree",
                cover_size_log2=float(m_bits),
                metric_name="cover_size", metric_x=float(T), metric_value=float(m_bits),
                labels=game_labels(cfg),
            )
        )
    return rows


def tail_rows(cfg):
    from seqcover.predictors import threshold_mistake_counts

    T, orders = 512, 400
    rng = np.random.default_rng(cfg.seed)
    points = np.asarray(sorted(rng.choice(2**20, size=T, replace=False)))
    thresholds = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0]
    exceed = np.zeros((len(thresholds), T + 1))
    for _ in range(orders):
        order = points[rng.permutation(T)]
        _, counts = threshold_mistake_counts([int(v) for v in order])
        for i, k in enumerate(thresholds):
            exceed[i] += counts >= k
    rows = []
    for i, k in enumerate(thresholds):
        rows.append(
            ResultRecord(
                kind="oracle", T=T, trial=i, seed=cfg.seed,
                metric_name="mistake_tail", metric_x=k,
                metric_value=float(exceed[i].max() / orders),
                labels=game_labels(cfg),
            )
        )
    return rows


def main():
    start = time.time()
    cfg = ExperimentConfig.from_dict(dict(BASE, out=OUT))
    records = sweep(cfg, progress=False)
    records += mistake_sweep_rows(cfg)
    records += cover_rows(cfg)
    records += tail_rows(cfg)
    import os

    os.makedirs(OUT, exist_ok=True)
    write_rows(f"{OUT}/results.csv", records)
    with open(f"{OUT}/manifest.json", "w") as fh:
        json.dump({"config": BASE, "rows": len(records)}, fh, indent=2)
    print(json.dumps({"out": OUT, "rows": len(records), "seconds": round(time.time() - start, 1)}))


if __name__ == "__main__":
    main()
