#!/usr/bin/env python3
"""Run every claim oracle at desk scale and print one JSON line per result.

Usage: python scripts/run_all_oracles.py
"""

import json
import math

import numpy as np

from seqcover import oracles
from seqcover.domain import SparseIndicator, Threshold1D


def main():
    results = []

    for c in (1.0, 2.0, 3.0):
        tail = oracles.coupon_collector_tail(50, c, 10_000, seed=int(c))
        sigma = math.sqrt(math.exp(-c) * (1 - math.exp(-c)) / 10_000)
        results.append(
            oracles.OracleResult(f"coupon_tail_c{int(c)}", tail, math.exp(-c) + 3 * sigma, "<=", 10_000, int(c))
        )

    values = oracles.threshold_game_value(4096)
    margin = min(float(values[t]) - 0.01 * math.log(t) for t in range(2, 4097))
    results.append(oracles.OracleResult("game_value_margin", margin, 0.0, ">=", 4096, 0))

    mean = oracles.bayes_threshold_errors(4096, 2000, seed=8)
    results.append(oracles.OracleResult("bayes_mistakes_lower", mean, 0.01 * math.log(4096), ">=", 2000, 8))
    results.append(oracles.OracleResult("bayes_mistakes_upper", mean, 2 * math.log(4096) + 5, "<=", 2000, 8))

    cls = SparseIndicator(256, 3)
    gap = oracles.double_sampling_gap(cls, 128, 500, seed=1)
    results.append(oracles.OracleResult("double_sampling_gap", gap, 3 * 3 + 10, "<=", 500, 1))

    th = Threshold1D(2**16)
    mid = 2**15
    samplers = [
        lambda rng: int(rng.integers(0, mid + 1)),
        lambda rng: int(rng.integers(mid + 1, 2**16 + 1)),
    ]
    mean_k2 = oracles.type_k_error_bound(th, samplers, [i % 2 for i in range(256)], 256, 30, seed=1)
    results.append(oracles.OracleResult("type_k2_errors", mean_k2, 2 * math.log(128) * 4, "<=", 30, 1))

    for res in results:
        print(json.dumps(res.as_dict()))
    if not all(r.passed for r in results):
        raise SystemExit(1)


if __name__ == "__main__":
    main()
