"""Command-line entry points.

Subcommands: game, sweep, cover-build, cover-verify, oracle, complexity.
Configuration is one JSON file (--config); global flags override its seed,
output directory, thread count and log-loss clamp.  Outputs are results.csv
(versioned schema), manifest.json (resolved config + build info), and
JSON-lines progress on stderr.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
import sys

import click
import numpy as np

from . import __version__, complexity, covers, oracles
from .config import ExperimentConfig
from .domain import class_from_config
from .errors import SeqcoverError
from .losses import parse_rational
from .sweep import ResultRecord, SCHEMA_VERSION, game_labels, run_one_trial, sweep, write_rows


def _load_config(path, seed, out, threads, clamp_eps) -> ExperimentConfig:
    cfg = ExperimentConfig.load(path)
    if seed is not None:
        cfg.seed = seed
    if out is not None:
        cfg.out = out
    if threads is not None:
        cfg.threads = threads
    if clamp_eps is not None:
        cfg.clamp_eps = clamp_eps
    return cfg


def _write_manifest(cfg: ExperimentConfig, extra=None) -> None:
    os.makedirs(cfg.out, exist_ok=True)
    manifest = {
        "version": __version__,
        "schema": SCHEMA_VERSION,
        "numpy": np.__version__,
        "config": cfg.raw,
        "seed": cfg.seed,
    }
    if extra:
        manifest.update(extra)
    with open(os.path.join(cfg.out, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=str)


GLOBAL_OPTIONS = [
    click.option("--config", "config_path", required=True, type=click.Path(exists=True)),
    click.option("--seed", type=int, default=None, help="override the config seed"),
    click.option("--out", type=str, default=None, help="output directory"),
    click.option("--threads", type=int, default=None),
    click.option("--clamp-eps", "clamp_eps", type=str, default=None,
                 help="log-loss clamp, e.g. 1/4096 or 1/T"),
]


def with_global_options(fn):
    for opt in reversed(GLOBAL_OPTIONS):
        fn = opt(fn)
    return fn


@click.group()
def main():
    """Sequential-cover experiments."""


@main.command()
@with_global_options
def game(config_path, seed, out, threads, clamp_eps):
    """Play one game per trial at the configured horizon."""
    cfg = _load_config(config_path, seed, out, threads, clamp_eps)
    records = [run_one_trial(cfg, cfg.T, trial) for trial in range(cfg.trials)]
    _write_manifest(cfg)
    write_rows(os.path.join(cfg.out, "results.csv"), records)
    for rec in records:
        click.echo(json.dumps(rec.row()))


@main.command("sweep")
@with_global_options
def sweep_cmd(config_path, seed, out, threads, clamp_eps):
    """Run the (T_list x trials) sweep and write results.csv."""
    cfg = _load_config(config_path, seed, out, threads, clamp_eps)
    records = sweep(cfg)
    _write_manifest(cfg)
    write_rows(os.path.join(cfg.out, "results.csv"), records)
    ok = sum(1 for r in records if r.status == "ok")
    click.echo(json.dumps({"rows": len(records), "ok": ok, "out": cfg.out}))


def _build_cover(cfg: ExperimentConfig, T: int, rng):
    cls = cfg.hypothesis_class()
    spec = dict(cfg.cover_spec or {"construction": "realization_tree"})
    construction = spec.get("construction", "realization_tree")
    delta = float(spec.get("delta", cfg.delta))
    if construction == "realization_tree":
        stream = cfg.distribution(cls).sampler()(rng, T)
        cover = covers.realization_tree_cover(cls, stream, spec.get("m_bits"), delta)
        return cls, cover
    if construction == "star_littlestone":
        cover = covers.star_littlestone_cover(
            cls, int(spec["s"]), int(spec.get("d_cap", 4)), T, delta
        )
        return cls, cover
    if construction == "error_pattern":
        rule = covers.one_inclusion_rule(cls)
        err = spec.get("err_budget")
        if err is None:
            err = math.ceil(5 * complexity.vc_dimension(cls) * math.log(T) + math.log(1 / delta))
        cover = covers.error_pattern_cover(rule, T, int(err))
        return cls, cover
    if construction == "fat_epochs":
        alpha = parse_rational(spec.get("alpha", cfg.alpha), horizon=T)
        from fractions import Fraction

        cover = covers.fat_shattering_cover(cls, Fraction(alpha).limit_denominator(1 << 30), T, delta)
        return cls, cover
    raise SeqcoverError(f"unknown cover construction {construction!r}")


@main.command("cover-build")
@with_global_options
def cover_build(config_path, seed, out, threads, clamp_eps):
    """Build the configured cover and write its manifest."""
    cfg = _load_config(config_path, seed, out, threads, clamp_eps)
    rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, cfg.T, 0)))
    cls, cover = _build_cover(cfg, cfg.T, rng)
    if cover is covers.FAILED:
        _write_manifest(cfg, {"cover": "FAILED"})
        click.echo(json.dumps({"cover": "FAILED"}))
        sys.exit(1)
    desc = cover.describe()
    desc["size_log2"] = float(math.log2(int(cover.size))) if cover.size else 0.0
    _write_manifest(cfg, {"cover": desc})
    click.echo(json.dumps(desc))


@main.command("cover-verify")
@with_global_options
@click.option("--trials", type=int, default=None)
def cover_verify(config_path, seed, out, threads, clamp_eps, trials):
    """Monte-Carlo check of the covering property; writes one CSV row."""
    cfg = _load_config(config_path, seed, out, threads, clamp_eps)
    rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, cfg.T, 0)))
    cls, cover = _build_cover(cfg, cfg.T, rng)
    if cover is covers.FAILED:
        click.echo(json.dumps({"cover": "FAILED"}))
        sys.exit(1)
    if cover.horizon is None:
        cover.horizon = cfg.T
    n_trials = trials if trials is not None else max(cfg.trials, 1)
    alpha = cover.alpha
    sampler = cfg.distribution(cls).sampler()
    result = covers.verify_cover(cover, cls, sampler, alpha, n_trials, cfg.seed)
    rec = ResultRecord(
        kind="cover",
        T=cfg.T,
        trial=0,
        seed=cfg.seed,
        cover_construction=cover.construction,
        cover_size_log2=float(math.log2(int(cover.size))) if cover.size else 0.0,
        metric_name="cover_failure_rate",
        metric_x=float(cover.delta),
        metric_value=result.failure_rate,
        labels=game_labels(cfg),
    )
    _write_manifest(cfg, {"cover": cover.describe()})
    write_rows(os.path.join(cfg.out, "results.csv"), [rec])
    click.echo(json.dumps({"failure_rate": result.failure_rate, "trials": result.trials,
                           "witnesses": result.witnesses[:3]}))


ORACLE_CLAIMS = (
    "coupon_collector",
    "game_value",
    "bayes_threshold",
    "double_sampling",
    "type_k",
    "shtarkov_monotonicity",
    "permutation_tail",
)


@main.command("oracle")
@with_global_options
@click.option("--claim", type=click.Choice(ORACLE_CLAIMS), required=True)
def oracle_cmd(config_path, seed, out, threads, clamp_eps, claim):
    """Run one named claim oracle; appends rows and echoes JSON lines."""
    cfg = _load_config(config_path, seed, out, threads, clamp_eps)
    params = dict(cfg.raw.get("oracle", {}))
    results = run_oracle_claim(claim, cfg, params)
    _write_manifest(cfg)
    records = []
    for i, res in enumerate(results):
        click.echo(json.dumps(res.as_dict()))
        records.append(
            ResultRecord(
                kind="oracle",
                T=cfg.T,
                trial=i,
                seed=cfg.seed,
                status="ok" if res.passed else "bound_violated",
                metric_name=res.name,
                metric_x=res.bound,
                metric_value=res.measured,
                labels=game_labels(cfg),
            )
        )
    write_rows(os.path.join(cfg.out, "results.csv"), records)
    if not all(r.passed for r in results):
        sys.exit(1)


def run_oracle_claim(claim, cfg: ExperimentConfig, params: dict) -> list[oracles.OracleResult]:
    T = int(params.get("T", cfg.T))
    trials = int(params.get("trials", max(cfg.trials, 1)))
    seed = cfg.seed
    if claim == "coupon_collector":
        out = []
        for c in params.get("c_values", [1, 2, 3]):
            measured = oracles.coupon_collector_tail(T, float(c), trials, seed)
            sigma = math.sqrt(math.exp(-c) * (1 - math.exp(-c)) / trials)
            out.append(
                oracles.OracleResult(
                    f"coupon_tail_c{c}", measured, math.exp(-c) + 3 * sigma, "<=", trials, seed
                )
            )
        return out
    if claim == "game_value":
        t_max = int(params.get("T_max", T))
        values = oracles.threshold_game_value(t_max)
        worst = min(
            (float(values[t]) - 0.01 * math.log(t) for t in range(2, t_max + 1)),
            default=0.0,
        )
        return [oracles.OracleResult("game_value_margin", worst, 0.0, ">=", t_max, seed)]
    if claim == "bayes_threshold":
        measured = oracles.bayes_threshold_errors(T, trials, seed)
        lo = 0.01 * math.log(T)
        hi = 2 * math.log(T) + 5
        return [
            oracles.OracleResult("bayes_threshold_lower", measured, lo, ">=", trials, seed),
            oracles.OracleResult("bayes_threshold_upper", measured, hi, "<=", trials, seed),
        ]
    if claim == "double_sampling":
        cls = cfg.hypothesis_class()
        measured = oracles.double_sampling_gap(cls, T, trials, seed)
        bound = 3 * cls.budget + float(params.get("slack", 10))
        return [oracles.OracleResult("double_sampling_gap", measured, bound, "<=", trials, seed)]
    if claim == "type_k":
        cls = cfg.hypothesis_class()
        dist = cfg.distribution(cls)
        if dist.kind != "product_type_k":
            raise SeqcoverError("type_k oracle needs a product_type_k distribution")
        from .game import _marginal_sampler

        samplers = [_marginal_sampler(m) for m in dist.marginals]
        measured = oracles.type_k_error_bound(cls, samplers, list(dist.assignment), T, trials, seed)
        k = len(dist.marginals)
        bound = k * complexity.vc_dimension(cls) * math.log(T / k) * float(params.get("slack", 4))
        return [oracles.OracleResult("type_k_errors", measured, bound, "<=", trials, seed)]
    if claim == "shtarkov_monotonicity":
        cls = cfg.hypothesis_class()
        rng = np.random.default_rng(seed)
        sampler = cfg.distribution(cls).sampler()
        ok = 0
        for _ in range(trials):
            large = sampler(rng, T)
            keep = max(1, T // 2)
            small = [large[i] for i in sorted(rng.choice(T, size=keep, replace=False))]
            ok += oracles.monotonicity_check(cls, small, large)
        return [oracles.OracleResult("shtarkov_monotonicity", ok / trials, 1.0, ">=", trials, seed)]
    if claim == "permutation_tail":
        from .predictors import permutation_error_tail

        cls = cfg.hypothesis_class()
        rng = np.random.default_rng(seed)
        draw = cfg.distribution(cls).sampler()(rng, T)
        star = complexity.star_number(cls)
        k = 4 * float(star) * math.log(T) + math.log(1 / 0.05)
        target = params.get("hypothesis")
        if isinstance(target, list):
            target = tuple(target)
        if target is None:
            from .game import _draw_hypothesis

            target = _draw_hypothesis(cls, draw, rng)
        tails = permutation_error_tail(cls, draw, target, trials, [k], seed)
        sigma = math.sqrt(0.05 * 0.95 / trials)
        return [
            oracles.OracleResult("permutation_tail", tails[k], 0.05 + 3 * sigma, "<=", trials, seed)
        ]
    raise SeqcoverError(f"unknown claim {claim!r}")


@main.command("complexity")
@with_global_options
@click.option("--star-scales", "star_scales", type=str, default="")
@click.option("--fat-scales", "fat_scales", type=str, default="")
def complexity_cmd(config_path, seed, out, threads, clamp_eps, star_scales, fat_scales):
    """Print the complexity report of the configured class."""
    cfg = _load_config(config_path, seed, out, threads, clamp_eps)
    cls = cfg.hypothesis_class()
    stars = [int(s) for s in star_scales.split(",") if s]
    fats = [s for s in fat_scales.split(",") if s]
    report = complexity.complexity_report(cls, stars, fats)
    payload = dataclasses.asdict(report)
    if payload["star"] is not None and math.isinf(payload["star"]):
        payload["star"] = "inf"
    click.echo(json.dumps(payload, default=str))


if __name__ == "__main__":
    main()
