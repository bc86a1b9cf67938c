"""Experiment configuration: a JSON dict mirrored field-for-field.

A config fully determines a run byte-for-byte given the same build; every
random stream is derived from (seed, T, trial) so sweeps are reproducible
under any execution order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

from . import complexity, covers
from .domain import HypothesisClass, SparseIndicator, Threshold1D, class_from_config
from .errors import SeqcoverError
from .game import AdversarySpec, DistributionSpec
from .losses import LossSpec, parse_rational
from .predictors import (
    ConstantLearner,
    NmlLearner,
    OneInclusionLearner,
    SoaLearner,
    SparseBayesLearner,
    SparsePluginLearner,
    ThresholdTreeBayesLearner,
    TreeCoverBayesLearner,
)


@dataclass
class ExperimentConfig:
    T: int
    t_list: list[int]
    trials: int
    seed: int
    delta: float
    class_spec: dict
    loss_spec: dict
    predictor_spec: dict
    distribution_spec: dict
    adversary_spec: dict
    cover_spec: Optional[dict] = None
    alpha: object = None
    out: str = "results"
    threads: int = 1
    clamp_eps: object = None
    raw: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        T = int(data.get("T", 0) or (data.get("T_list") or [0])[0])
        t_list = [int(t) for t in data.get("T_list", [T] if T else [])]
        if not t_list:
            raise SeqcoverError("config needs T or T_list")
        return cls(
            T=T or t_list[0],
            t_list=t_list,
            trials=int(data.get("trials", 1)),
            seed=int(data.get("seed", 0)),
            delta=float(data.get("delta", 0.05)),
            class_spec=data["class"],
            loss_spec=data.get("loss", {"kind": "log"}),
            predictor_spec=data.get("predictor", {"kind": "stb_tree"}),
            distribution_spec=data.get("distribution", {"kind": "iid", "marginal": None}),
            adversary_spec=data.get("adversary", {"kind": "realizable"}),
            cover_spec=data.get("cover"),
            alpha=data.get("alpha"),
            out=data.get("out", "results"),
            threads=int(data.get("threads", 1)),
            clamp_eps=data.get("clamp_eps"),
            raw=data,
        )

    @classmethod
    def load(cls, path: str) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    # -- resolved pieces ----------------------------------------------------

    def hypothesis_class(self) -> HypothesisClass:
        return class_from_config(self.class_spec)

    def loss(self, T: int) -> LossSpec:
        spec = dict(self.loss_spec)
        if self.clamp_eps is not None:
            spec["clamp_eps"] = self.clamp_eps
        eps = spec.get("clamp_eps")
        if eps is None and spec.get("kind", "log") == "log":
            eps = "1/T"  # per-run default keeps adversarial log loss finite
        eps = parse_rational(eps, horizon=T) if eps is not None else 0.0
        return LossSpec(spec.get("kind", "log"), clamp_eps=eps)

    def distribution(self, cls: HypothesisClass) -> DistributionSpec:
        spec = dict(self.distribution_spec)
        kind = spec.pop("kind")
        if kind == "iid" and spec.get("marginal") is None:
            spec["marginal"] = default_marginal(cls)
        for key in ("multiset", "marginals", "assignment", "sequence"):
            if key in spec and spec[key] is not None:
                spec[key] = tuple(
                    tuple(v) if isinstance(v, list) else v for v in spec[key]
                )
        return DistributionSpec(kind=kind, **spec)

    def adversary(self) -> AdversarySpec:
        spec = dict(self.adversary_spec)
        kind = spec.pop("kind")
        hyp = spec.pop("hypothesis", None)
        if isinstance(hyp, list):
            hyp = tuple(hyp)
        return AdversarySpec(kind=kind, hypothesis=hyp, depth=int(spec.pop("depth", 2)))

    def learner_factory(self, cls: HypothesisClass, T: int):
        return build_learner_factory(
            self.predictor_spec, cls, T, self.delta, cover_spec=self.cover_spec
        )


def default_marginal(cls: HypothesisClass) -> dict:
    if hasattr(cls, "grid_r"):
        return {"kind": "uniform_grid", "grid_denominator": cls.grid_r}
    if isinstance(cls, SparseIndicator):
        return {"kind": "uniform_finite", "domain_size": cls.domain_size}
    if hasattr(cls, "n_points"):
        return {"kind": "uniform_finite", "domain_size": cls.n_points}
    raise SeqcoverError(f"no default marginal for {cls.kind}")


def tree_bits_for(cls: HypothesisClass, T: int, delta: float, cover_spec: Optional[dict]) -> int:
    if cover_spec and cover_spec.get("m_bits"):
        return int(cover_spec["m_bits"])
    star = complexity.star_number(cls)
    if not math.isfinite(star):
        raise SeqcoverError("tree cover budget needs a finite star number")
    return covers.tree_index_bits(complexity.vc_dimension(cls), int(star), T, delta)


def build_learner_factory(predictor_spec: dict, cls: HypothesisClass, T: int,
                          delta: float, cover_spec: Optional[dict] = None):
    """Returns a factory(features) -> Learner for one game of horizon T."""
    spec = dict(predictor_spec)
    kind = spec.get("kind", "stb_tree")
    alpha = parse_rational(spec.get("alpha", "1/T"), horizon=T)

    if kind == "one_inclusion":
        return lambda features: OneInclusionLearner(cls)
    if kind == "soa":
        s = int(spec.get("s", 2))
        return lambda features: SoaLearner(cls, s)
    if kind == "stb_tree":
        m_bits = tree_bits_for(cls, T, delta, cover_spec)
        if isinstance(cls, Threshold1D) and cls.direction == "ge":
            return lambda features: ThresholdTreeBayesLearner(cls, m_bits, alpha, T)
        return lambda features: TreeCoverBayesLearner(cls, m_bits, alpha, T)
    if kind == "nml":
        return lambda features: NmlLearner(cls, features)
    if kind == "constant":
        value = float(spec.get("value", 0.5))
        return lambda features: ConstantLearner(value)
    if kind == "sparse_bayes":
        return lambda features: SparseBayesLearner(cls, alpha)
    if kind == "sparse_plugin":
        return lambda features: SparsePluginLearner(cls, alpha)
    raise SeqcoverError(f"unknown predictor kind {kind!r}")
