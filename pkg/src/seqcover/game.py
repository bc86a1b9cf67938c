"""The online game: distributions, adversaries, transcripts.

Protocol per step: the feature is revealed, the learner predicts, then the
label is revealed.  The learner object only ever sees x^t and y^{t-1}
(predict is called before observe), which enforces the ordering by shape.

For log loss against binary experts the best-in-class comparator uses the
hypotheses' clamped predictions (clamp eps matches the loss spec): without
clamping every agnostic label sequence would drive the comparator to
infinity and the regret to minus infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .domain import HypothesisClass
from .errors import SeqcoverError
from .losses import LossSpec, loss
from .predictors import Learner

# ---------------------------------------------------------------------------
# feature distributions


@dataclass(frozen=True)
class DistributionSpec:
    """Feature process: iid marginal, exchangeable multiset, product of
    type k, or a fixed (singleton) sequence."""

    kind: str  # "iid" | "exchangeable" | "product_type_k" | "singleton"
    marginal: Optional[dict] = None  # {"kind": "uniform_grid", "grid_denominator": R}
    multiset: Optional[tuple] = None
    marginals: Optional[tuple] = None
    assignment: Optional[tuple] = None
    sequence: Optional[tuple] = None

    def sampler(self) -> Callable:
        if self.kind == "iid":
            draw = _marginal_sampler(self.marginal)
            return lambda rng, T: [draw(rng) for _ in range(T)]
        if self.kind == "exchangeable":
            pool = list(self.multiset)
            def sample(rng, T):
                if T != len(pool):
                    raise SeqcoverError("exchangeable draws use the whole multiset")
                return [pool[i] for i in rng.permutation(len(pool))]
            return sample
        if self.kind == "product_type_k":
            draws = [_marginal_sampler(m) for m in self.marginals]
            assignment = list(self.assignment)
            def sample(rng, T):
                if T != len(assignment):
                    raise SeqcoverError("type-k assignment length must equal T")
                return [draws[assignment[t]](rng) for t in range(T)]
            return sample
        if self.kind == "singleton":
            seq = list(self.sequence)
            def sample(rng, T):
                if T != len(seq):
                    raise SeqcoverError("singleton sequence length must equal T")
                return list(seq)
            return sample
        raise SeqcoverError(f"unknown distribution kind {self.kind!r}")


def _marginal_sampler(marginal: dict) -> Callable:
    kind = marginal["kind"]
    if kind == "uniform_grid":
        r = int(marginal["grid_denominator"])
        return lambda rng: int(rng.integers(0, r + 1))
    if kind == "uniform_finite":
        n = int(marginal["domain_size"])
        return lambda rng: int(rng.integers(0, n))
    if kind == "discrete_weighted":
        atoms = [tuple(a) if isinstance(a, list) else a for a in marginal["atoms"]]
        weights = np.asarray(marginal["weights"], dtype=float)
        if weights.min() < 0 or not math.isclose(weights.sum(), 1.0, rel_tol=1e-9):
            raise SeqcoverError("weights must be nonnegative and sum to 1")
        cum = np.cumsum(weights)
        def draw(rng):
            return atoms[int(np.searchsorted(cum, rng.random(), side="right"))]
        return draw
    if kind == "uniform_grid_range":
        lo, hi = int(marginal["low"]), int(marginal["high"])
        return lambda rng: int(rng.integers(lo, hi + 1))
    raise SeqcoverError(f"unknown marginal kind {kind!r}")


# ---------------------------------------------------------------------------
# adversaries


@dataclass(frozen=True)
class AdversarySpec:
    kind: str  # "realizable" | "random" | "greedy_lookahead" | "exact_minimax"
    hypothesis: object = None  # fixed target for realizable (None: drawn per game)
    depth: int = 2

    def validate(self, T):
        if self.kind == "exact_minimax" and T > 12:
            raise SeqcoverError("exact minimax adversary is capped at T <= 12")


MINIMAX_CAP = 12


def adversary_step(spec: AdversarySpec, learner_after: Learner, x_rest, y_hist,
                   cls, loss_spec, target_label=None, rng=None):
    """Choose the next label.

    `learner_after` is a clone that has already produced the prediction for
    the current step but not observed the label; `x_rest` holds the current
    feature followed by the not-yet-played features (known only to the
    adversary kinds that look ahead).
    """
    if spec.kind == "realizable":
        return target_label
    if spec.kind == "random":
        return int(rng.integers(0, 2))
    if spec.kind == "greedy_lookahead":
        return _lookahead_label(learner_after, x_rest, min(spec.depth, len(x_rest)), loss_spec)
    if spec.kind == "exact_minimax":
        return _minimax_label(learner_after, x_rest, y_hist, cls, loss_spec)
    raise SeqcoverError(f"unknown adversary kind {spec.kind!r}")


def _lookahead_label(learner, x_rest, depth, loss_spec):
    """Greedy label: maximize loss over the next `depth` steps."""

    def best_value(lrn, feats, d, pending_pred):
        best = -math.inf
        for y in (0, 1):
            val = loss(loss_spec, pending_pred, y)
            if d > 1 and len(feats) > 1:
                nxt = lrn.clone()
                nxt.observe(y)
                val += best_value(nxt, feats[1:], d - 1, nxt.predict(feats[1]))
            best = max(best, val)
        return best

    scores = {}
    for y in (0, 1):
        val = loss(loss_spec, learner._last_prediction, y)
        if depth > 1 and len(x_rest) > 1:
            nxt = learner.clone()
            nxt.observe(y)
            val += best_value(nxt, x_rest[1:], depth - 1, nxt.predict(x_rest[1]))
        scores[y] = val
    top = max(scores.values())
    return min(y for y, v in scores.items() if v == top)


def _minimax_label(learner, x_rest, y_hist, cls, loss_spec):
    """Label maximizing the final regret via full game-tree search against
    this specific learner; the best-in-class comparator is subtracted at the
    leaves, so unrealizable branches price in their infinite comparator."""
    all_feats = list(y_hist["features"]) + list(x_rest)
    t0 = len(y_hist["labels"])

    def branch_value(lrn, t, labels, loss_sum, pending_pred):
        best = -math.inf
        for y in (0, 1):
            step = loss(loss_spec, pending_pred, y)
            if t + 1 == len(all_feats):
                comp = comparator_loss(cls, all_feats, labels + [y], loss_spec)
                val = loss_sum + step - comp
                if math.isnan(val):
                    val = -math.inf  # inf loss against inf comparator
            else:
                nxt = lrn.clone()
                nxt.observe(y)
                p = nxt.predict(all_feats[t + 1])
                val = branch_value(nxt, t + 1, labels + [y], loss_sum + step, p)
            best = max(best, val)
        return best

    scores = {}
    for y in (0, 1):
        step = loss(loss_spec, learner._last_prediction, y)
        labels = list(y_hist["labels"]) + [y]
        if t0 + 1 == len(all_feats):
            comp = comparator_loss(cls, all_feats, labels, loss_spec)
            val = y_hist["loss_sum"] + step - comp
            if math.isnan(val):
                val = -math.inf
        else:
            nxt = learner.clone()
            nxt.observe(y)
            p = nxt.predict(all_feats[t0 + 1])
            val = branch_value(nxt, t0 + 1, labels, y_hist["loss_sum"] + step, p)
        scores[y] = val
    top = max(scores.values())
    return min(y for y, v in scores.items() if v == top)


# ---------------------------------------------------------------------------
# comparator and transcript


def comparator_loss(cls: HypothesisClass, features, labels, loss_spec: LossSpec) -> float:
    """min_h sum_t loss(h(x_t), y_t) with hypothesis outputs clamped for log
    loss; infinite when the labels are unrealizable and the clamp is zero."""
    from .domain import SparseIndicator

    if isinstance(cls, SparseIndicator):
        return _sparse_comparator(cls, features, labels, loss_spec)
    best = math.inf
    for b in cls.behaviors(list(features)):
        total = 0.0
        for p, y in zip(b.labels, labels):
            p = float(p)
            if loss_spec.kind == "log":
                p = loss_spec.clamp(p)
            total += loss(loss_spec, p, y)
            if total >= best:
                break
        best = min(best, total)
    return best


def _sparse_comparator(cls, features, labels, loss_spec) -> float:
    """Closed form: independently per point, marking it trades the 0-output
    loss for the 1-output loss, so the best hypothesis marks the highest
    savers within the budget."""
    out0, out1 = 0.0, 1.0
    if loss_spec.kind == "log":
        out0, out1 = loss_spec.clamp(0.0), loss_spec.clamp(1.0)
    per_point: dict = {}
    base = 0.0
    for x, y in zip(features, labels):
        c0 = loss(loss_spec, out0, y)
        base += c0
        per_point[x] = per_point.get(x, 0.0) + c0 - loss(loss_spec, out1, y)
    savings = sorted((s for s in per_point.values() if s > 0), reverse=True)
    return base - sum(savings[: cls.budget])


@dataclass
class GameTranscript:
    features: list
    predictions: list[float]
    labels: list[int]
    losses: list[float]
    comparator: float
    regret: float  # vs best-in-class (clamped for log loss)
    regret_vs_target: Optional[float]  # vs the generating hypothesis, if any
    mistakes: int
    target: object = None

    def recompute_regret(self, cls, loss_spec) -> float:
        return sum(self.losses) - comparator_loss(cls, self.features, self.labels, loss_spec)


def run_game(
    cls: HypothesisClass,
    loss_spec: LossSpec,
    learner_factory: Callable[[list], Learner],
    distribution: DistributionSpec,
    adversary: AdversarySpec,
    T: int,
    rng: np.random.Generator,
) -> GameTranscript:
    """Play one game; deterministic given the rng state.

    `learner_factory` receives the full feature sequence (fixed-design
    learners may use it; online learners must ignore it).
    """
    adversary.validate(T)
    features = distribution.sampler()(rng, T)
    learner = learner_factory(features)

    target = None
    target_labels = None
    if adversary.kind == "realizable":
        target = adversary.hypothesis
        if target is None:
            target = _draw_hypothesis(cls, features, rng)
        target_labels = [int(cls.evaluate(target, x)) for x in features]

    predictions: list[float] = []
    labels: list[int] = []
    losses: list[float] = []
    for t in range(T):
        x = features[t]
        p = learner.predict(x)
        learner._last_prediction = p
        if adversary.kind == "realizable":
            y = target_labels[t]
        else:
            y = adversary_step(
                adversary,
                learner,
                features[t:],
                {"features": features[:t], "labels": labels, "loss_sum": sum(losses)},
                cls,
                loss_spec,
                rng=rng,
            )
        learner.observe(y)
        predictions.append(p)
        labels.append(int(y))
        losses.append(loss(loss_spec, p, y))

    comp = comparator_loss(cls, features, labels, loss_spec)
    regret = sum(losses) - comp
    regret_vs_target = None
    if target is not None:
        tgt_loss = 0.0
        for x, y in zip(features, labels):
            p = float(cls.evaluate(target, x))
            if loss_spec.kind == "log":
                p = loss_spec.clamp(p)
            tgt_loss += loss(loss_spec, p, y)
        regret_vs_target = sum(losses) - tgt_loss
    mistakes = sum(1 for p, y in zip(predictions, labels) if round(p) != y)
    return GameTranscript(
        features, predictions, labels, losses, comp, regret, regret_vs_target, mistakes, target
    )


def _draw_hypothesis(cls, features, rng):
    """Uniform random hypothesis id for the class kinds the experiments use."""
    from .domain import FiniteTable, Interval1D, SparseIndicator, Threshold1D

    if isinstance(cls, FiniteTable):
        return int(rng.integers(0, len(cls.rows)))
    if isinstance(cls, Threshold1D):
        return int(rng.integers(0, cls.grid_r + 2))
    if isinstance(cls, Interval1D):
        a = int(rng.integers(0, cls.grid_r + 1))
        b = int(rng.integers(a, cls.grid_r + 1))
        return (a, b)
    if isinstance(cls, SparseIndicator):
        # uniform over all subsets of size <= budget
        sizes = [math.comb(cls.domain_size, i) for i in range(cls.budget + 1)]
        total = sum(sizes)
        u = rng.random() * total
        size = 0
        acc = 0
        for i, c in enumerate(sizes):
            acc += c
            if u <= acc:
                size = i
                break
        pick = rng.choice(cls.domain_size, size=size, replace=False)
        return frozenset(int(v) for v in pick)
    raise SeqcoverError(f"no hypothesis sampler for {cls.kind}")
