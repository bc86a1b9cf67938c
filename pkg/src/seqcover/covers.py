"""Stochastic global sequential cover constructions.

Members are lazy sequential functions: each owns only a construction tag and
recomputes its trajectory from the realized prefix, so index sets of size
2^M cost nothing until evaluated.  Every construction also ships a matcher
(`covering_member`) that finds the member tracking a given behavior without
scanning the index set; `verify_cover` uses it and the test suite
cross-checks matched members by direct evaluation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import complexity
from .domain import Behavior, HypothesisClass, Threshold1D
from .errors import EnumerationInfeasibleError, SeqcoverError
from .predictors import (
    one_inclusion_predict,
    soa_star_predict,
    subclass_sl,
    threshold_split_counts,
)


class _Failed:
    """Sentinel for a realization-tree construction that ran out of indices."""

    def __repr__(self):
        return "FAILED"


FAILED = _Failed()

ITERATION_CAP = 200_000


def _binom_sum(n: int, k: int) -> int:
    return sum(math.comb(n, i) for i in range(min(k, n) + 1))


# ---------------------------------------------------------------------------
# cover container


class CoverSet:
    """A set of sequential functions with construction metadata."""

    construction = "abstract"

    def __init__(self, alpha, delta, horizon, size, params=None):
        self.alpha = alpha
        self.delta = delta
        self.horizon = horizon
        self.size = size
        self.params = dict(params or {})

    def iter_members(self):
        raise NotImplementedError

    def covering_member(self, x_seq, labels):
        """Member matching `labels` within self.alpha on `x_seq`, or None.

        Default: scan the whole member list (small covers only).
        """
        if self.size > ITERATION_CAP:
            raise EnumerationInfeasibleError(
                f"cover of size {self.size} has no fast matcher"
            )
        for member in self.iter_members():
            if member_matches(member, x_seq, labels, self.alpha):
                return member
        return None

    def describe(self) -> dict:
        return {
            "construction": self.construction,
            "alpha": str(self.alpha),
            "delta": self.delta,
            "horizon": self.horizon,
            "size": str(self.size),
            **{k: v for k, v in self.params.items() if _jsonable(v)},
        }


def _jsonable(v):
    return isinstance(v, (int, float, str, bool, list))


def member_matches(member, x_seq, labels, alpha) -> bool:
    preds = member.predictions(x_seq)
    for p, y in zip(preds, labels):
        if abs(Fraction(p) - Fraction(y)) > Fraction(alpha):
            return False
    return True


# ---------------------------------------------------------------------------
# error-pattern cover (flip a base predictor on a small index set)


@dataclass(frozen=True)
class FlippedPredictorMember:
    """Follows `rule` but negates its output at the positions in `flips`."""

    rule: Callable
    flips: frozenset

    def predictions(self, x_seq):
        out = []
        for t in range(len(x_seq)):
            p = self.rule(x_seq[: t + 1], out)
            if t in self.flips:
                p = 1 - p
            out.append(p)
        return tuple(out)


class ErrorPatternCover(CoverSet):
    construction = "error_pattern"

    def __init__(self, rule, T, err_budget, delta=0.0):
        if err_budget >= T:
            raise ValueError("error budget must be below the horizon")
        size = _binom_sum(T, err_budget)
        super().__init__(0, delta, T, size, {"err_budget": err_budget})
        self.rule = rule
        self.err_budget = err_budget

    def iter_members(self):
        if self.size > ITERATION_CAP:
            raise EnumerationInfeasibleError("error-pattern cover too large to list")
        for k in range(self.err_budget + 1):
            for combo in itertools.combinations(range(self.horizon), k):
                yield FlippedPredictorMember(self.rule, frozenset(combo))

    def covering_member(self, x_seq, labels):
        """The only candidate flips the rule exactly at its mistakes on `labels`."""
        flips = []
        for t in range(len(x_seq)):
            p = self.rule(x_seq[: t + 1], list(labels[:t]))
            if p != labels[t]:
                flips.append(t)
            if len(flips) > self.err_budget:
                return None
        return FlippedPredictorMember(self.rule, frozenset(flips))


def one_inclusion_rule(cls: HypothesisClass):
    """Stateless replayable form of the 1-inclusion predictor."""

    def rule(features_with_query, past_labels):
        return one_inclusion_predict(cls, features_with_query, past_labels)

    return rule


def error_pattern_cover(rule, T: int, err_budget: int) -> ErrorPatternCover:
    return ErrorPatternCover(rule, T, err_budget)


# ---------------------------------------------------------------------------
# realization-tree cover


def tree_index_bits(vc: int, star: int, T: int, delta: float) -> int:
    """Index budget: (VC + 4 Star) log2 T + log2(1/delta), rounded up."""
    return math.ceil((vc + 4 * star) * math.log2(max(T, 2)) + math.log2(1.0 / delta))


@dataclass(frozen=True)
class TreeCoverMember:
    """Routes through the realization tree; index interval halves at splits.

    The lower half of an interval follows the 0-child.  After an index
    exhaustion (a split with fewer than 2 indices) outputs follow the
    0-child; the construction is then flagged FAILED for that stream.
    """

    cls: HypothesisClass
    m_bits: int
    k: int

    def predictions(self, x_seq):
        state = self.cls.initial_state()
        lo, hi = 0, 2**self.m_bits
        out = []
        for x in x_seq:
            kids = state.children(x)
            if len(kids) == 1:
                label, state = next(iter(kids.items()))
            else:
                if hi - lo < 2:
                    label = 0
                    state = kids[0]
                else:
                    mid = (lo + hi) // 2
                    if self.k < mid:
                        label, hi = 0, mid
                    else:
                        label, lo = 1, mid
                    state = kids[label]
            out.append(label)
        return tuple(out)


class RealizationTreeCover(CoverSet):
    construction = "realization_tree"

    def __init__(self, cls, m_bits, delta=0.0):
        super().__init__(0, delta, None, 2**m_bits, {"m_bits": m_bits})
        self.cls = cls
        self.m_bits = m_bits

    def member(self, k: int) -> TreeCoverMember:
        return TreeCoverMember(self.cls, self.m_bits, k)

    def iter_members(self):
        if self.size > ITERATION_CAP:
            raise EnumerationInfeasibleError("realization-tree cover too large to list")
        return (self.member(k) for k in range(self.size))

    def covering_member(self, x_seq, labels):
        walk = tree_walk(self.cls, x_seq, labels, self.m_bits)
        if walk is None:
            return None
        return self.member(walk)

    def splits_by_behavior(self, x_seq):
        """Binary-node count along every realizable path of the stream."""
        if isinstance(self.cls, Threshold1D) and self.cls.direction == "ge":
            _, counts = threshold_split_counts(list(x_seq))
            return counts
        behaviors = self.cls.behaviors(list(x_seq))
        out = []
        for b in behaviors:
            state = self.cls.initial_state()
            splits = 0
            for x, y in zip(x_seq, b.labels):
                kids = state.children(x)
                splits += len(kids) > 1
                state = kids[y]
            out.append(splits)
        return np.asarray(out)


def tree_walk(cls, x_seq, labels, m_bits) -> Optional[int]:
    """Index of the member tracking `labels`, or None if the path exhausts."""
    state = cls.initial_state()
    lo, hi = 0, 2**m_bits
    for x, y in zip(x_seq, labels):
        kids = state.children(x)
        if y not in kids:
            return None  # labels not realizable: nothing to cover
        if len(kids) > 1:
            if hi - lo < 2:
                return None
            mid = (lo + hi) // 2
            lo, hi = (lo, mid) if y == 0 else (mid, hi)
        state = kids[y]
    return lo


def realization_tree_cover(cls: HypothesisClass, stream, M: Optional[int] = None, delta: float = 0.05):
    """Cover with 2^M members, or FAILED when the index budget is exhausted
    on the given stream.  M defaults to the (VC + 4 Star) log2 T budget."""
    stream = list(stream)
    if M is None:
        star = complexity.star_number(cls)
        if not math.isfinite(star):
            raise SeqcoverError("realization-tree budget needs a finite star number")
        M = tree_index_bits(complexity.vc_dimension(cls), int(star), len(stream), delta)
    cover = RealizationTreeCover(cls, M, delta)
    cover.horizon = len(stream)
    if len(stream) and int(np.max(cover.splits_by_behavior(stream))) > M:
        return FAILED
    return cover


# ---------------------------------------------------------------------------
# star-Littlestone two-phase cover


@dataclass(frozen=True)
class TwoPhaseMember:
    """SOA with flips while the consistent class is star-rich, then a
    realization-tree member over the surviving subclass."""

    cls: HypothesisClass
    s: int
    flips: frozenset
    m_bits: int
    k: int

    def predictions(self, x_seq):
        cls = self.cls
        state = cls.initial_state()
        phase2 = complexity.subclass_star(cls, state) <= self.s
        lo, hi = 0, 2**self.m_bits
        dead = False
        out = []
        for t, x in enumerate(x_seq):
            if dead:
                out.append(0)
                continue
            kids = state.children(x)
            if not phase2:
                if len(kids) == 1:
                    label = next(iter(kids))
                else:
                    label = _soa_from_state(cls, state, kids, self.s)
                if t in self.flips:
                    label = 1 - label
                if label not in kids:
                    dead = True  # flip left the class; member covers nothing
                    out.append(label)
                    continue
                state = kids[label]
                if complexity.subclass_star(cls, state) <= self.s:
                    phase2 = True
            else:
                if len(kids) == 1:
                    label, state = next(iter(kids.items()))
                elif hi - lo < 2:
                    label, state = 0, kids[0]
                else:
                    mid = (lo + hi) // 2
                    if self.k < mid:
                        label, hi = 0, mid
                    else:
                        label, lo = 1, mid
                    state = kids[label]
            out.append(label)
        return tuple(out)


def _soa_from_state(cls, state, kids, s):
    scored = {
        label: (subclass_sl(cls, child, s), complexity.subclass_star(cls, child))
        for label, child in kids.items()
    }
    best = max(scored.values())
    return min(label for label, sc in scored.items() if sc == best)


class StarLittlestoneCover(CoverSet):
    construction = "star_littlestone"

    def __init__(self, cls, s, d, m_bits, T, delta):
        size = _binom_sum(T, d) * 2**m_bits
        super().__init__(
            0, delta, T, size, {"s": s, "d": d, "m_bits": m_bits}
        )
        self.cls = cls
        self.s = s
        self.d = d
        self.m_bits = m_bits

    def member(self, flips, k):
        return TwoPhaseMember(self.cls, self.s, frozenset(flips), self.m_bits, k)

    def iter_members(self):
        if self.size > ITERATION_CAP:
            raise EnumerationInfeasibleError("star-Littlestone cover too large to list")
        for n_flips in range(self.d + 1):
            for combo in itertools.combinations(range(self.horizon), n_flips):
                for k in range(2**self.m_bits):
                    yield self.member(combo, k)

    def covering_member(self, x_seq, labels):
        """Simulate the target's run: flips = SOA mistakes in phase 1, then a
        tree walk over the surviving subclass for the index."""
        cls = self.cls
        state = cls.initial_state()
        phase2 = complexity.subclass_star(cls, state) <= self.s
        lo, hi = 0, 2**self.m_bits
        flips = []
        for t, (x, y) in enumerate(zip(x_seq, labels)):
            kids = state.children(x)
            if y not in kids:
                return None  # not realizable
            if not phase2:
                if len(kids) == 1:
                    pred = next(iter(kids))
                else:
                    pred = _soa_from_state(cls, state, kids, self.s)
                if pred != y:
                    flips.append(t)
                    if len(flips) > self.d:
                        return None
                state = kids[y]
                if complexity.subclass_star(cls, state) <= self.s:
                    phase2 = True
            else:
                if len(kids) > 1:
                    if hi - lo < 2:
                        return None
                    mid = (lo + hi) // 2
                    lo, hi = (lo, mid) if y == 0 else (mid, hi)
                state = kids[y]
        return self.member(flips, lo)


def star_littlestone_cover(cls: HypothesisClass, s: int, d_cap: int, T: int, delta: float) -> StarLittlestoneCover:
    sl = subclass_sl(cls, cls.initial_state(), s)
    d = sl + 1
    if d_cap < d:
        raise SeqcoverError(f"d_cap={d_cap} below the required SL(s)+1={d}")
    delta2 = delta / T ** (d + 1)
    m_bits = tree_index_bits(complexity.vc_dimension(cls), s, T, delta2)
    return StarLittlestoneCover(cls, s, d, m_bits, T, delta)


# ---------------------------------------------------------------------------
# local (non-sequential) alpha cover, greedy


_LOCAL_COVER_CACHE: dict = {}


def _local_cover_key(cls, distinct, alpha):
    from .domain import Monotone1D

    if isinstance(cls, Monotone1D):
        # monotone behavior vectors (and hence the greedy's picks) depend
        # only on how many distinct points there are, not where they sit
        return (id(cls), len(distinct), alpha)
    return (id(cls), tuple(distinct), alpha)


def _greedy_cover_indices(vectors, alpha) -> list[int]:
    """Greedy set-cover picks over behavior vectors in sup distance."""
    vecs = np.asarray([[float(v) for v in labels] for labels in vectors])
    tol = float(alpha) + 1e-12
    covered = (
        np.abs(vecs[:, None, :] - vecs[None, :, :]).max(axis=2) <= tol
        if vecs.size
        else np.ones((len(vectors), len(vectors)), dtype=bool)
    )
    uncovered = np.ones(len(vectors), dtype=bool)
    chosen = []
    while uncovered.any():
        hits = covered[:, uncovered].sum(axis=1)
        best = int(np.argmax(hits))
        chosen.append(best)
        uncovered &= ~covered[best]
    return chosen


def local_alpha_cover(cls: HypothesisClass, sample, alpha) -> list:
    """Greedy subset of hypothesis ids whose sample restrictions alpha-cover
    every behavior in sup distance.

    The greedy runs on the distinct sorted points (sup distance over a sample
    equals sup distance over its distinct points) and its pick indices are
    memoized: the epoch construction re-requests the same prefixes across
    draws, and `behaviors` returns a deterministically sorted list.
    """
    alpha = Fraction(alpha)
    sample = list(sample)
    distinct = sorted(set(sample))
    behaviors = cls.behaviors(distinct)
    if alpha >= 1 or not distinct:
        return [behaviors[0].witness]
    key = _local_cover_key(cls, distinct, alpha)
    if key not in _LOCAL_COVER_CACHE:
        if len(_LOCAL_COVER_CACHE) > 4096:
            _LOCAL_COVER_CACHE.clear()
        _LOCAL_COVER_CACHE[key] = _greedy_cover_indices(
            [b.labels for b in behaviors], alpha
        )
    return [behaviors[i].witness for i in _LOCAL_COVER_CACHE[key]]


def local_cover_size_bound(fat_quarter: int, T: int, alpha) -> float:
    """log2 of the classical local-cover size bound, for reporting only."""
    a = float(alpha)
    return fat_quarter * (math.log2(max(T, 2)) ** 2 + 2 * math.log2(1 / a) ** 2 + 8)


# ---------------------------------------------------------------------------
# fat-shattering epoch cover


def patch_grid(alpha) -> list[Fraction]:
    """Midpoints of ceil(1/(8 alpha)) equal bins of [0,1]: any value in [0,1]
    is within 4 alpha of some grid point."""
    alpha = Fraction(alpha)
    n = math.ceil(Fraction(1) / (8 * alpha))
    return [Fraction(2 * i + 1, 2 * n) for i in range(n)]


def _epochs(T: int):
    """1-based step ranges [2^(s-1), 2^s - 1] clipped to the horizon."""
    out = []
    s = 1
    while 2 ** (s - 1) <= T:
        out.append((2 ** (s - 1), min(2**s - 1, T)))
        s += 1
    return out


@dataclass(frozen=True)
class EpochPatchMember:
    """Per epoch: follow one local-cover representative, except on a patched
    index set where fixed grid values are emitted."""

    cls: HypothesisClass
    alpha_int: Fraction  # internal scale (cover built at 4x this)
    choices: tuple  # per epoch: (f_rank, ((t, value), ...)) with t 1-based

    def predictions(self, x_seq):
        out = []
        epochs = _epochs(len(x_seq))
        for e_idx, (start, end) in enumerate(epochs):
            f_rank, patches = (
                self.choices[e_idx] if e_idx < len(self.choices) else (0, ())
            )
            prefix = list(x_seq[: start - 1])
            cover_ids = local_alpha_cover(self.cls, prefix, self.alpha_int)
            f = cover_ids[min(f_rank, len(cover_ids) - 1)]
            patch_map = dict(patches)
            for t in range(start, end + 1):
                if t in patch_map:
                    out.append(patch_map[t])
                else:
                    out.append(self.cls.evaluate(f, x_seq[t - 1]))
        return tuple(out)


class FatShatteringCover(CoverSet):
    construction = "fat_epochs"

    def __init__(self, cls, alpha, T, delta):
        alpha = Fraction(alpha)
        if not 0 < alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        alpha_int = alpha / 4
        grid = patch_grid(alpha_int)
        if cls.output_kind == "binary":
            grid = [Fraction(0), Fraction(1)]  # grid values round to the endpoints
        fat8 = complexity.fat_shattering(cls, alpha_int / 8)
        fat4 = complexity.fat_shattering(cls, alpha_int / 4)
        log_t = math.log(max(T, 2))
        log_a = math.log(1 / float(alpha_int))
        budgets = []
        sizes = []
        size = 1
        for s, (start, end) in enumerate(_epochs(T), start=1):
            r_s = math.ceil(2 * fat8 * (s**2 + 2 * log_a**2 + 8) + math.log(log_t / delta))
            r_s = min(r_s, T)
            budgets.append(r_s)
            length = end - start + 1
            f_cap = 2 ** math.ceil(fat4 * (s**2 + 2 * log_a**2 + 8))
            g_s = f_cap * sum(
                math.comb(length, i) * len(grid) ** i for i in range(min(r_s, length) + 1)
            )
            sizes.append(g_s)
            size *= g_s
        super().__init__(
            alpha, delta, T, size,
            {"alpha_internal": str(alpha_int), "grid_size": len(grid), "budgets": budgets},
        )
        self.cls = cls
        self.alpha_int = alpha_int
        self.grid = grid
        self.budgets = budgets
        self.epoch_sizes = sizes

    def member(self, choices) -> EpochPatchMember:
        return EpochPatchMember(self.cls, self.alpha_int, tuple(choices))

    def iter_members(self):
        raise EnumerationInfeasibleError("fat-shattering covers are matched, not listed")

    def covering_member(self, x_seq, labels):
        """Pick, per epoch, the prefix-cover representative with the fewest
        out-of-scale positions; patch those from the grid."""
        choices = []
        for e_idx, (start, end) in enumerate(_epochs(len(x_seq))):
            prefix = list(x_seq[: start - 1])
            cover_ids = local_alpha_cover(self.cls, prefix, self.alpha_int)
            best_rank, best_bad = None, None
            for rank, f in enumerate(cover_ids):
                bad = [
                    t
                    for t in range(start, end + 1)
                    if abs(Fraction(self.cls.evaluate(f, x_seq[t - 1])) - Fraction(labels[t - 1]))
                    > self.alpha
                ]
                if best_bad is None or len(bad) < len(best_bad):
                    best_rank, best_bad = rank, bad
            if len(best_bad) > self.budgets[e_idx]:
                return None
            patches = tuple(
                (t, min(self.grid, key=lambda g: abs(g - Fraction(labels[t - 1]))))
                for t in best_bad
            )
            choices.append((best_rank, patches))
        return self.member(choices)


def fat_shattering_cover(cls: HypothesisClass, alpha, T: int, delta: float) -> FatShatteringCover:
    return FatShatteringCover(cls, alpha, T, delta)


# ---------------------------------------------------------------------------
# composition


@dataclass(frozen=True)
class ComposedMember:
    members: tuple
    combiner: Callable

    def predictions(self, x_seq):
        parts = [m.predictions(x_seq) for m in self.members]
        return tuple(self.combiner(*vals) for vals in zip(*parts))


class ComposedCover(CoverSet):
    construction = "composed"

    def __init__(self, covers, combiner):
        horizons = {c.horizon for c in covers}
        if len(horizons) != 1:
            raise SeqcoverError(f"mismatched horizons {horizons}")
        size = 1
        for c in covers:
            size *= c.size
        super().__init__(
            0,
            sum(c.delta for c in covers),
            horizons.pop(),
            size,
            {"parts": [c.construction for c in covers]},
        )
        self.covers = list(covers)
        self.combiner = combiner

    def iter_members(self):
        if self.size > ITERATION_CAP:
            raise EnumerationInfeasibleError("composed cover too large to list")
        for combo in itertools.product(*[list(c.iter_members()) for c in self.covers]):
            yield ComposedMember(tuple(combo), self.combiner)

    def covering_member(self, x_seq, labels):
        # no decomposition through a general combiner: scan (small covers only)
        return CoverSet.covering_member(self, x_seq, labels)


def compose_covers(covers, combiner) -> ComposedCover:
    for c in covers:
        if c.alpha != 0:
            raise SeqcoverError("composition is defined for binary (alpha=0) covers")
    return ComposedCover(covers, combiner)


# ---------------------------------------------------------------------------
# Monte-Carlo verification of the covering property


@dataclass
class VerifyResult:
    failure_rate: float
    failures: int
    trials: int
    witnesses: list = field(default_factory=list)


def verify_cover(cover: CoverSet, cls: HypothesisClass, sampler, alpha, trials: int, seed: int = 0) -> VerifyResult:
    """Fraction of sampled streams on which some behavior of the class is not
    alpha-matched by any member over the full horizon."""
    alpha = Fraction(alpha)
    failures = 0
    witnesses = []
    for trial in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence((seed, trial)))
        draw = sampler(rng, cover.horizon)
        bad = _uncovered_behavior(cover, cls, draw, alpha)
        if bad is not None:
            failures += 1
            if len(witnesses) < 10:
                witnesses.append({"trial": trial, "labels": bad})
    return VerifyResult(failures / trials if trials else 0.0, failures, trials, witnesses)


def _uncovered_behavior(cover, cls, draw, alpha):
    if isinstance(cover, RealizationTreeCover):
        counts = cover.splits_by_behavior(draw)
        if len(counts) and int(np.max(counts)) > cover.m_bits:
            idx = int(np.argmax(counts))
            return f"path with {int(counts[idx])} splits > M={cover.m_bits}"
        return None
    if isinstance(cover, FatShatteringCover):
        return _uncovered_fat(cover, cls, draw)
    if isinstance(cover, ComposedCover) and cover.size <= ITERATION_CAP:
        return _uncovered_composed(cover, cls, draw)
    behaviors = cls.behaviors(list(draw))
    for b in behaviors:
        if cover.covering_member(draw, b.labels) is None:
            return list(map(str, b.labels))
    return None


def _uncovered_composed(cover: ComposedCover, cls, draw):
    """Materialize per-component prediction matrices once per draw, combine
    through the combiner, and match all behaviors vectorized."""
    draw = list(draw)
    parts = [
        np.asarray([m.predictions(draw) for m in c.iter_members()], dtype=np.int8)
        for c in cover.covers
    ]
    combined = parts[0]
    try:
        for nxt in parts[1:]:
            a = np.repeat(combined, len(nxt), axis=0)
            b = np.tile(nxt, (len(combined), 1))
            combined = np.asarray(cover.combiner(a, b), dtype=np.int8)
    except Exception:
        # combiner is not vectorizable: fall back to the member scan
        behaviors = cls.behaviors(draw)
        for b in behaviors:
            if cover.covering_member(draw, b.labels) is None:
                return list(map(str, b.labels))
        return None
    for beh in cls.behaviors(draw):
        target = np.asarray(beh.labels, dtype=np.int8)
        if not np.any(np.all(combined == target, axis=1)):
            return list(map(str, beh.labels))
    return None


def _uncovered_fat(cover: FatShatteringCover, cls, draw):
    """Batched form of FatShatteringCover.covering_member over all behaviors.

    Works on the distinct points with per-epoch multiplicities; a
    representative's restriction is itself an enumerated behavior, so one
    B x B x m mismatch tensor per draw serves every epoch.
    """
    draw = list(draw)
    distinct = sorted(set(draw))
    d_index = {x: i for i, x in enumerate(distinct)}
    pos = np.asarray([d_index[x] for x in draw])
    behaviors = cls.behaviors(distinct)
    beh_index = {b.labels: i for i, b in enumerate(behaviors)}
    lab = np.asarray([[float(v) for v in b.labels] for b in behaviors])
    tol = float(cover.alpha) + 1e-12
    mismatch = (np.abs(lab[:, None, :] - lab[None, :, :]) > tol).astype(np.float64)
    alive = np.ones(len(behaviors), dtype=bool)
    for e_idx, (start, end) in enumerate(_epochs(len(draw))):
        length = end - start + 1
        if cover.budgets[e_idx] >= length:
            continue  # everything is patchable inside this epoch
        mult = np.bincount(pos[start - 1 : end], minlength=len(distinct)).astype(float)
        cover_ids = local_alpha_cover(cls, draw[: start - 1], cover.alpha_int)
        f_rows = [
            beh_index[tuple(cls.evaluate(f, x) for x in distinct)] for f in cover_ids
        ]
        viol = np.einsum("bfm,m->bf", mismatch[:, f_rows, :], mult)
        alive &= viol.min(axis=1) <= cover.budgets[e_idx]
        if not alive.any():
            break
    if alive.all():
        return None
    witness = behaviors[int(np.argmin(alive))]
    return [str(witness.labels[p]) for p in pos]
