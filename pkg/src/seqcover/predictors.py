"""Online prediction rules.

Realizable-case predictors (1-inclusion graph, star-aware SOA), agnostic
expert mixing (EWA, aggregating substitution, smooth truncated Bayes), and
the stateful learner objects the game runner drives.

The 1-inclusion orientation is repeated minimum-degree peeling with the
peeled vertex's remaining edges oriented outward; ties break toward the
lexicographically smallest behavior vector, so predictions are deterministic
and permutation invariant by construction.  Threshold classes get a closed
form equivalent to that orientation (verified against the generic graph in
the test suite): an uncertain query is predicted 1, so a mistake on a target
happens exactly when the query is a new maximum among its 0-labeled points.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import complexity
from .domain import Behavior, HypothesisClass, Threshold1D, _unique_sorted
from .errors import SubstitutionError, UnrealizableLabelsError
from .losses import LossSpec, loss, substitution_interval

# ---------------------------------------------------------------------------
# 1-inclusion graph


def one_inclusion_orientation(behaviors: list[Behavior]) -> dict:
    """Min-degree peeling orientation of the Hamming-distance-1 graph.

    Returns {frozenset({u, v}): head_vector} for every edge, where vectors
    are label tuples.
    """
    vectors = sorted(b.labels for b in behaviors)
    vec_set = set(vectors)
    n = len(vectors[0]) if vectors else 0

    def neighbors(v):
        out = []
        for c in range(n):
            w = v[:c] + (1 - v[c],) + v[c + 1 :]
            if w in vec_set:
                out.append(w)
        return out

    adj = {v: set(neighbors(v)) for v in vectors}
    degree = {v: len(adj[v]) for v in vectors}
    alive = set(vectors)
    orientation = {}
    while alive:
        v = min(alive, key=lambda u: (degree[u], u))
        for w in adj[v]:
            if w in alive:
                orientation[frozenset((v, w))] = w  # peeled vertex points out
                degree[w] -= 1
        alive.remove(v)
    return orientation


def _constraints_from_pairs(cls, features, labels):
    seen = {}
    for x, y in zip(features, labels):
        if x in seen and seen[x] != y:
            raise UnrealizableLabelsError(f"conflicting labels at feature {x!r}")
        seen[x] = y
    return seen


def one_inclusion_predict(cls: HypothesisClass, x_seq, labels):
    """Predict the label of x_seq[-1] given the target's labels on the rest.

    Permutation invariant in the first t-1 (feature, label) pairs.  Forced
    labels are returned directly; otherwise the oriented 1-inclusion edge at
    the query coordinate decides (predict the label of the head vertex).
    """
    if len(labels) != len(x_seq) - 1:
        raise ValueError("labels must cover all but the final feature")
    x_t = x_seq[-1]
    constraints = _constraints_from_pairs(cls, x_seq[:-1], labels)

    if isinstance(cls, Threshold1D) and cls.direction == "ge":
        return _threshold_predict(constraints, x_t, cls)

    canon = _unique_sorted(x_seq)
    idx = {x: i for i, x in enumerate(canon)}
    behaviors = cls.behaviors(canon)
    consistent = [
        b
        for b in behaviors
        if all(b.labels[idx[x]] == y for x, y in constraints.items())
    ]
    if not consistent:
        raise UnrealizableLabelsError("labels not realizable by any hypothesis")
    options = {b.labels[idx[x_t]] for b in consistent}
    if len(options) == 1:
        return options.pop()
    b0 = next(b.labels for b in consistent if b.labels[idx[x_t]] == 0)
    b1 = next(b.labels for b in consistent if b.labels[idx[x_t]] == 1)
    orientation = one_inclusion_orientation(behaviors)
    head = orientation[frozenset((b0, b1))]
    return head[idx[x_t]]


def _threshold_predict(constraints, x_t, cls):
    cls.validate_feature(x_t)
    zero_hi = max((x for x, y in constraints.items() if y == 0), default=-1)
    one_lo = min((x for x, y in constraints.items() if y == 1), default=cls.grid_r + 2)
    if zero_hi >= one_lo:
        raise UnrealizableLabelsError("labels not realizable by any threshold")
    if x_t <= zero_hi:
        return 0
    if x_t >= one_lo:
        return 1
    return 1  # uncertain region: peeling orients edges toward the 1 side


def one_inclusion_mistakes(cls: HypothesisClass, ordered_features, h) -> int:
    """Cumulative 1-inclusion mistakes on h's labels along a feature order."""
    if isinstance(cls, Threshold1D) and cls.direction == "ge":
        cut = h if isinstance(h, int) else None
        if cut is not None:
            return _threshold_run_mistakes(ordered_features, cut)
    mistakes = 0
    labels = []
    for t in range(len(ordered_features)):
        truth = cls.evaluate(h, ordered_features[t])
        pred = one_inclusion_predict(cls, ordered_features[: t + 1], labels)
        mistakes += int(pred != truth)
        labels.append(truth)
    return mistakes


def _threshold_run_mistakes(ordered_features, cut) -> int:
    """Mistakes of the closed-form threshold rule on target 1{x >= cut}."""
    mistakes = 0
    zero_hi, one_lo = -1, None
    for x in ordered_features:
        if x >= cut:
            if one_lo is None or x < one_lo:
                one_lo = x
            continue  # truth 1; uncertain queries are predicted 1, never wrong
        if x > zero_hi and (one_lo is None or x < one_lo):
            mistakes += 1
        if x > zero_hi:
            zero_hi = x
    return mistakes


def threshold_mistake_counts(order_values) -> tuple[list, np.ndarray]:
    """Per-cut 1-inclusion mistake counts for one feature order, all cuts at once.

    Cuts are indexed against the sorted distinct values u: cut c labels
    values below u[c] as 0 (c = len(u) is the all-0 target).  A step with
    rank r adds one mistake to every cut in (r, next_seen(r)], which a
    difference array accumulates in O(T log T).
    """
    u = sorted(set(order_values))
    rank = {v: i for i, v in enumerate(u)}
    m = len(u)
    diff = np.zeros(m + 2, dtype=np.int64)
    seen: list[int] = []
    seen_set = set()
    for x in order_values:
        r = rank[x]
        if r in seen_set:
            continue
        pos = bisect.bisect_right(seen, r)
        nxt = seen[pos] if pos < len(seen) else m
        # cuts c with r < c <= nxt make this step an uncovered 0-record
        diff[r + 1] += 1
        diff[min(nxt, m) + 1] -= 1
        seen.insert(pos, r)
        seen_set.add(r)
    counts = np.cumsum(diff[: m + 1])
    return u, counts


def threshold_split_counts(order_values) -> tuple[list, np.ndarray]:
    """Per-cut counts of uncertain (non-certified) steps for one order.

    A step with rank r is uncertain for cut c iff no earlier rank lies in
    (prev_seen(r), next_seen(r)) on c's side, i.e. c in (prev, next]; these
    are exactly the binary nodes on c's realization-tree path.
    """
    u = sorted(set(order_values))
    rank = {v: i for i, v in enumerate(u)}
    m = len(u)
    diff = np.zeros(m + 2, dtype=np.int64)
    seen: list[int] = []
    seen_set = set()
    for x in order_values:
        r = rank[x]
        if r in seen_set:
            continue
        pos = bisect.bisect_right(seen, r)
        prev = seen[pos - 1] if pos > 0 else -1
        nxt = seen[pos] if pos < len(seen) else m
        diff[prev + 1] += 1
        diff[min(nxt, m) + 1] -= 1
        seen.insert(pos, r)
        seen_set.add(r)
    counts = np.cumsum(diff[: m + 1])
    return u, counts


def permutation_error_tail(cls, x_T, h, trials, thresholds, seed=0):
    """Tail of cumulative 1-inclusion mistakes over random orders of x_T.

    trials=None enumerates every order exactly (small samples only);
    otherwise `trials` uniform orders are sampled.  Returns {k: fraction of
    orders with mistakes >= k}.
    """
    x_T = list(x_T)
    counts = []
    if trials is None:
        if len(x_T) > 8:
            raise ValueError("exhaustive order enumeration capped at 8 features")
        for order in itertools.permutations(x_T):
            counts.append(one_inclusion_mistakes(cls, list(order), h))
    else:
        rng = np.random.default_rng(seed)
        arr = np.asarray(x_T, dtype=object)
        for _ in range(trials):
            order = list(arr[rng.permutation(len(arr))])
            counts.append(one_inclusion_mistakes(cls, order, h))
    counts = np.asarray(counts)
    return {k: float(np.mean(counts >= k)) for k in thresholds}


# ---------------------------------------------------------------------------
# SOA with star scale


def _feed(cls, prefix, labels):
    state = cls.initial_state()
    if state is None:
        raise UnrealizableLabelsError(f"{cls.kind} has no consistency state")
    for x, y in zip(prefix, labels):
        nxt = state.children(x)
        if y not in nxt:
            raise UnrealizableLabelsError("labels not realizable on prefix")
        state = nxt[y]
    return state


def subclass_sl(cls, state, s: int) -> int:
    """Star-Littlestone dimension (with -1 for already-small star) of the
    subclass a state describes, at star scale s.

    Compact states get closed forms that are valid for the scales the cover
    constructions use (thresholds need s >= 2, intervals s >= 4): one label
    constraint already caps the star number there, so no depth-1 tree
    survives.  Table states recurse exactly.
    """
    from .domain import IntervalState, SparseState, TableState, ThresholdState

    if isinstance(state, TableState):
        vecs = frozenset(state.table[hid] for hid in state.alive)
        n = cls.n_points

        def shatterable(sub, depth):
            if depth == 0:
                return complexity._star_of_vectors(sub, n) > s
            for c in range(n):
                lo = frozenset(v for v in sub if v[c] == 0)
                hi = frozenset(v for v in sub if v[c] == 1)
                if lo and hi and shatterable(lo, depth - 1) and shatterable(hi, depth - 1):
                    return True
            return False

        for d in range(complexity.DEPTH_CAP, -1, -1):
            if shatterable(vecs, d):
                return d
        return -1
    if isinstance(state, ThresholdState):
        if s < 2:
            raise complexity.ComplexityBudgetError("threshold SL closed form needs s >= 2")
        return 0 if complexity.subclass_star(cls, state) > s else -1
    if isinstance(state, IntervalState):
        if s < 4:
            raise complexity.ComplexityBudgetError("interval SL closed form needs s >= 4")
        return 0 if complexity.subclass_star(cls, state) > s else -1
    if isinstance(state, SparseState):
        raise complexity.ComplexityBudgetError("no SL closed form for sparse classes")
    raise complexity.ComplexityBudgetError(f"no SL oracle for state {type(state).__name__}")


def soa_star_predict(cls, prefix, labels, x_t, s: int):
    """Predict the label whose consistent subclass has the larger
    Star-Littlestone dimension at scale s, then larger Star number; ties
    break toward label 0."""
    state = _feed(cls, prefix, labels)
    kids = state.children(x_t)
    if len(kids) == 1:
        return next(iter(kids))
    scored = {
        label: (subclass_sl(cls, child, s), complexity.subclass_star(cls, child))
        for label, child in kids.items()
    }
    best = max(scored.values())
    return min(label for label, sc in scored.items() if sc == best)


# ---------------------------------------------------------------------------
# expert mixing


def ewa_predict(expert_predictions, cumulative_losses, eta: float) -> float:
    """Exponentially weighted average prediction."""
    preds = np.asarray(expert_predictions, dtype=float)
    losses = np.asarray(cumulative_losses, dtype=float)
    w = np.exp(-eta * (losses - losses.min()))
    return float(np.dot(w, preds) / w.sum())


def ewa_eta(n_experts: int, horizon: int) -> float:
    """Horizon-tuned learning rate for losses in [0, 1]."""
    return math.sqrt(8.0 * math.log(n_experts) / horizon)


def aggregating_predict(expert_predictions, weights, eta: float, loss_spec: LossSpec) -> float:
    """Substitution prediction for an eta-mixable loss.

    Any point of the feasibility interval works; the midpoint is chosen,
    which for log loss at eta=1 collapses to the exact Bayes mixture.
    """
    interval = substitution_interval(loss_spec, expert_predictions, weights, eta)
    if interval is None:
        raise SubstitutionError(
            f"no substitution prediction at eta={eta}: loss is not eta-mixable here"
        )
    lo, hi = interval
    return (lo + hi) / 2.0


def smooth_truncated_bayes_predict(cover_predictions, posterior_weights, alpha: float) -> float:
    """Posterior mixture of predictions clipped to [alpha, 1 - alpha]."""
    if not 0 < alpha < 0.5:
        raise ValueError("alpha must lie in (0, 1/2)")
    preds = np.clip(np.asarray(cover_predictions, dtype=float), alpha, 1 - alpha)
    w = np.asarray(posterior_weights, dtype=float)
    return float(np.dot(w, preds) / w.sum())


def smooth_truncated_bayes_update(cover_predictions, posterior_weights, alpha: float, y) -> np.ndarray:
    """One posterior step: weights scale by the clipped likelihood of y."""
    preds = np.clip(np.asarray(cover_predictions, dtype=float), alpha, 1 - alpha)
    like = preds if y == 1 else 1.0 - preds
    return np.asarray(posterior_weights, dtype=float) * like


# ---------------------------------------------------------------------------
# stateful learners for the game runner


class Learner:
    """Interface the game loop drives: predict, then observe the label."""

    def predict(self, x) -> float:
        raise NotImplementedError

    def observe(self, y) -> None:
        raise NotImplementedError

    def clone(self) -> "Learner":
        raise NotImplementedError


class ConstantLearner(Learner):
    def __init__(self, value: float):
        self.value = float(value)

    def predict(self, x):
        return self.value

    def observe(self, y):
        pass

    def clone(self):
        return ConstantLearner(self.value)


class OneInclusionLearner(Learner):
    """Plays the 1-inclusion prediction on its own observed history."""

    def __init__(self, cls):
        self.cls = cls
        self.features = []
        self.labels = []
        self._pending = None

    def predict(self, x):
        self._pending = x
        return float(one_inclusion_predict(self.cls, self.features + [x], self.labels))

    def observe(self, y):
        self.features.append(self._pending)
        self.labels.append(int(y))
        self._pending = None

    def clone(self):
        c = OneInclusionLearner(self.cls)
        c.features = list(self.features)
        c.labels = list(self.labels)
        c._pending = self._pending
        return c


class SoaLearner(Learner):
    def __init__(self, cls, s: int):
        self.cls = cls
        self.s = s
        self.features = []
        self.labels = []
        self._pending = None

    def predict(self, x):
        self._pending = x
        return float(soa_star_predict(self.cls, self.features, self.labels, x, self.s))

    def observe(self, y):
        self.features.append(self._pending)
        self.labels.append(int(y))
        self._pending = None

    def clone(self):
        c = SoaLearner(self.cls, self.s)
        c.features = list(self.features)
        c.labels = list(self.labels)
        c._pending = self._pending
        return c


class FinitePoolStbLearner(Learner):
    """Smooth truncated Bayes over an explicit pool of sequential experts.

    `experts` yield a prediction per step given (prefix features); the all-1/2
    expert is appended automatically.  Used directly for small pools and as
    the reference implementation for the tree-structured learner.
    """

    def __init__(self, expert_fns, alpha: float):
        if not 0 < alpha < 0.5:
            raise ValueError("alpha must lie in (0, 1/2)")
        self.expert_fns = list(expert_fns)
        self.alpha = alpha
        self.prefix = []
        self.log_w = np.zeros(len(self.expert_fns) + 1)
        self._pending = None

    def _step_predictions(self, x):
        preds = [fn(self.prefix + [x]) for fn in self.expert_fns]
        preds.append(0.5)
        return np.clip(np.asarray(preds, dtype=float), self.alpha, 1 - self.alpha)

    def predict(self, x):
        preds = self._step_predictions(x)
        w = np.exp(self.log_w - self.log_w.max())
        self._pending = (x, preds)
        return float(np.dot(w, preds) / w.sum())

    def observe(self, y):
        x, preds = self._pending
        like = preds if y == 1 else 1.0 - preds
        self.log_w = self.log_w + np.log(like)
        self.prefix.append(x)
        self._pending = None

    def clone(self):
        c = FinitePoolStbLearner(self.expert_fns, self.alpha)
        c.prefix = list(self.prefix)
        c.log_w = self.log_w.copy()
        c._pending = self._pending
        return c


class TreeCoverBayesLearner(Learner):
    """Smooth truncated Bayes over an implicit realization-tree cover.

    The 2^M members sharing a realization-tree node have identical history,
    so the posterior collapses to one weight per live node: prior mass halves
    at each binary node and the clipped likelihood multiplies along the path.
    Nodes whose paths exceed M binary splits hold no members and are dropped.
    Equivalent to FinitePoolStbLearner over the materialized members whenever
    the tree never exhausts its index budget (tested).
    """

    def __init__(self, cls, m_bits: int, alpha: float, horizon: int | None = None):
        if not 0 < alpha < 0.5:
            raise ValueError("alpha must lie in (0, 1/2)")
        self.cls = cls
        self.m_bits = m_bits
        self.alpha = alpha
        self.nodes = [(cls.initial_state(), 0.0, 0.0, 0)]  # state, log_mass, log_like, splits
        self.log_like_half = 0.0
        self._pending = None

    def predict(self, x):
        alpha = self.alpha
        ln = math.log
        transitions = []  # (label, log_mass, log_like, splits, state)
        for state, log_m, log_l, splits in self.nodes:
            kids = state.children(x)
            if len(kids) == 1:
                label, child = next(iter(kids.items()))
                transitions.append((label, log_m, log_l, splits, child))
            else:
                if splits + 1 > self.m_bits:
                    continue  # member indices exhausted on this path
                for label, child in kids.items():
                    transitions.append((label, log_m - ln(2), log_l, splits + 1, child))
        self._pending = (x, transitions)
        log_terms = []
        preds = []
        for label, log_m, log_l, _, _ in transitions:
            log_terms.append(log_m + log_l)
            preds.append(1 - alpha if label == 1 else alpha)
        log_terms.append(-self.m_bits * ln(2) + self.log_like_half)
        preds.append(0.5)
        log_terms = np.asarray(log_terms)
        preds = np.asarray(preds)
        w = np.exp(log_terms - log_terms.max())
        return float(np.dot(w, preds) / w.sum())

    def observe(self, y):
        x, transitions = self._pending
        alpha = self.alpha
        nodes = []
        for label, log_m, log_l, splits, child in transitions:
            p = 1 - alpha if label == 1 else alpha
            like = p if y == 1 else 1 - p
            nodes.append((child, log_m, log_l + math.log(like), splits))
        self.nodes = nodes
        self.log_like_half += math.log(0.5)
        self._pending = None

    def clone(self):
        c = TreeCoverBayesLearner.__new__(TreeCoverBayesLearner)
        c.cls = self.cls
        c.m_bits = self.m_bits
        c.alpha = self.alpha
        c.nodes = list(self.nodes)
        c.log_like_half = self.log_like_half
        c._pending = self._pending
        return c


class ThresholdTreeBayesLearner(Learner):
    """Vectorized TreeCoverBayesLearner for 1-d thresholds (1{x >= a}).

    Node states are consistent-cut intervals, kept as parallel numpy arrays;
    each step forces every node except the at-most-one it splits.
    """

    def __init__(self, cls, m_bits: int, alpha: float, horizon: int | None = None):
        self.cls = cls
        self.m_bits = m_bits
        self.alpha = alpha
        r = cls.grid_r
        self.zero_hi = np.array([-1], dtype=np.int64)
        self.one_lo = np.array([r + 2], dtype=np.int64)
        self.log_m = np.zeros(1)
        self.log_l = np.zeros(1)
        self.splits = np.zeros(1, dtype=np.int64)
        self.log_like_half = 0.0
        self._pending = None

    def _split_node(self, x):
        inside = (self.zero_hi < x) & (x < self.one_lo)
        idx = np.nonzero(inside)[0]
        return idx[0] if len(idx) else None

    def predict(self, x):
        alpha = self.alpha
        labels = (x >= self.one_lo).astype(float)  # forced-1 nodes
        preds = np.where(labels == 1.0, 1 - alpha, alpha)
        i = self._split_node(x)
        log_terms = self.log_m + self.log_l
        if i is not None and self.splits[i] + 1 <= self.m_bits:
            log_terms = np.append(log_terms, log_terms[i] - math.log(2))
            log_terms[i] -= math.log(2)
            preds = np.append(preds, 1 - alpha)  # the 1-labeled twin
            preds[i] = alpha
        elif i is not None:
            log_terms = np.delete(log_terms, i)
            preds = np.delete(preds, i)
        log_terms = np.append(log_terms, -self.m_bits * math.log(2) + self.log_like_half)
        preds = np.append(preds, 0.5)
        self._pending = x
        w = np.exp(log_terms - log_terms.max())
        return float(np.dot(w, preds) / w.sum())

    def observe(self, y):
        x = self._pending
        alpha = self.alpha
        i = self._split_node(x)
        if i is not None:
            if self.splits[i] + 1 <= self.m_bits:
                # split node i into a 0-child (in place) and a 1-child (appended)
                self.zero_hi = np.append(self.zero_hi, self.zero_hi[i])
                self.one_lo = np.append(self.one_lo, x)
                self.log_m = np.append(self.log_m, self.log_m[i] - math.log(2))
                self.log_l = np.append(self.log_l, self.log_l[i])
                self.splits = np.append(self.splits, self.splits[i] + 1)
                self.zero_hi[i] = x
                self.log_m[i] -= math.log(2)
                self.splits[i] += 1
            else:
                self.zero_hi = np.delete(self.zero_hi, i)
                self.one_lo = np.delete(self.one_lo, i)
                self.log_m = np.delete(self.log_m, i)
                self.log_l = np.delete(self.log_l, i)
                self.splits = np.delete(self.splits, i)
        pred_one = x >= self.one_lo
        p = np.where(pred_one, 1 - alpha, alpha)
        like = p if y == 1 else 1 - p
        self.log_l = self.log_l + np.log(like)
        self.log_like_half += math.log(0.5)
        self._pending = None

    def clone(self):
        c = ThresholdTreeBayesLearner.__new__(ThresholdTreeBayesLearner)
        c.cls = self.cls
        c.m_bits = self.m_bits
        c.alpha = self.alpha
        for name in ("zero_hi", "one_lo", "log_m", "log_l", "splits"):
            setattr(c, name, getattr(self, name).copy())
        c.log_like_half = self.log_like_half
        c._pending = self._pending
        return c


class NmlLearner(Learner):
    """Normalized-maximum-likelihood predictor for a known feature sequence.

    For binary expert classes under log loss the conditional probabilities
    are ratios of realizable-continuation counts, which makes the realized
    regret the log behavior count on every realizable label sequence.
    """

    def __init__(self, cls, features):
        self.cls = cls
        self.features = list(features)
        self.behavior_labels = [b.labels for b in cls.behaviors(self.features)]
        self.t = 0
        self.alive = list(range(len(self.behavior_labels)))
        self._pending = None

    def predict(self, x):
        if x != self.features[self.t]:
            raise ValueError("NML learner requires the announced feature sequence")
        if not self.alive:
            return 0.5  # labels already left the class
        ones = sum(1 for i in self.alive if self.behavior_labels[i][self.t] == 1)
        return ones / len(self.alive)

    def observe(self, y):
        self.alive = [i for i in self.alive if self.behavior_labels[i][self.t] == int(y)]
        self.t += 1
        self._pending = None

    def clone(self):
        c = NmlLearner.__new__(NmlLearner)
        c.cls = self.cls
        c.features = self.features
        c.behavior_labels = self.behavior_labels
        c.t = self.t
        c.alive = list(self.alive)
        c._pending = self._pending
        return c


class SparseBayesLearner(Learner):
    """Exact Bayes posterior over a sparse-indicator class, clipped output.

    Under realizable labels the posterior is uniform over the consistent
    support sets, so the predictive probability for an unseen point is a
    ratio of binomial tail sums; O(1) per step.
    """

    def __init__(self, cls, alpha: float):
        self.cls = cls
        self.alpha = alpha
        self.ones = set()
        self.zeros = set()
        self._pending = None

    def _prob_one(self, x):
        if x in self.ones:
            return 1.0
        if x in self.zeros:
            return 0.0
        n_free = self.cls.domain_size - len(self.ones) - len(self.zeros)
        slots = self.cls.budget - len(self.ones)
        if slots <= 0:
            return 0.0
        total = sum(math.comb(n_free, j) for j in range(slots + 1))
        containing = sum(math.comb(n_free - 1, j) for j in range(slots))
        return containing / total

    def predict(self, x):
        self._pending = x
        p = self._prob_one(x)
        return min(max(p, self.alpha), 1 - self.alpha)

    def observe(self, y):
        x = self._pending
        (self.ones if int(y) == 1 else self.zeros).add(x)
        self._pending = None

    def clone(self):
        c = SparseBayesLearner(self.cls, self.alpha)
        c.ones = set(self.ones)
        c.zeros = set(self.zeros)
        c._pending = self._pending
        return c


class SparsePluginLearner(Learner):
    """Predicts the empirical label of seen points, alpha for unseen ones."""

    def __init__(self, cls, alpha: float):
        self.cls = cls
        self.alpha = alpha
        self.known = {}
        self._pending = None

    def predict(self, x):
        self._pending = x
        y = self.known.get(x, 0)
        return 1 - self.alpha if y == 1 else self.alpha

    def observe(self, y):
        self.known[self._pending] = int(y)
        self._pending = None

    def clone(self):
        c = SparsePluginLearner(self.cls, self.alpha)
        c.known = dict(self.known)
        c._pending = self._pending
        return c
