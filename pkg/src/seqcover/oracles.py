"""Independent oracles for the quantitative claims the experiments test.

Everything here is deliberately simple and self-contained: exact counting,
exact small-horizon backward induction, exact-fraction recursions, and
seeded Monte Carlo with explicit trial counts.  The experiment code is
checked against these, never the other way around.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right, insort
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .domain import HypothesisClass, SparseIndicator
from .errors import SeqcoverError
from .predictors import one_inclusion_mistakes


@dataclass
class OracleResult:
    name: str
    measured: float
    bound: float
    direction: str  # "<=" or ">="
    trials: int
    seed: int

    @property
    def passed(self) -> bool:
        if self.direction == "<=":
            return self.measured <= self.bound
        return self.measured >= self.bound

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "measured": self.measured,
            "bound": self.bound,
            "direction": self.direction,
            "trials": self.trials,
            "seed": self.seed,
            "pass": self.passed,
        }


# ---------------------------------------------------------------------------
# fixed-design log-loss regret


def shtarkov_logloss_regret(cls: HypothesisClass, sample) -> float:
    """Fixed-design minimax log-loss regret on `sample`.

    For binary experts the maximum-likelihood product is 1 exactly on
    realizable label vectors, so the sum counts behaviors.
    """
    if cls.output_kind != "binary":
        raise SeqcoverError("the Shtarkov counting oracle needs binary experts")
    return math.log(len(cls.behaviors(list(sample))))


def monotonicity_check(cls: HypothesisClass, sample_small, sample_large) -> bool:
    """Fixed-design regret may only grow when the sample multiset grows."""
    small = list(sample_small)
    large = list(sample_large)
    remaining = list(large)
    for x in small:
        if x not in remaining:
            raise ValueError("sample_small is not a sub-multiset of sample_large")
        remaining.remove(x)
    return shtarkov_logloss_regret(cls, small) <= shtarkov_logloss_regret(cls, large) + 1e-12


def exact_fixed_design_regret(cls: HypothesisClass, sample) -> float:
    """Backward-induction value of the fixed-design log-loss game.

    The minimax step min_q max(-log q + V1, -log(1-q) + V0) solves in closed
    form: exp(V) satisfies W = W0 + W1 with W = 1 at realizable leaves, so
    the value is the log behavior count; kept as an explicit recursion so it
    stays independent of the Shtarkov counting path.
    """
    sample = list(sample)
    behaviors = [b.labels for b in cls.behaviors(sample)]

    def w(t, prefix):
        live = [b for b in behaviors if b[:t] == prefix]
        if not live:
            return 0.0
        if t == len(sample):
            return 1.0
        return w(t + 1, prefix + (0,)) + w(t + 1, prefix + (1,))

    total = w(0, ())
    if total <= 0:
        raise SeqcoverError("empty class")
    return math.log(total)


# ---------------------------------------------------------------------------
# coupon collector


def coupon_collector_tail(T: int, c: float, trials: int, seed: int = 0) -> float:
    """Empirical Pr[tau > T ln T + c T] for uniform draws over [T].

    The comparison is strict so integer-valued thresholds (only possible at
    tiny T) resolve the way the union-bound proof does.
    """
    if T < 1 or c < 0:
        raise ValueError("need T >= 1 and c >= 0")
    threshold = T * math.log(T) + c * T
    rng = np.random.default_rng(seed)
    hits = 0
    block = int(max(2 * threshold, 4 * T))
    for _ in range(trials):
        seen = np.zeros(T, dtype=bool)
        count = 0
        tau = 0
        done = False
        while not done:
            draws = rng.integers(0, T, size=block)
            for d in draws:
                tau += 1
                if not seen[d]:
                    seen[d] = True
                    count += 1
                    if count == T:
                        done = True
                        break
        hits += tau > threshold
    return hits / trials


# ---------------------------------------------------------------------------
# threshold lower-bound game


def threshold_game_value(T_max: int) -> list[Fraction]:
    """Exact values of the halving-game recursion f(T) = (2/T^2) sum t(f(t)+1).

    Returns f[0..T_max] with f[0] unused and f[1] = 0, as exact fractions.
    """
    if T_max < 1:
        raise ValueError("T_max must be >= 1")
    f = [Fraction(0)] * (T_max + 1)
    running = Fraction(0)  # sum_{t<T} t*(f(t)+1)
    for T in range(2, T_max + 1):
        running += (T - 1) * (f[T - 1] + 1)
        f[T] = 2 * running / T**2
    return f


def bayes_threshold_errors(T: int, trials: int, seed: int = 0, degenerate: bool = False) -> float:
    """Mean mistakes of the Bayes rule in the rank-revealed threshold game.

    A target cut A and T sample points are exchangeable draws; each step
    reveals the query's rank inside the still-consistent pool S, the
    predictor takes the majority side (its error probability is
    min(t, m+1-t)/(m+1)), and the losing side of S is discarded.  Points
    outside S have known labels and cost nothing.
    """
    rng = np.random.default_rng(seed)
    total = 0
    for _ in range(trials):
        pool = rng.permutation(T + 1)
        a = int(pool[0])
        xs = [int(v) for v in pool[1:]]
        if degenerate:
            xs = [xs[0]] * T
        s = sorted(xs)
        lo, hi = -math.inf, math.inf  # revealed bounds: label known outside (lo, hi)
        for x in xs:
            if not (lo < x < hi):
                continue  # label already determined, no mistake
            left = bisect_left(s, x) if s else 0
            m = len(s)
            predict_one = left + 1 > (m + 1) - (left + 1)  # majority side
            truth_one = x >= a
            total += predict_one != truth_one
            if a > x:
                del s[: bisect_right(s, x)]
                lo = max(lo, x)
            else:
                del s[bisect_left(s, x) :]
                hi = min(hi, x)
    return total / trials


# ---------------------------------------------------------------------------
# double sampling gap


def greedy_statistical_cover(cls: SparseIndicator, epsilon: float) -> list | str:
    """Greedy epsilon-cover of a sparse class under the uniform marginal.

    Distinct hypotheses differ on at least 1/N of the mass, so any epsilon
    below 1/N forces the exact cover; that case is returned as the marker
    "full" and treated as the whole class without materializing it.
    """
    if not isinstance(cls, SparseIndicator):
        raise SeqcoverError("statistical covers implemented for sparse indicators")
    n = cls.domain_size
    if epsilon < 1.0 / n:
        return "full"
    chosen: list[frozenset] = []
    # hypotheses are subsets of size <= budget; greedy in size order
    import itertools

    for size in range(cls.budget + 1):
        for subset in itertools.combinations(range(n), size):
            s = frozenset(subset)
            if all(len(s ^ f) / n > epsilon for f in chosen):
                chosen.append(s)
    return chosen


def double_sampling_gap(
    cls: SparseIndicator,
    T: int,
    trials: int,
    seed: int = 0,
    cover=None,
) -> float:
    """Monte-Carlo mean of sup_h inf_f (disagreements of h with its nearest
    cover member on T uniform draws); cover defaults to the greedy 1/T^2 one."""
    if cover is None:
        cover = greedy_statistical_cover(cls, 1.0 / T**2)
    if cover == "full":
        return 0.0  # inf over f includes h itself on every draw
    rng = np.random.default_rng(seed)
    total = 0.0
    for _ in range(trials):
        draw = rng.integers(0, cls.domain_size, size=T)
        counts = np.bincount(draw, minlength=cls.domain_size)
        if len(cover) == 1 and len(cover[0]) == 0:
            # distance to the all-zero function is the mass h marks: the
            # adversarial h takes the most-hit `budget` points
            top = np.sort(counts)[::-1][: cls.budget]
            total += float(top.sum())
            continue
        total += _sup_inf_disagreement(cls, cover, counts)
    return total / trials


def _sup_inf_disagreement(cls, cover, counts) -> float:
    import itertools

    hit = [i for i in range(cls.domain_size) if counts[i] > 0]
    best = 0.0
    for size in range(cls.budget + 1):
        for subset in itertools.combinations(hit, size):
            h = frozenset(subset)
            inf = min(
                sum(counts[p] for p in (h ^ f) if counts[p] > 0) for f in cover
            )
            best = max(best, inf)
    return best


# ---------------------------------------------------------------------------
# product distributions of a given type


def type_k_error_bound(
    cls: HypothesisClass,
    marginal_samplers,
    assignment,
    T: int,
    trials: int,
    seed: int = 0,
) -> float:
    """Mean over trials of the worst-behavior cumulative 1-inclusion error
    under a product distribution with one marginal per assignment slot."""
    if len(assignment) != T:
        raise ValueError("assignment must give one marginal index per step")
    totals = []
    for trial in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence((seed, trial)))
        draw = [marginal_samplers[assignment[t]](rng) for t in range(T)]
        totals.append(_sup_behavior_mistakes(cls, draw))
    return float(np.mean(totals))


def _sup_behavior_mistakes(cls, draw) -> int:
    from .domain import Threshold1D
    from .predictors import threshold_mistake_counts

    if isinstance(cls, Threshold1D) and cls.direction == "ge":
        _, counts = threshold_mistake_counts(list(draw))
        return int(counts.max())
    behaviors = cls.behaviors(list(draw))
    return max(one_inclusion_mistakes(cls, list(draw), b.witness) for b in behaviors)
