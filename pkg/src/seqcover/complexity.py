"""Combinatorial complexity measures: VC, Star, Star-Littlestone, fat-shattering.

Brute-force paths are oracles for tests, gated behind explicit size caps
(domain <= 12 points, tree depth <= 4); anything larger must be declared
analytically by the class or it is an error.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .domain import (
    HypothesisClass,
    IntervalState,
    Monotone1D,
    SparseState,
    TableState,
    ThresholdState,
)
from .errors import ComplexityBudgetError

BRUTE_DOMAIN_CAP = 12
DEPTH_CAP = 4


@dataclass
class ComplexityReport:
    """Complexity numbers for one class; infeasible entries are left out."""

    vc: Optional[int] = None
    star: Optional[float] = None
    sl_at_scale: dict = field(default_factory=dict)
    fat: dict = field(default_factory=dict)


def _materialize(cls: HypothesisClass, points) -> frozenset:
    """Class restricted to `points` as a set of label vectors."""
    return frozenset(b.labels for b in cls.behaviors(list(points)))


def _require_brute_points(cls: HypothesisClass):
    points = cls.brute_points()
    if points is None or len(points) > BRUTE_DOMAIN_CAP:
        raise ComplexityBudgetError(
            f"{cls.kind} has no declared value and its domain exceeds the "
            f"brute-force cap of {BRUTE_DOMAIN_CAP} points"
        )
    return points


def _shatters(vectors: frozenset, coords: tuple[int, ...]) -> bool:
    patterns = {tuple(v[c] for c in coords) for v in vectors}
    return len(patterns) == 2 ** len(coords)


def _brute_vc(vectors: frozenset, n_points: int) -> int:
    for d in range(n_points, 0, -1):
        for coords in itertools.combinations(range(n_points), d):
            if _shatters(vectors, coords):
                return d
    return 0


def vc_dimension(cls: HypothesisClass) -> int:
    """VC dimension: declared analytically or brute forced on small domains."""
    if cls.declared_vc is not None:
        return cls.declared_vc
    points = _require_brute_points(cls)
    return _brute_vc(_materialize(cls, points), len(points))


def _star_of_vectors(vectors: frozenset, n_points: int) -> int:
    """Largest d such that some coordinate subset admits a full star.

    A star on coords C with center v needs, for every c in C, a vector that
    flips v at c and agrees on C minus c; coordinates outside the sampled
    subset are unconstrained, so the check runs on restrictions.
    """
    vec_list = list(vectors)
    for d in range(n_points, 0, -1):
        for coords in itertools.combinations(range(n_points), d):
            restricted = {tuple(v[c] for c in coords) for v in vec_list}
            for center in restricted:
                full_star = all(
                    tuple(1 - x if i == c else x for i, x in enumerate(center)) in restricted
                    for c in range(d)
                )
                if full_star:
                    return d
    return 0


def star_number(cls: HypothesisClass):
    """Star number: declared analytically or brute forced on small domains."""
    if cls.declared_star is not None:
        return cls.declared_star
    points = _require_brute_points(cls)
    return _star_of_vectors(_materialize(cls, points), len(points))


def subclass_star(cls: HypothesisClass, state) -> float:
    """Star number of the hypotheses consistent with a constraint state.

    Exact for the compact states; FiniteTable falls back to a brute-force
    count over the restricted table.
    """
    if isinstance(state, ThresholdState):
        return min(2, state.free_count())
    if isinstance(state, IntervalState):
        left, right = state.free_counts()
        if state.one_lo is None:
            return left
        return min(2, left) + min(2, right)
    if isinstance(state, SparseState):
        free = cls.domain_size - len(state.ones) - len(state.zeros)
        return free if len(state.ones) < state.budget else 0
    if isinstance(state, TableState):
        vecs = frozenset(state.table[h] for h in state.alive)
        return _star_of_vectors(vecs, cls.n_points) if vecs else 0
    raise ComplexityBudgetError(f"no subclass star oracle for {cls.kind}")


def star_littlestone_dimension(cls: HypothesisClass, s: int, depth_cap: int = DEPTH_CAP) -> int:
    """Max depth (capped, floored at 0) of a tree all of whose path-consistent
    subclasses have Star number exceeding `s`."""
    if depth_cap > DEPTH_CAP:
        raise ComplexityBudgetError(f"depth_cap {depth_cap} exceeds cap {DEPTH_CAP}")
    points = _require_brute_points(cls)
    n = len(points)
    all_vecs = _materialize(cls, points)

    @lru_cache(maxsize=None)
    def shatterable(vecs: frozenset, depth: int) -> bool:
        if depth == 0:
            return _star_of_vectors(vecs, n) > s
        for c in range(n):
            lo = frozenset(v for v in vecs if v[c] == 0)
            hi = frozenset(v for v in vecs if v[c] == 1)
            if lo and hi and shatterable(lo, depth - 1) and shatterable(hi, depth - 1):
                return True
        return False

    best = 0
    for d in range(depth_cap, -1, -1):
        if shatterable(all_vecs, d):
            best = d
            break
    shatterable.cache_clear()
    return best


# ---------------------------------------------------------------------------
# fat shattering


def _fat_monotone(cls: Monotone1D, alpha: Fraction) -> int:
    """Fat-shattering of nondecreasing step functions into the value grid.

    Sample positions are interchangeable, so only witness levels matter.  A
    witness chain s_1 < ... < s_d works for every subset iff each s_t has a
    value at distance alpha on both sides and the up-value at t does not
    exceed the down-value at t+1 (monotone selections then exist greedily
    for every subset), so the maximum chain is found greedily by always
    taking the witness with the smallest up-value.  Midpoints of value pairs
    are a complete witness candidate set.
    """
    values = [cls.value_fraction(v) for v in cls.values]
    candidates = sorted(
        {Fraction(a + b, 2) for a in values for b in values} | set(values)
    )

    def up(s):
        feas = [v for v in values if v >= s + alpha]
        return min(feas) if feas else None

    def down(s):
        feas = [v for v in values if v <= s - alpha]
        return max(feas) if feas else None

    d = 0
    floor_needed = None  # down(s) must reach the previous up-value
    while True:
        best_up = None
        for s in candidates:
            u, lo = up(s), down(s)
            if u is None or lo is None:
                continue
            if floor_needed is not None and lo < floor_needed:
                continue
            if best_up is None or u < best_up:
                best_up = u
        if best_up is None:
            return d
        d += 1
        floor_needed = best_up
        if d > len(values) + 1:
            raise ComplexityBudgetError("monotone fat-shattering chain ran away")


def fat_shattering(cls: HypothesisClass, alpha) -> int:
    """Fat-shattering number d(alpha); exact within the brute-force gates."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if alpha > Fraction(1, 2):
        return 0
    if cls.output_kind == "binary":
        # witness 1/2 turns margin-alpha shattering into plain VC shattering
        return vc_dimension(cls)
    if isinstance(cls, Monotone1D):
        return _fat_monotone(cls, alpha)
    raise ComplexityBudgetError(f"no fat-shattering path for {cls.kind}")


def complexity_report(cls: HypothesisClass, star_scales=(), fat_scales=()) -> ComplexityReport:
    report = ComplexityReport()
    try:
        report.vc = vc_dimension(cls)
    except ComplexityBudgetError:
        pass
    try:
        report.star = star_number(cls)
    except ComplexityBudgetError:
        pass
    for s in star_scales:
        try:
            report.sl_at_scale[s] = star_littlestone_dimension(cls, s)
        except ComplexityBudgetError:
            pass
    for a in fat_scales:
        try:
            report.fat[str(a)] = fat_shattering(cls, Fraction(a))
        except ComplexityBudgetError:
            pass
    if (
        report.vc is not None
        and report.star is not None
        and math.isfinite(report.star)
        and report.star < report.vc
    ):
        raise AssertionError("star number below VC dimension: enumeration bug")
    return report
