"""Feature domains, concrete hypothesis classes, and behavior enumeration.

Features are exact grid points: an element of a finite set {0,..,N-1} or a
numerator k of the rational k/R on [0,1] with a shared denominator R.  All
comparisons are integer comparisons, so certification and behavior
enumeration never hit float ties.  Multi-dimensional classes use tuples of
numerators.

Real-valued outputs are returned as `fractions.Fraction` so that cover
scales compare exactly; binary outputs are plain ints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .errors import (
    DomainError,
    EnumerationInfeasibleError,
    UnknownHypothesisError,
    UnrealizableLabelsError,
)

DEFAULT_GRID_DENOMINATOR = 2**20

#: hard cap on materialized behavior lists before enumeration gives up
BEHAVIOR_CAP = 500_000


@dataclass(frozen=True)
class Behavior:
    """One restriction of the class to a sample: labels plus a witness id."""

    labels: tuple
    witness: object


class HypothesisClass:
    """Base for finitely enumerable expert classes.

    Subclasses implement `evaluate` plus an analytic `behaviors` enumeration
    (never a scan over a parameter grid).  `initial_state` returns a
    consistency-state object supporting `children(x)`; classes without a
    compact state fall back to enumeration-based certification.
    """

    kind: str = "abstract"
    output_kind: str = "binary"
    declared_vc: Optional[int] = None
    declared_star = None  # int or math.inf or None

    def evaluate(self, h, x):
        raise NotImplementedError

    def behaviors(self, sample: Sequence) -> list[Behavior]:
        raise NotImplementedError

    def initial_state(self):
        return None

    def validate_feature(self, x) -> None:
        raise NotImplementedError

    def brute_points(self) -> Optional[list]:
        """Full domain as a point list when small enough to brute force."""
        return None

    def describe(self) -> dict:
        return {"kind": self.kind}


def _unique_sorted(sample: Sequence) -> list:
    return sorted(set(sample))


# ---------------------------------------------------------------------------
# consistency states: the set of hypotheses consistent with (feature, label)
# constraints, compressed to a kind-specific summary.


class TableState:
    __slots__ = ("table", "alive")

    def __init__(self, table, alive: frozenset):
        self.table = table
        self.alive = alive

    def children(self, x):
        groups: dict[int, set] = {}
        for h in self.alive:
            groups.setdefault(self.table[h][x], set()).add(h)
        return {
            label: TableState(self.table, frozenset(ids))
            for label, ids in groups.items()
        }

    def witness(self):
        return min(self.alive)


class ThresholdState:
    """Consistent cuts for 1{x >= a} (ge) or 1{x <= b} (le).

    For `ge`, `zero_hi` is the largest value labeled 0 and `one_lo` the
    smallest labeled 1 (sentinels -1 and R+2); the consistent cuts are
    a in (zero_hi, one_lo].  The `le` direction mirrors the roles.
    """

    __slots__ = ("direction", "grid_r", "zero_hi", "one_lo")

    def __init__(self, direction, grid_r, zero_hi, one_lo):
        self.direction = direction
        self.grid_r = grid_r
        self.zero_hi = zero_hi
        self.one_lo = one_lo

    def children(self, x):
        if self.direction == "le":
            x = self.grid_r - x
        if x >= self.one_lo:
            return {self._out(1): self}
        if x <= self.zero_hi:
            return {self._out(0): self}
        return {
            self._out(0): ThresholdState(self.direction, self.grid_r, x, self.one_lo),
            self._out(1): ThresholdState(self.direction, self.grid_r, self.zero_hi, x),
        }

    @staticmethod
    def _out(label):
        return label

    def free_count(self) -> int:
        return max(0, self.one_lo - self.zero_hi - 1)

    def witness(self):
        a = self.one_lo if self.one_lo <= self.grid_r + 1 else self.grid_r + 1
        a = max(a, 0)
        if self.direction == "le":
            return self.grid_r - a if a <= self.grid_r else -1
        return a


class IntervalState:
    """Consistent intervals given 0/1 constraints on grid points.

    Before any 1-label the state keeps the zero set; afterwards only the
    anchored span [one_lo, one_hi] and the nearest blocking zeros matter.
    """

    __slots__ = ("grid_r", "zeros", "one_lo", "one_hi", "block_lo", "block_hi")

    def __init__(self, grid_r, zeros, one_lo, one_hi, block_lo, block_hi):
        self.grid_r = grid_r
        self.zeros = zeros
        self.one_lo = one_lo
        self.one_hi = one_hi
        self.block_lo = block_lo
        self.block_hi = block_hi

    @classmethod
    def fresh(cls, grid_r):
        return cls(grid_r, frozenset(), None, None, -1, grid_r + 1)

    def children(self, x):
        if self.one_lo is None:
            if x in self.zeros:
                return {0: self}
            block_lo = max((z for z in self.zeros if z < x), default=-1)
            block_hi = min((z for z in self.zeros if z > x), default=self.grid_r + 1)
            return {
                0: IntervalState(self.grid_r, self.zeros | {x}, None, None, -1, self.grid_r + 1),
                1: IntervalState(self.grid_r, frozenset(), x, x, block_lo, block_hi),
            }
        if self.one_lo <= x <= self.one_hi:
            return {1: self}
        if x <= self.block_lo or x >= self.block_hi:
            return {0: self}
        if x < self.one_lo:
            return {
                0: IntervalState(self.grid_r, frozenset(), self.one_lo, self.one_hi, x, self.block_hi),
                1: IntervalState(self.grid_r, frozenset(), x, self.one_hi, self.block_lo, self.block_hi),
            }
        return {
            0: IntervalState(self.grid_r, frozenset(), self.one_lo, self.one_hi, self.block_lo, x),
            1: IntervalState(self.grid_r, frozenset(), self.one_lo, x, self.block_lo, self.block_hi),
        }

    def free_counts(self) -> tuple[int, int]:
        """Unconstrained grid points left/right of the anchored span."""
        if self.one_lo is None:
            free = self.grid_r + 1 - len(self.zeros)
            return (free, 0)
        left = max(0, self.one_lo - self.block_lo - 1)
        right = max(0, self.block_hi - self.one_hi - 1)
        return (left, right)

    def witness(self):
        if self.one_lo is None:
            return None
        return (self.one_lo, self.one_hi)


class SparseState:
    __slots__ = ("budget", "ones", "zeros")

    def __init__(self, budget, ones, zeros):
        self.budget = budget
        self.ones = ones
        self.zeros = zeros

    def children(self, x):
        if x in self.ones:
            return {1: self}
        if x in self.zeros:
            return {0: self}
        out = {0: SparseState(self.budget, self.ones, self.zeros | {x})}
        if len(self.ones) < self.budget:
            out[1] = SparseState(self.budget, self.ones | {x}, self.zeros)
        return out

    def witness(self):
        return frozenset(self.ones)


# ---------------------------------------------------------------------------
# concrete classes


class FiniteTable(HypothesisClass):
    """Explicit row matrix: rows are hypotheses, columns are domain points."""

    kind = "finite_table"

    def __init__(self, rows: Sequence[Sequence[int]]):
        rows = [tuple(int(v) for v in r) for r in rows]
        if not rows:
            raise ValueError("finite table needs at least one row")
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise ValueError("finite table rows must have equal length")
        if len(set(rows)) != len(rows):
            raise ValueError("finite table rows must be distinct")
        for r in rows:
            if any(v not in (0, 1) for v in r):
                raise ValueError("finite table entries must be 0/1")
        self.rows = rows
        self.n_points = len(rows[0])

    def validate_feature(self, x):
        if not isinstance(x, int) or not 0 <= x < self.n_points:
            raise DomainError(f"feature {x!r} outside finite domain of size {self.n_points}")

    def evaluate(self, h, x):
        self.validate_feature(x)
        if not isinstance(h, int) or not 0 <= h < len(self.rows):
            raise UnknownHypothesisError(f"no hypothesis {h!r}")
        return self.rows[h][x]

    def behaviors(self, sample):
        for x in sample:
            self.validate_feature(x)
        seen: dict[tuple, int] = {}
        for i, row in enumerate(self.rows):
            labels = tuple(row[x] for x in sample)
            seen.setdefault(labels, i)
        return [Behavior(labels, w) for labels, w in sorted(seen.items())]

    def initial_state(self):
        return TableState(self.rows, frozenset(range(len(self.rows))))

    def brute_points(self):
        return list(range(self.n_points))

    def hypothesis_ids(self):
        return range(len(self.rows))

    def describe(self):
        return {"kind": self.kind, "rows": [list(r) for r in self.rows]}


class Threshold1D(HypothesisClass):
    """1{x >= a} (or 1{x <= b} for direction "le") on the [0,1] grid.

    Hypothesis ids are cut numerators; for "ge", a in {0,..,R+1} where R+1
    denotes the all-zero function.
    """

    kind = "threshold1d"
    declared_vc = 1
    declared_star = 2

    def __init__(self, grid_denominator: int = DEFAULT_GRID_DENOMINATOR, direction: str = "ge"):
        if direction not in ("ge", "le"):
            raise ValueError("direction must be 'ge' or 'le'")
        self.grid_r = int(grid_denominator)
        self.direction = direction

    def validate_feature(self, x):
        if not isinstance(x, int) or not 0 <= x <= self.grid_r:
            raise DomainError(f"feature {x!r} outside grid 0..{self.grid_r}")

    def evaluate(self, h, x):
        self.validate_feature(x)
        if not isinstance(h, int):
            raise UnknownHypothesisError(f"no hypothesis {h!r}")
        if self.direction == "ge":
            if not 0 <= h <= self.grid_r + 1:
                raise UnknownHypothesisError(f"cut {h!r} outside 0..{self.grid_r + 1}")
            return 1 if x >= h else 0
        if not -1 <= h <= self.grid_r:
            raise UnknownHypothesisError(f"cut {h!r} outside -1..{self.grid_r}")
        return 1 if x <= h else 0

    def behaviors(self, sample):
        for x in sample:
            self.validate_feature(x)
        u = _unique_sorted(sample)
        out = []
        if self.direction == "ge":
            witnesses = list(u) + [self.grid_r + 1]
            for c, w in enumerate(witnesses):
                labels = tuple(1 if x >= w else 0 for x in sample)
                out.append(Behavior(labels, w))
        else:
            witnesses = [-1] + list(u)
            for w in witnesses:
                labels = tuple(1 if x <= w else 0 for x in sample)
                out.append(Behavior(labels, w))
        return sorted(set(out), key=lambda b: b.labels)

    def initial_state(self):
        return ThresholdState(self.direction, self.grid_r, -1, self.grid_r + 2)

    def brute_points(self):
        if self.grid_r + 1 <= 12:
            return list(range(self.grid_r + 1))
        return None

    def describe(self):
        return {"kind": self.kind, "grid_denominator": self.grid_r, "direction": self.direction}


class Interval1D(HypothesisClass):
    """Indicators 1{a <= x <= b} of grid intervals, plus the empty indicator."""

    kind = "interval1d"
    declared_vc = 2
    declared_star = float("inf")

    def __init__(self, grid_denominator: int = DEFAULT_GRID_DENOMINATOR):
        self.grid_r = int(grid_denominator)

    def validate_feature(self, x):
        if not isinstance(x, int) or not 0 <= x <= self.grid_r:
            raise DomainError(f"feature {x!r} outside grid 0..{self.grid_r}")

    def evaluate(self, h, x):
        self.validate_feature(x)
        if h is None:
            return 0
        if not (isinstance(h, tuple) and len(h) == 2 and h[0] <= h[1]):
            raise UnknownHypothesisError(f"no hypothesis {h!r}")
        a, b = h
        return 1 if a <= x <= b else 0

    def behaviors(self, sample):
        for x in sample:
            self.validate_feature(x)
        u = _unique_sorted(sample)
        seen: dict[tuple, object] = {tuple(0 for _ in sample): None}
        for i in range(len(u)):
            for j in range(i, len(u)):
                labels = tuple(1 if u[i] <= x <= u[j] else 0 for x in sample)
                seen.setdefault(labels, (u[i], u[j]))
        return [Behavior(labels, w) for labels, w in sorted(seen.items(), key=lambda kv: kv[0])]

    def initial_state(self):
        return IntervalState.fresh(self.grid_r)

    def brute_points(self):
        if self.grid_r + 1 <= 12:
            return list(range(self.grid_r + 1))
        return None

    def describe(self):
        return {"kind": self.kind, "grid_denominator": self.grid_r}


class SparseIndicator(HypothesisClass):
    """Indicators of point sets of size at most `budget` over {0,..,N-1}."""

    kind = "sparse_indicator"

    def __init__(self, domain_size: int, budget: int):
        if domain_size < 1 or budget < 0:
            raise ValueError("need domain_size >= 1 and budget >= 0")
        self.domain_size = int(domain_size)
        self.budget = int(budget)

    @property
    def declared_vc(self):
        return min(self.budget, self.domain_size)

    @property
    def declared_star(self):
        return self.domain_size if self.budget >= 1 else 0

    def validate_feature(self, x):
        if not isinstance(x, int) or not 0 <= x < self.domain_size:
            raise DomainError(f"feature {x!r} outside finite domain of size {self.domain_size}")

    def evaluate(self, h, x):
        self.validate_feature(x)
        if not isinstance(h, frozenset) or len(h) > self.budget:
            raise UnknownHypothesisError(f"no hypothesis {h!r}")
        return 1 if x in h else 0

    def behaviors(self, sample):
        for x in sample:
            self.validate_feature(x)
        u = _unique_sorted(sample)
        k = min(self.budget, len(u))
        total = sum(_binom(len(u), i) for i in range(k + 1))
        if total > BEHAVIOR_CAP:
            raise EnumerationInfeasibleError(
                f"{total} sparse behaviors exceed cap {BEHAVIOR_CAP}"
            )
        out = []
        for size in range(k + 1):
            for subset in itertools.combinations(u, size):
                s = frozenset(subset)
                labels = tuple(1 if x in s else 0 for x in sample)
                out.append(Behavior(labels, s))
        return sorted(out, key=lambda b: b.labels)

    def initial_state(self):
        return SparseState(self.budget, frozenset(), frozenset())

    def brute_points(self):
        if self.domain_size <= 12:
            return list(range(self.domain_size))
        return None

    def describe(self):
        return {"kind": self.kind, "domain_size": self.domain_size, "budget": self.budget}


class AxisRectangle(HypothesisClass):
    """Indicators of axis-aligned grid boxes in d dimensions; features are tuples."""

    kind = "axis_rectangle"

    def __init__(self, dims: int, grid_denominator: int = DEFAULT_GRID_DENOMINATOR):
        if dims < 1:
            raise ValueError("dims must be >= 1")
        self.dims = int(dims)
        self.grid_r = int(grid_denominator)

    @property
    def declared_vc(self):
        return 2 * self.dims

    declared_star = float("inf")

    def validate_feature(self, x):
        if not (isinstance(x, tuple) and len(x) == self.dims):
            raise DomainError(f"feature {x!r} is not a {self.dims}-tuple")
        for v in x:
            if not isinstance(v, int) or not 0 <= v <= self.grid_r:
                raise DomainError(f"coordinate {v!r} outside grid 0..{self.grid_r}")

    def evaluate(self, h, x):
        self.validate_feature(x)
        if h is None:
            return 0
        if not (isinstance(h, tuple) and len(h) == self.dims):
            raise UnknownHypothesisError(f"no hypothesis {h!r}")
        for (a, b), v in zip(h, x):
            if not a <= v <= b:
                return 0
        return 1

    def behaviors(self, sample):
        for x in sample:
            self.validate_feature(x)
        axis_choices = []
        for axis in range(self.dims):
            u = _unique_sorted(v[axis] for v in sample)
            pairs = [(u[i], u[j]) for i in range(len(u)) for j in range(i, len(u))]
            axis_choices.append(pairs)
        total = 1
        for pairs in axis_choices:
            total *= max(1, len(pairs))
        if total > BEHAVIOR_CAP:
            raise EnumerationInfeasibleError(
                f"{total} rectangle candidates exceed cap {BEHAVIOR_CAP}"
            )
        seen: dict[tuple, object] = {tuple(0 for _ in sample): None}
        for combo in itertools.product(*axis_choices):
            labels = tuple(self.evaluate(combo, x) for x in sample)
            seen.setdefault(labels, combo)
        return [Behavior(labels, w) for labels, w in sorted(seen.items(), key=lambda kv: kv[0])]

    def describe(self):
        return {"kind": self.kind, "dims": self.dims, "grid_denominator": self.grid_r}


class Monotone1D(HypothesisClass):
    """Nondecreasing step functions from the [0,1] grid into a value grid V.

    A hypothesis id is a tuple of (start_numerator, value_numerator) steps:
    the function takes value v_i/value_denominator on [x_i, x_{i+1}).  Values
    are strictly increasing across steps and the first step starts at 0.
    """

    kind = "monotone1d"
    output_kind = "grid"

    def __init__(
        self,
        grid_denominator: int = DEFAULT_GRID_DENOMINATOR,
        value_denominator: int = 8,
        values: Optional[Sequence[int]] = None,
    ):
        self.grid_r = int(grid_denominator)
        self.value_den = int(value_denominator)
        if values is None:
            values = tuple(range(self.value_den + 1))
        values = tuple(sorted(set(int(v) for v in values)))
        if any(v < 0 or v > self.value_den for v in values):
            raise ValueError("values must be numerators in 0..value_denominator")
        self.values = values

    def validate_feature(self, x):
        if not isinstance(x, int) or not 0 <= x <= self.grid_r:
            raise DomainError(f"feature {x!r} outside grid 0..{self.grid_r}")

    def value_fraction(self, v: int) -> Fraction:
        return Fraction(v, self.value_den)

    def evaluate(self, h, x):
        self.validate_feature(x)
        if not (isinstance(h, tuple) and h and h[0][0] == 0):
            raise UnknownHypothesisError(f"no hypothesis {h!r}")
        value = h[0][1]
        for start, v in h:
            if x >= start:
                value = v
            else:
                break
        return self.value_fraction(value)

    def behaviors(self, sample):
        for x in sample:
            self.validate_feature(x)
        u = _unique_sorted(sample)
        m = len(u)
        if m == 0:
            return [Behavior((), ((0, self.values[0]),))]
        total = _binom(m + len(self.values) - 1, m)
        if total > BEHAVIOR_CAP:
            raise EnumerationInfeasibleError(
                f"{total} monotone behaviors exceed cap {BEHAVIOR_CAP}"
            )
        rank = {x: i for i, x in enumerate(u)}
        out = []
        for assign in itertools.combinations_with_replacement(self.values, m):
            steps = [(0, assign[0])]
            for i in range(1, m):
                if assign[i] != assign[i - 1]:
                    steps.append((u[i], assign[i]))
            witness = tuple(steps)
            labels = tuple(self.value_fraction(assign[rank[x]]) for x in sample)
            out.append(Behavior(labels, witness))
        return sorted(out, key=lambda b: b.labels)

    def describe(self):
        return {
            "kind": self.kind,
            "grid_denominator": self.grid_r,
            "value_denominator": self.value_den,
            "values": list(self.values),
        }


def _binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


# ---------------------------------------------------------------------------
# module-level operations


def evaluate(cls: HypothesisClass, h, x):
    """Output of hypothesis `h` at feature `x`."""
    return cls.evaluate(h, x)


def enumerate_behaviors(cls: HypothesisClass, sample: Sequence) -> list[Behavior]:
    """Exact set of distinct restrictions of the class to `sample`."""
    return cls.behaviors(sample)


def _feed_state(cls, prefix, labels):
    state = cls.initial_state()
    if state is None:
        return None
    for x, y in zip(prefix, labels):
        nxt = state.children(x)
        if y not in nxt:
            raise UnrealizableLabelsError(f"labels {list(labels)!r} not realizable on prefix")
        state = nxt[y]
    return state


def consistent_extensions(cls: HypothesisClass, prefix: Sequence, labels: Sequence, x_t):
    """Labels realizable at `x_t` by hypotheses consistent with (prefix, labels)."""
    state = _feed_state(cls, prefix, labels)
    if state is not None:
        cls.validate_feature(x_t)
        return sorted(state.children(x_t).keys())
    behs = cls.behaviors(list(prefix) + [x_t])
    target = tuple(labels)
    options = {b.labels[-1] for b in behs if b.labels[:-1] == target}
    if not options:
        raise UnrealizableLabelsError(f"labels {list(labels)!r} not realizable on prefix")
    return sorted(options)


def certifies(cls: HypothesisClass, prefix: Sequence, labels: Sequence, x_t) -> bool:
    """True iff every hypothesis consistent with (prefix, labels) agrees at x_t."""
    return len(consistent_extensions(cls, prefix, labels, x_t)) == 1


def non_certified_count(cls: HypothesisClass, sample: Sequence, h) -> int:
    """Positions of `sample` the remaining points fail to certify under `h`."""
    labels = [cls.evaluate(h, x) for x in sample]
    count = 0
    for i in range(len(sample)):
        rest = [x for j, x in enumerate(sample) if j != i]
        rest_labels = [y for j, y in enumerate(labels) if j != i]
        if not certifies(cls, rest, rest_labels, sample[i]):
            count += 1
    return count


CLASS_KINDS = {
    "finite_table": FiniteTable,
    "threshold1d": Threshold1D,
    "interval1d": Interval1D,
    "sparse_indicator": SparseIndicator,
    "axis_rectangle": AxisRectangle,
    "monotone1d": Monotone1D,
}


def class_from_config(config: dict) -> HypothesisClass:
    """Build a class from its config dict, e.g. {"kind": "threshold1d", ...}."""
    spec = dict(config)
    kind = spec.pop("kind", None)
    if kind not in CLASS_KINDS:
        raise ValueError(f"unknown class kind {kind!r}")
    if kind == "finite_table":
        return FiniteTable(spec.pop("rows"))
    return CLASS_KINDS[kind](**spec)
