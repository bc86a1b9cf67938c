"""Loss functions with the metadata the regret bounds consume.

Log loss uses natural logarithms and a clamp range [eps, 1-eps] so it stays
finite under adversarial labels; the per-run default is eps = 1/T.
Mixability constants are verified numerically rather than cited: the
substitution inequality reduces to a feasibility interval for yhat, so the
check is exact over the scanned grid of expert pairs and weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class LossSpec:
    kind: str  # "log" | "absolute" | "square"
    clamp_eps: float = 0.0

    def __post_init__(self):
        if self.kind not in ("log", "absolute", "square"):
            raise ValueError(f"unknown loss kind {self.kind!r}")
        if not 0 <= self.clamp_eps < 0.5:
            raise ValueError("clamp_eps must lie in [0, 0.5)")

    @property
    def lipschitz_l(self) -> float:
        """Lipschitz constant of loss(., y) on the clamp range."""
        if self.kind == "log":
            if self.clamp_eps == 0:
                return math.inf
            return 1.0 / self.clamp_eps
        return 1.0 if self.kind == "absolute" else 2.0

    @property
    def eta_mixable(self):
        """Known mixability constant, or None for the merely convex case."""
        return {"log": 1.0, "square": 2.0, "absolute": None}[self.kind]

    def clamp(self, yhat: float) -> float:
        lo, hi = self.clamp_eps, 1.0 - self.clamp_eps
        return min(max(float(yhat), lo), hi)


def loss(spec: LossSpec, yhat, y) -> float:
    """Loss of predicting yhat against label y; natural log for log loss."""
    yhat = float(yhat)
    y = float(y)
    if not 0.0 <= yhat <= 1.0:
        raise ValueError(f"prediction {yhat} outside [0, 1]")
    if spec.kind == "absolute":
        return abs(yhat - y)
    if spec.kind == "square":
        return (yhat - y) ** 2
    # log loss; 0*log(0) limits resolve to 0, a wrong hard prediction is inf
    if y == 1.0:
        return -math.log(yhat) if yhat > 0 else math.inf
    if y == 0.0:
        return -math.log1p(-yhat) if yhat < 1 else math.inf
    a = -y * math.log(yhat) if yhat > 0 else (math.inf if y > 0 else 0.0)
    b = -(1 - y) * math.log1p(-yhat) if yhat < 1 else (math.inf if y < 1 else 0.0)
    return a + b


def substitution_interval(spec: LossSpec, predictions, weights, eta: float):
    """Feasible yhat interval for the eta-mixability substitution inequality.

    Requires loss(yhat, y) <= -(1/eta) log sum w_i exp(-eta loss(p_i, y)) for
    both y in {0, 1}; each side is monotone in yhat, so the feasible set is an
    interval (possibly empty, returned as None).
    """
    total = sum(weights)
    bounds = []
    for y in (1.0, 0.0):
        mix = sum(
            w / total * math.exp(-eta * loss(spec, p, y))
            for p, w in zip(predictions, weights)
        )
        bounds.append(-math.log(mix) / eta if mix > 0 else math.inf)
    r1, r0 = bounds
    if spec.kind == "log":
        lo = math.exp(-r1)
        hi = 1.0 - math.exp(-r0)
    elif spec.kind == "square":
        lo = 1.0 - math.sqrt(r1)
        hi = math.sqrt(r0)
    else:
        lo = 1.0 - r1
        hi = r0
    lo, hi = max(lo, 0.0), min(hi, 1.0)
    if lo > hi + 1e-12:
        return None
    return (lo, min(hi, 1.0))


def mixability_check(spec: LossSpec, eta: float, grid_step: float = 1 / 256) -> bool:
    """True iff a substitution prediction exists for every grid pair of experts.

    Scans prediction pairs on a grid of the clamp range and a small weight
    grid; pairwise feasibility is the standard sufficient probe for mixability.
    """
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    lo = spec.clamp_eps if spec.kind == "log" else 0.0
    hi = 1.0 - lo
    n = int(round((hi - lo) / grid_step))
    grid = [lo + i * (hi - lo) / n for i in range(n + 1)]
    for i, p1 in enumerate(grid):
        for p2 in grid[i:]:
            for w in (0.25, 0.5, 0.75):
                if substitution_interval(spec, (p1, p2), (w, 1 - w), eta) is None:
                    return False
    return True


def parse_rational(text, horizon: int | None = None) -> float:
    """Parse "1/T", "1/256", "0.01", or a number; T binds to the horizon."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip()
    if "/" in s:
        num, den = s.split("/", 1)
        den = den.strip()
        if den.upper() == "T":
            if horizon is None:
                raise ValueError("rational uses T but no horizon given")
            return float(Fraction(num.strip()) / horizon)
        return float(Fraction(num.strip()) / Fraction(den))
    return float(s)
