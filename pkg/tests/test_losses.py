import math

import numpy as np
import pytest

from seqcover.losses import LossSpec, loss, mixability_check, parse_rational, substitution_interval


class TestLossValues:
    def test_log_half(self):
        spec = LossSpec("log", clamp_eps=1 / 256)
        assert loss(spec, 0.5, 1) == pytest.approx(math.log(2))

    def test_absolute(self):
        assert loss(LossSpec("absolute"), 0.3, 1) == pytest.approx(0.7)

    def test_square(self):
        assert loss(LossSpec("square"), 0.25, 0) == pytest.approx(0.0625)

    def test_zero_at_truth(self):
        for kind in ("absolute", "square"):
            for y in (0, 1):
                assert loss(LossSpec(kind), y, y) == 0.0

    def test_log_at_clamp_boundary(self):
        eps = 1 / 64
        spec = LossSpec("log", clamp_eps=eps)
        assert loss(spec, spec.clamp(0.0), 1) == pytest.approx(math.log(1 / eps))

    def test_prediction_out_of_range(self):
        with pytest.raises(ValueError):
            loss(LossSpec("absolute"), 1.5, 1)


class TestGridProperties:
    GRID = np.linspace(1 / 64, 1 - 1 / 64, 127)

    @pytest.mark.parametrize("kind", ["log", "absolute", "square"])
    def test_midpoint_convexity(self, kind):
        spec = LossSpec(kind, clamp_eps=1 / 64)
        for y in (0, 1):
            vals = np.array([loss(spec, p, y) for p in self.GRID])
            mids = np.array(
                [loss(spec, (a + b) / 2, y) for a, b in zip(self.GRID[:-2], self.GRID[2:])]
            )
            assert np.all(mids <= (vals[:-2] + vals[2:]) / 2 + 1e-12)

    @pytest.mark.parametrize(
        "kind,eps,L", [("log", 1 / 64, 64.0), ("absolute", 0.0, 1.0), ("square", 0.0, 2.0)]
    )
    def test_lipschitz_constant(self, kind, eps, L):
        spec = LossSpec(kind, clamp_eps=eps)
        assert spec.lipschitz_l == pytest.approx(L)
        lo = eps if kind == "log" else 0.0
        grid = np.linspace(lo, 1 - lo, 129)
        for y in (0, 1):
            vals = np.array([loss(spec, p, y) for p in grid])
            slopes = np.abs(np.diff(vals)) / np.diff(grid)
            assert np.all(slopes <= L + 1e-9)


class TestMixability:
    def test_log_eta_one(self):
        assert mixability_check(LossSpec("log", clamp_eps=1 / 64), 1.0, 1 / 256)

    def test_square_eta_two(self):
        assert mixability_check(LossSpec("square"), 2.0, 1 / 256)

    def test_log_eta_four_fails(self):
        assert not mixability_check(LossSpec("log", clamp_eps=1 / 64), 4.0, 1 / 256)

    def test_square_eta_three_fails(self):
        assert not mixability_check(LossSpec("square"), 3.0, 1 / 128)

    def test_substitution_interval_single_expert(self):
        spec = LossSpec("log", clamp_eps=1 / 64)
        lo, hi = substitution_interval(spec, [0.3], [1.0], 1.0)
        assert lo == pytest.approx(0.3)
        assert hi == pytest.approx(0.3)


class TestParseRational:
    def test_fraction(self):
        assert parse_rational("1/256") == pytest.approx(1 / 256)

    def test_horizon_bound(self):
        assert parse_rational("1/T", horizon=512) == pytest.approx(1 / 512)

    def test_plain_number(self):
        assert parse_rational(0.125) == 0.125

    def test_missing_horizon(self):
        with pytest.raises(ValueError):
            parse_rational("1/T")
