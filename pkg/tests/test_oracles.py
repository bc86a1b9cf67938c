import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqcover.domain import FiniteTable, Monotone1D, SparseIndicator, Threshold1D
from seqcover.errors import SeqcoverError
from seqcover.oracles import (
    bayes_threshold_errors,
    coupon_collector_tail,
    double_sampling_gap,
    exact_fixed_design_regret,
    greedy_statistical_cover,
    monotonicity_check,
    shtarkov_logloss_regret,
    threshold_game_value,
    type_k_error_bound,
)

from .helpers import explicit_shtarkov


class TestShtarkov:
    def test_thresholds_three_points(self, thresholds10):
        assert shtarkov_logloss_regret(thresholds10, [2, 5, 8]) == pytest.approx(math.log(4))

    def test_singleton_class(self):
        cls = FiniteTable([[0, 1, 0]])
        assert shtarkov_logloss_regret(cls, [0, 1, 2]) == 0.0

    def test_full_class_n_points(self):
        rows = [[a, b, c] for a in (0, 1) for b in (0, 1) for c in (0, 1)]
        cls = FiniteTable(rows)
        assert shtarkov_logloss_regret(cls, [0, 1, 2]) == pytest.approx(3 * math.log(2))

    def test_real_valued_rejected(self):
        with pytest.raises(SeqcoverError):
            shtarkov_logloss_regret(Monotone1D(8, 4), [1, 2])

    @given(st.lists(st.integers(0, 10), min_size=1, max_size=6))
    @settings(max_examples=30)
    def test_matches_explicit_label_sum(self, sample):
        cls = Threshold1D(10)
        assert shtarkov_logloss_regret(cls, sample) == pytest.approx(
            explicit_shtarkov(cls, sample)
        )

    def test_fig1_matches_explicit(self, fig1):
        for sample in ([0, 1, 2], [0, 0, 1], [2, 1, 0, 2]):
            assert shtarkov_logloss_regret(fig1, sample) == pytest.approx(
                explicit_shtarkov(fig1, sample)
            )


class TestMonotonicity:
    def test_equal_samples(self, thresholds10):
        assert monotonicity_check(thresholds10, [2, 5], [2, 5])

    def test_two_in_three(self, thresholds10):
        assert monotonicity_check(thresholds10, [2, 5], [2, 5, 8])

    def test_containment_enforced(self, thresholds10):
        with pytest.raises(ValueError):
            monotonicity_check(thresholds10, [2, 2], [2, 5])

    @given(st.lists(st.integers(0, 10), min_size=1, max_size=8), st.data())
    @settings(max_examples=100)
    def test_random_nested_pairs(self, large, data):
        cls = Threshold1D(10)
        k = data.draw(st.integers(1, len(large)))
        idx = data.draw(st.permutations(range(len(large))))
        small = [large[i] for i in idx[:k]]
        assert monotonicity_check(cls, small, large)


class TestExactFixedDesign:
    def test_matches_shtarkov_counting(self, fig1, thresholds10):
        for cls, sample in ((fig1, [0, 1, 2]), (thresholds10, [1, 4, 9]), (fig1, [2, 2, 0])):
            assert exact_fixed_design_regret(cls, sample) == pytest.approx(
                shtarkov_logloss_regret(cls, sample)
            )


class TestCouponCollector:
    def test_tail_at_zero_is_at_most_one(self):
        assert coupon_collector_tail(10, 0.0, 200, seed=1) <= 1.0

    def test_t_one(self):
        # tau = 1 always; the threshold 1 is not strictly exceeded
        assert coupon_collector_tail(1, 1.0, 50, seed=0) == 0.0

    def test_t50_c2(self):
        trials = 4000
        tail = coupon_collector_tail(50, 2.0, trials, seed=0)
        sigma = math.sqrt(math.exp(-2) * (1 - math.exp(-2)) / trials)
        assert tail <= math.exp(-2) + 3 * sigma


class TestGameValueRecursion:
    def test_first_value(self):
        f = threshold_game_value(4)
        assert f[1] == 0

    def test_monotone_nondecreasing(self):
        f = threshold_game_value(512)
        assert all(f[t + 1] >= f[t] for t in range(1, 512))

    def test_lower_bound_curve(self):
        f = threshold_game_value(512)
        assert all(float(f[t]) >= 0.01 * math.log(t) for t in range(2, 513))

    def test_exact_fractions(self):
        f = threshold_game_value(4)
        from fractions import Fraction

        assert f[2] == Fraction(1, 2)
        assert f[3] == Fraction(8, 9)
        assert f[4] == Fraction(29, 24)


class TestBayesThresholdGame:
    def test_single_step_is_half(self):
        mean = bayes_threshold_errors(1, trials=20000, seed=0)
        assert mean == pytest.approx(0.5, abs=3 * 0.5 / math.sqrt(20000))

    def test_degenerate_point_mass(self):
        assert bayes_threshold_errors(64, trials=500, seed=1, degenerate=True) <= 1.0

    def test_moderate_horizon_bracket(self):
        mean = bayes_threshold_errors(256, trials=400, seed=2)
        assert 0.01 * math.log(256) <= mean <= 2 * math.log(256) + 5


class TestDoubleSampling:
    def test_full_cover_gives_zero(self):
        cls = SparseIndicator(64, 2)
        assert greedy_statistical_cover(cls, 1 / 64**2) == "full"
        assert double_sampling_gap(cls, 64, trials=20, seed=0) == 0.0

    def test_all_zero_cover_matches_direct_expectation(self):
        cls = SparseIndicator(64, 2)
        measured = double_sampling_gap(cls, 64, trials=400, seed=0, cover=[frozenset()])
        # independent oracle: expected sum of the two largest multiplicities
        rng = np.random.default_rng(999)
        sims = []
        for _ in range(4000):
            counts = np.bincount(rng.integers(0, 64, size=64), minlength=64)
            sims.append(np.sort(counts)[-2:].sum())
        expected = float(np.mean(sims))
        sigma = float(np.std(sims)) * math.sqrt(1 / 400 + 1 / 4000)
        assert measured == pytest.approx(expected, abs=4 * sigma)

    def test_greedy_cover_radius_above_spacing(self):
        cls = SparseIndicator(8, 1)
        cover = greedy_statistical_cover(cls, epsilon=2 / 8)
        # the empty set epsilon-covers every singleton at radius 1/8 <= 2/8
        assert cover == [frozenset()]


class TestTypeK:
    def _uniform_half_samplers(self, grid_r):
        mid = grid_r // 2
        return [
            lambda rng: int(rng.integers(0, mid + 1)),
            lambda rng: int(rng.integers(mid + 1, grid_r + 1)),
        ]

    def test_k1_reduces_to_iid(self):
        cls = Threshold1D(2**16)
        sampler = [lambda rng: int(rng.integers(0, 2**16 + 1))]
        mean = type_k_error_bound(cls, sampler, [0] * 64, 64, trials=40, seed=0)
        assert mean <= 4 * 2 * math.log(64) + math.log(20)

    def test_k2_bound(self):
        cls = Threshold1D(2**16)
        samplers = self._uniform_half_samplers(2**16)
        assignment = [i % 2 for i in range(256)]
        mean = type_k_error_bound(cls, samplers, assignment, 256, trials=30, seed=1)
        assert mean <= 2 * 1 * math.log(128) * 4

    def test_adversarial_singletons_force_errors(self):
        # strictly increasing singleton sequence: the all-zero target makes
        # every step an uncovered record
        cls = Threshold1D(2**16)
        k = 32
        seq = [1000 * (i + 1) for i in range(k)]
        samplers = [(lambda v: (lambda rng: v))(v) for v in seq]
        mean = type_k_error_bound(cls, samplers, list(range(k)), k, trials=2, seed=0)
        assert mean >= math.log2(k)
