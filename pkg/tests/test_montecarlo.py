"""Monte Carlo harness: kernel parity, estimator algebra, sweep grids."""

import numpy as np
import pytest

from batchfrag.model import (
    ModelParams,
    expected_recall_size,
    recall_probability_exact,
)
from batchfrag.montecarlo import (
    Z95,
    Z98,
    EstimateConfig,
    SweepGrid,
    crisis_prob_family,
    estimate_recall,
    sweep,
    trial_recalls,
)
from batchfrag.seeding import derive_seed
from batchfrag.simulation import TrialConfig, run_trial


class TestTrialRecalls:
    @pytest.mark.parametrize("o,b,q,p", [
        (10, 4, 50, 0.15),
        (7, 3, 50, 0.2),
        (1, 1, 20, 0.05),
        (50, 1, 50, 0.15),
        (13, 29, 61, 0.5),
        (5, 100, 23, 0.9),
        (23, 23, 23, 1.0),
        (10, 4, 50, 0.0),
    ])
    def test_matches_single_trial_path(self, o, b, q, p):
        """The array kernel must reproduce run_trial bit for bit."""
        params = ModelParams(o, b, q, p)
        config = EstimateConfig(params, n_trials=200, base_seed=77)
        vectorized = trial_recalls(config).tolist()
        direct = [run_trial(TrialConfig.from_seed(params, derive_seed(77, i)))
                  for i in range(200)]
        assert vectorized == direct

    def test_bounded_by_quantity(self):
        config = EstimateConfig(ModelParams(9, 5, 47, 0.4), 500, 3)
        recalls = trial_recalls(config)
        assert recalls.min() >= 0
        assert recalls.max() <= 47

    def test_deterministic(self):
        config = EstimateConfig(ModelParams(10, 4, 50, 0.15), 300, 5)
        assert trial_recalls(config).tolist() == trial_recalls(config).tolist()


class TestEstimateRecall:
    def test_mean_is_exact_integer_ratio(self):
        config = EstimateConfig(ModelParams(10, 4, 50, 0.15), 1000, 11)
        est = estimate_recall(config)
        assert est.mean_recall == est.total_recalled / est.n_trials
        assert est.total_recalled == int(trial_recalls(config).sum())
        assert 0.0 <= est.mean_recall <= 50.0

    def test_statistics_match_manual_recomputation(self):
        config = EstimateConfig(ModelParams(7, 3, 40, 0.3), 2000, 4)
        est = estimate_recall(config)
        recalls = trial_recalls(config).astype(np.int64)
        mean = int(recalls.sum()) / len(recalls)
        dev = recalls.astype(np.float64) - mean
        var = float(np.sum(dev * dev)) / (len(recalls) - 1)
        se = (var / len(recalls)) ** 0.5
        assert est.mean_recall == mean
        assert est.std_error == se
        assert est.ci95_half_width == Z95 * se
        assert est.ci98_half_width == Z98 * se

    def test_zero_probability_collapses(self):
        est = estimate_recall(EstimateConfig(ModelParams(10, 4, 50, 0.0),
                                             500, 0))
        assert est.mean_recall == 0.0
        assert est.std_error == 0.0
        assert est.total_recalled == 0

    def test_mean_invariant_under_trial_permutation(self):
        """Exact integer accumulation makes scheduling irrelevant."""
        config = EstimateConfig(ModelParams(10, 4, 50, 0.15), 400, 9)
        recalls = trial_recalls(config)
        assert int(recalls.sum()) == int(recalls[::-1].sum())
        assert estimate_recall(config).total_recalled == int(recalls.sum())

    def test_rejects_zero_trials(self):
        with pytest.raises(ValueError):
            EstimateConfig(ModelParams(10, 4, 50, 0.15), 0, 0)

    def test_checkpoint_small_orders(self):
        """Unit orders from unit batches: mean near Q*p."""
        est = estimate_recall(EstimateConfig(ModelParams(1, 1, 50, 0.15),
                                             10_000, 0))
        assert abs(est.mean_recall - 7.5) <= 3 * est.std_error


class TestSweep:
    def test_grid_shape_and_error_identities(self):
        grid = sweep(50, 0.15, range(1, 6), range(1, 8), n_trials=150,
                     base_seed=2)
        assert grid.analytic.shape == (5, 7)
        assert grid.sim_mean.shape == (5, 7)
        np.testing.assert_array_equal(
            grid.abs_error, np.abs(grid.analytic - grid.sim_mean))
        expect_pct = 100.0 * float(grid.abs_error.mean()) / 50
        assert grid.mean_abs_error_pct == expect_pct

    def test_analytic_cells_match_model(self):
        grid = sweep(50, 0.15, [1, 10, 50], [1, 4, 100], n_trials=10,
                     base_seed=0)
        for i, o in enumerate([1, 10, 50]):
            for j, b in enumerate([1, 4, 100]):
                assert grid.analytic[i, j] == expected_recall_size(
                    ModelParams(o, b, 50, 0.15))

    def test_analytic_only_leaves_simulation_empty(self):
        grid = sweep(50, 0.15, range(1, 4), range(1, 4),
                     include_simulation=False)
        assert grid.sim_mean is None
        assert grid.abs_error is None
        assert grid.ci95_half_width is None
        assert grid.mean_abs_error_pct is None
        assert grid.n_trials is None

    def test_cells_recomputable_in_isolation(self):
        """A cell's estimate depends only on (base_seed, o, b)."""
        big = sweep(50, 0.15, [3, 10], [2, 7], n_trials=250, base_seed=6)
        small = sweep(50, 0.15, [10], [7], n_trials=250, base_seed=6)
        assert small.sim_mean[0, 0] == big.sim_mean[1, 1]
        assert small.ci95_half_width[0, 0] == big.ci95_half_width[1, 1]

    def test_axis_validation(self):
        with pytest.raises(ValueError):
            sweep(50, 0.15, [], [1, 2])
        with pytest.raises(ValueError):
            sweep(50, 0.15, [3, 2], [1])
        with pytest.raises(ValueError):
            sweep(50, 0.15, [1, 60], [1])  # order size above quantity
        with pytest.raises(ValueError):
            sweep(50, 0.15, [1], [0, 1])

    def test_reruns_bit_identical(self):
        a = sweep(20, 0.25, range(1, 5), range(1, 5), n_trials=120,
                  base_seed=8)
        b = sweep(20, 0.25, range(1, 5), range(1, 5), n_trials=120,
                  base_seed=8)
        np.testing.assert_array_equal(a.sim_mean, b.sim_mean)
        np.testing.assert_array_equal(a.ci95_half_width, b.ci95_half_width)
        assert a.mean_abs_error_pct == b.mean_abs_error_pct

    def test_divisor_grid_confidence_coverage(self):
        """At 10,000 trials the closed form sits inside the 99% CI for at
        least 95% of cells once remainder orders are excluded."""
        divisors = [o for o in range(1, 51) if 50 % o == 0]
        grid = sweep(50, 0.15, divisors, range(1, 101), n_trials=10_000,
                     base_seed=0)
        se = grid.ci95_half_width / Z95
        covered = np.abs(grid.sim_mean - grid.analytic) <= 2.576 * se
        assert covered.mean() >= 0.95

    def test_divisor_cells_track_exact_mixture(self):
        """Without remainder orders the trial mean estimates Q times the
        exact two-point recall probability."""
        grid = sweep(50, 0.15, [1, 2, 5, 10, 25, 50], [3, 4, 7],
                     n_trials=10_000, base_seed=1)
        se = grid.ci95_half_width / Z95
        for i, o in enumerate([1, 2, 5, 10, 25, 50]):
            for j, b in enumerate([3, 4, 7]):
                exact = 50 * recall_probability_exact(
                    ModelParams(o, b, 50, 0.15))
                tolerance = 4 * max(se[i, j], 1e-9)
                assert abs(grid.sim_mean[i, j] - exact) <= tolerance


class TestCrisisProbFamily:
    def test_one_grid_per_probability(self):
        grids = crisis_prob_family(50, [0.0, 0.15, 0.5], range(1, 6),
                                   range(1, 6))
        assert [g.crisis_prob for g in grids] == [0.0, 0.15, 0.5]
        assert all(isinstance(g, SweepGrid) for g in grids)
        assert all(g.sim_mean is None for g in grids)

    def test_zero_probability_grid_is_zero(self):
        grids = crisis_prob_family(50, [0.0], range(1, 6), range(1, 6))
        assert not grids[0].analytic.any()

    def test_unit_order_row_is_flat_at_qp(self):
        grids = crisis_prob_family(50, [0.05, 0.25], range(1, 6),
                                   range(1, 20))
        for g in grids:
            np.testing.assert_array_equal(
                g.analytic[0], np.full(19, 50 * g.crisis_prob))
