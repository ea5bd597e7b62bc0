"""Tests for the regret oracle, evaluation reports and sweeps."""

from __future__ import annotations

import json

import numpy as np
import pytest

from src.auction import MisreportSearch, TrainConfig, zero_model
from src.baselines import (
    first_price_batch,
    make_baseline,
    myerson_uniform_batch,
    second_price_batch,
    vcg_multiunit_batch,
)
from src.errors import ConfigurationError, DimensionError
from src.evaluation import (
    SWEEP_CSV_HEADER,
    AuctionEvaluator,
    SweepRow,
    evaluate_model,
    exact_regret_grid,
    exact_regret_grid_batch,
    misreport_grid,
    sweep_apps,
    sweep_summary,
    sweep_vsps,
    write_sweep_csv,
    write_sweep_summary,
)
from src.market import MarketConfig, ValuationMode, VspConfig


class TestGridOracle:
    """Test exhaustive misreport search."""

    def test_grid_includes_endpoints(self):
        grid = misreport_grid(0.25)
        np.testing.assert_allclose(grid, [0.0, 0.25, 0.5, 0.75, 1.0])

    def test_grid_step_range(self):
        with pytest.raises(ConfigurationError):
            misreport_grid(0.0)
        with pytest.raises(ConfigurationError):
            misreport_grid(0.7)

    def test_second_price_has_no_regret(self):
        assert exact_regret_grid(second_price_batch, np.array([0.7, 0.3]), 0) == pytest.approx(0.0, abs=1e-12)

    def test_first_price_regret(self):
        """Shading to the runner-up's bid gains about 0.4."""
        regret = exact_regret_grid(first_price_batch, np.array([0.8, 0.4]), 0)
        assert regret == pytest.approx(0.4, abs=1.1e-3)

    @pytest.mark.parametrize(
        "rule",
        [
            second_price_batch,
            lambda b: vcg_multiunit_batch(b, n_units=2),
            lambda b: vcg_multiunit_batch(b, n_units=2, unit_cap=1),
            myerson_uniform_batch,
        ],
    )
    @pytest.mark.parametrize("grid_step", [0.01, 1e-3])
    def test_truthful_rules_have_no_regret(self, rule, grid_step):
        values = np.random.default_rng(11).uniform(size=(100, 3))
        for bidder in range(3):
            regret = exact_regret_grid_batch(rule, values, bidder, grid_step=grid_step)
            assert np.all(regret <= 1e-12)

    def test_first_price_top_bidder_gains_when_gap_is_large(self):
        values = np.random.default_rng(4).uniform(size=(100, 2))
        gap = np.abs(values[:, 0] - values[:, 1])
        top = np.argmax(values, axis=1)
        for bidder in range(2):
            rows = (gap > 0.1) & (top == bidder)
            regret = exact_regret_grid_batch(first_price_batch, values[rows], bidder, grid_step=0.01)
            assert np.all(regret > 0.05)

    def test_bidder_out_of_range(self):
        with pytest.raises(DimensionError):
            exact_regret_grid_batch(second_price_batch, np.array([[0.1, 0.2]]), 2)

    def test_chunking_matches_single_pass(self):
        values = np.random.default_rng(0).uniform(size=(30, 2))
        a = exact_regret_grid_batch(first_price_batch, values, 1, grid_step=0.01, chunk_rows=101)
        b = exact_regret_grid_batch(first_price_batch, values, 1, grid_step=0.01)
        np.testing.assert_array_equal(a, b)


class TestEvaluation:
    """Test held-out evaluation."""

    def test_zero_model_report(self):
        """A constant mechanism has no regret; penalty-mode revenue is N ln 2."""
        values = np.random.default_rng(3).uniform(size=(20, 3))
        report = evaluate_model(zero_model(3, 1), values, MisreportSearch(2, 3, 0.1), grid_step=0.01)
        assert report.max_regret == pytest.approx(0.0, abs=1e-12)
        assert report.mean_revenue == pytest.approx(3.0 * np.log(2.0), abs=1e-12)
        assert report.n_profiles == 20
        assert report.vcg_revenue is not None and report.vcg_revenue > 0.0

    def test_grid_covers_first_price_shading(self):
        """Grid regret is folded in even when the ascent barely moves."""
        values = np.array([[0.9, 0.2]])
        evaluator = AuctionEvaluator(MisreportSearch(1, 1, 1e-6), grid_step=0.01, seed=0)
        report = evaluator.evaluate(make_baseline("first-price", 2), values)
        assert report.max_regret == pytest.approx(0.7, abs=0.011)
        assert report.regret_shortfall >= 0.0

    def test_batch_evaluate(self):
        values = np.random.default_rng(1).uniform(size=(10, 2))
        evaluator = AuctionEvaluator(MisreportSearch(1, 2, 0.1), grid_step=0.05)
        reports = evaluator.batch_evaluate(
            {"vcg": make_baseline("vcg", 2), "first-price": make_baseline("first-price", 2)}, values
        )
        assert set(reports) == {"vcg", "first-price"}
        assert reports["first-price"].mean_revenue >= reports["vcg"].mean_revenue

    def test_report_to_dict(self):
        values = np.array([[0.5, 0.1]])
        report = AuctionEvaluator(MisreportSearch(1, 1, 0.1), grid_step=None).evaluate(
            make_baseline("second-price", 2), values
        )
        document = report.to_dict()
        assert document["mean_revenue"] == pytest.approx(0.1)
        assert document["vcg_revenue"] is None


class TestSweeps:
    """Test sweep orchestration and output files."""

    @pytest.fixture
    def rows(self):
        return [
            SweepRow("n_vsps", 2, "learned", 0.5, 0.001, 0.002),
            SweepRow("n_vsps", 2, "vcg", 0.4, 0.0, 0.0),
        ]

    def test_csv(self, tmp_path, rows):
        path = tmp_path / "sweep.csv"
        write_sweep_csv(path, rows)
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(SWEEP_CSV_HEADER)
        assert lines[1] == "2,learned,0.5,0.001,0.002"

    def test_summary_ratio(self, tmp_path, rows):
        assert sweep_summary("vsps", rows)["learned_over_vcg"]["2"] == pytest.approx(1.25)
        path = tmp_path / "summary.json"
        write_sweep_summary(path, "vsps", rows)
        assert json.loads(path.read_text())["kind"] == "vsps"

    def test_empty_values_rejected(self):
        with pytest.raises(ConfigurationError):
            sweep_vsps(MarketConfig(), [], TrainConfig())
        with pytest.raises(ConfigurationError):
            sweep_apps(MarketConfig(), [], TrainConfig())

    def test_too_few_vsps_rejected(self):
        with pytest.raises(ConfigurationError):
            sweep_vsps(MarketConfig(), [1, 3], TrainConfig())

    def test_small_vsp_sweep(self, tmp_path):
        base = MarketConfig(vsps=[VspConfig(), VspConfig()], n_units=1, valuation_mode=ValuationMode.UNIFORM)
        config = TrainConfig(
            batch_size=8,
            iterations=4,
            dataset_size=16,
            holdout_size=4,
            hidden_layers=[4],
            eval_every=2,
            misreport_restarts=2,
            misreport_steps=3,
            seed=3,
            holdout_seed=4,
        )
        rows = sweep_vsps(base, [3, 2], config, dump_dir=tmp_path)
        assert [(r.param_value, r.mechanism) for r in rows] == [
            (2, "learned"), (2, "vcg"), (3, "learned"), (3, "vcg"),
        ]
        assert all(r.max_regret >= 0.0 for r in rows)
