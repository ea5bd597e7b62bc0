"""
Desk-scale training runs on the case-study market.

These train full-size models and take minutes each; run with `pytest -m slow`.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest
import structlog

from src.auction import TrainConfig, train
from src.evaluation import AuctionEvaluator, compare_semcom, evaluate_model, sweep_apps, sweep_vsps
from src.market import MarketConfig, sample_valuations
from src.runs import load_experiment_config

pytestmark = pytest.mark.slow

logger = structlog.get_logger(__name__)

CASE_STUDY = Path(__file__).resolve().parents[2] / "configs" / "case_study.json"
PENALTY_LIMIT = 0.02
TREND_BAND = 0.95
# learned revenue must beat VCG on the same held-out profiles by this factor
VCG_MARGIN = 1.05


@pytest.fixture(scope="module")
def case_study():
    return load_experiment_config(CASE_STUDY)


@pytest.fixture(scope="module")
def trained(case_study):
    """The trained model and its held-out profiles."""
    model, _ = train(case_study.market, case_study.train)
    cfg = case_study.train
    holdout = sample_valuations(case_study.market, cfg.holdout_size, seed=cfg.holdout_seed).values
    return model, holdout


def _nondecreasing(revenues: list[float]) -> bool:
    return all(b >= TREND_BAND * a for a, b in zip(revenues, revenues[1:]))


def _learned_revenues(rows) -> list[float]:
    return [r.revenue for r in rows if r.mechanism == "learned"]


class TestCaseStudy:
    """Trained learned auction on the five-VSP, three-unit market."""

    def test_penalties_near_zero(self, case_study, trained):
        model, holdout = trained
        evaluator = AuctionEvaluator(case_study.train.misreport_search(), grid_step=None, seed=99)
        report = evaluator.evaluate(model, holdout)
        assert report.mean_ir_penalty <= PENALTY_LIMIT
        assert report.max_regret <= PENALTY_LIMIT

    def test_revenue_against_vcg(self, trained):
        model, holdout = trained
        report = evaluate_model(model, holdout, grid_step=None)
        learned, vcg = report.mean_revenue, report.vcg_revenue
        logger.info("learned_vs_vcg", learned=learned, vcg=vcg, ratio=learned / vcg)
        assert learned >= VCG_MARGIN * vcg

    def test_training_is_reproducible(self, case_study):
        config = case_study.train.model_copy(update={"iterations": 50})
        model_a, history_a = train(case_study.market, config)
        model_b, history_b = train(case_study.market, config)
        assert np.array_equal(model_a.pay_net.flat_parameters(), model_b.pay_net.flat_parameters())
        assert history_a == history_b


class TestSemcom:
    """SemCom on/off with paired draws."""

    def test_semcom_lowers_revenue(self, case_study):
        comparison = compare_semcom(case_study.market, case_study.train)
        assert comparison.semcom.mean_revenue < comparison.raw.mean_revenue
        assert np.all(comparison.values_semcom <= comparison.values_raw)
        for report in (comparison.semcom, comparison.raw):
            assert report.mean_ir_penalty <= PENALTY_LIMIT


class TestTrends:
    """Revenue against market size."""

    def test_revenue_grows_with_vsps(self, case_study):
        rows = sweep_vsps(case_study.market, [2, 3, 4, 5], case_study.train)
        assert len(rows) == 8
        assert _nondecreasing(_learned_revenues(rows))

    def test_revenue_grows_with_apps(self, case_study):
        rows = sweep_apps(case_study.market, [1, 2, 3], case_study.train)
        assert _nondecreasing(_learned_revenues(rows))


class TestHoldoutDiscipline:
    """Held-out profiles never repeat training draws."""

    def test_holdout_differs_from_training(self, case_study):
        cfg: TrainConfig = case_study.train
        market: MarketConfig = case_study.market
        training = sample_valuations(market, 64, seed=cfg.seed).values
        holdout = sample_valuations(market, 64, seed=cfg.holdout_seed).values
        assert not np.array_equal(training, holdout)
