"""
Held-out evaluation of auction mechanisms.

Revenue and IR penalty come from truthful play. Regret per (profile, bidder)
is the larger of the misreport-ascent estimate and the exact grid value, so a
weak ascent cannot hide a profitable deviation; the gap between the two is
reported as the estimator shortfall.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any

import numpy as np
import structlog

from src.auction.metrics import utilities
from src.auction.regret import Mechanism, MisreportSearch, estimate_regret_batch
from src.baselines import make_baseline
from src.market.sampling import ValuationProfile

from .oracle import DEFAULT_GRID_STEP, exact_regret_grid_batch

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class EvalReport:
    """Aggregate metrics of one mechanism on one held-out set."""
    mean_revenue: float
    mean_ir_penalty: float
    max_regret: float
    mean_regret: float
    n_profiles: int
    regret_shortfall: float = 0.0
    vcg_revenue: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


class AuctionEvaluator:
    """
    Evaluates mechanisms on a fixed held-out valuation set.

    Grid regret runs on the first grid_profiles rows (all rows when None);
    the ascent estimate runs on every row.
    """

    def __init__(
        self,
        search: MisreportSearch | None = None,
        grid_step: float | None = DEFAULT_GRID_STEP,
        grid_profiles: int | None = 256,
        seed: int = 1,
    ):
        self.search = search or MisreportSearch()
        self.grid_step = grid_step
        self.grid_profiles = grid_profiles
        self.seed = seed

    def regret_table(self, mechanism: Mechanism, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Per-(profile, bidder) regret and the grid-minus-estimate shortfall."""
        rng = np.random.default_rng(self.seed)
        estimated = estimate_regret_batch(mechanism, values, self.search, rng).regret
        regret = estimated.copy()
        shortfall = np.zeros_like(estimated)
        if self.grid_step is not None:
            rows = values if self.grid_profiles is None else values[: self.grid_profiles]
            for bidder in range(values.shape[1]):
                grid = exact_regret_grid_batch(mechanism, rows, bidder, self.grid_step)
                k = grid.shape[0]
                shortfall[:k, bidder] = np.maximum(0.0, grid - estimated[:k, bidder])
                regret[:k, bidder] = np.maximum(regret[:k, bidder], grid)
        return regret, shortfall

    def evaluate(self, mechanism: Mechanism, values: np.ndarray) -> EvalReport:
        values = np.atleast_2d(np.asarray(values, dtype=np.float64))
        alloc, pay = mechanism.outcome(values)
        utils = utilities(values, alloc, pay)
        regret, shortfall = self.regret_table(mechanism, values)
        report = EvalReport(
            mean_revenue=float(pay.sum(axis=1).mean()),
            mean_ir_penalty=float(np.maximum(0.0, -utils).sum(axis=1).mean()),
            max_regret=float(regret.max()),
            mean_regret=float(regret.mean()),
            n_profiles=int(values.shape[0]),
            regret_shortfall=float(shortfall.max()),
        )
        logger.info("mechanism_evaluated", **report.to_dict())
        return report

    def batch_evaluate(self, mechanisms: dict[str, Mechanism], values: np.ndarray) -> dict[str, EvalReport]:
        """Evaluate several mechanisms on the same profiles."""
        return {name: self.evaluate(mechanism, values) for name, mechanism in mechanisms.items()}


def vcg_revenue(values: np.ndarray, n_units: int) -> float:
    """Mean VCG revenue under truthful bids."""
    vcg = make_baseline("vcg", values.shape[1], n_units)
    _, pay = vcg.outcome(values)
    return float(pay.sum(axis=1).mean())


def evaluate_model(
    model: Mechanism,
    profiles: list[ValuationProfile] | np.ndarray,
    search: MisreportSearch | None = None,
    grid_step: float | None = DEFAULT_GRID_STEP,
    grid_profiles: int | None = 256,
    seed: int = 1,
) -> EvalReport:
    """Evaluate a model on held-out profiles, with VCG revenue on the same profiles beside it."""
    if isinstance(profiles, np.ndarray):
        values = np.atleast_2d(profiles.astype(np.float64))
    else:
        values = np.stack([p.values for p in profiles])
    report = AuctionEvaluator(search, grid_step, grid_profiles, seed).evaluate(model, values)
    return EvalReport(**{**report.to_dict(), "vcg_revenue": vcg_revenue(values, model.n_units)})
