"""
Training loop for the learned auction.

Both networks are updated together by minibatch Adam (or SGD) on the
augmented Lagrangian. Each training profile keeps its own misreport, which is
refined by a few ascent steps every time the profile is drawn; the multipliers
move every update_period iterations.
"""

from __future__ import annotations

import json
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np
import structlog
from pydantic import BaseModel, Field, model_validator

from src.errors import DivergenceError
from src.market import MarketConfig, sample_valuations
from src.nn import Activation, AdamState, adam_init, adam_step, sgd_step
from src.seeding import SeedPlan

from .lagrangian import LagrangeState, LossResult, lagrange_update, loss
from .metrics import BatchMetrics
from .model import AuctionModel, PaymentMode, build_model, model_to_dict
from .regret import MisreportSearch, ascend_misreports

logger = structlog.get_logger(__name__)

DIVERGENCE_DUMP = "divergence_dump.json"


class TrainConfig(BaseModel):
    """Optimizer, regret search, penalty schedule and seeds for one training run."""
    batch_size: int = Field(default=128, ge=1)
    iterations: int = Field(default=2000, ge=1)
    learning_rate: float = Field(default=1e-3, gt=0.0)
    optimizer: Literal["adam", "sgd"] = "adam"
    misreport_restarts: int = Field(default=10, ge=1)
    misreport_steps: int = Field(default=50, ge=1)
    misreport_lr: float = Field(default=0.1, gt=0.0)
    train_misreport_restarts: int = Field(default=1, ge=1)
    train_misreport_steps: int = Field(default=5, ge=1)
    dataset_size: int = Field(default=2**14, ge=1)
    holdout_size: int = Field(default=1024, ge=1)
    eval_every: int = Field(default=100, ge=1)
    hidden_layers: list[int] = Field(default_factory=lambda: [100, 100], min_length=1)
    hidden_activation: Activation = Activation.TANH
    payment_mode: PaymentMode = PaymentMode.PENALTY
    lambda_ir_init: float = Field(default=1.0, ge=0.0)
    lambda_ic_init: float = Field(default=1.0, ge=0.0)
    rho: float = Field(default=1.0, gt=0.0)
    rho_growth: float = Field(default=1.0, ge=1.0)
    rho_max: float = Field(default=1e4, gt=0.0)
    update_period: int = Field(default=100, ge=1)
    max_abs_loss: float = Field(default=1e6, gt=0.0)
    seed: int = Field(default=0, ge=0)
    holdout_seed: int = Field(default=1, ge=0)

    @model_validator(mode="after")
    def _check_train(self) -> TrainConfig:
        if self.seed == self.holdout_seed:
            raise ValueError("holdout_seed must differ from seed")
        if any(width < 1 for width in self.hidden_layers):
            raise ValueError("hidden_layers entries must be >= 1")
        if self.hidden_activation not in (Activation.TANH, Activation.RELU):
            raise ValueError("hidden_activation must be tanh or relu")
        return self

    def seed_plan(self) -> SeedPlan:
        return SeedPlan(training=self.seed, holdout=self.holdout_seed)

    def misreport_search(self) -> MisreportSearch:
        """Search used for evaluation-time regret estimates."""
        return MisreportSearch(self.misreport_restarts, self.misreport_steps, self.misreport_lr)

    def initial_lagrange(self) -> LagrangeState:
        return LagrangeState(
            lambda_ir=self.lambda_ir_init,
            lambda_ic=self.lambda_ic_init,
            rho=self.rho,
            update_period=self.update_period,
            rho_growth=self.rho_growth,
            rho_max=self.rho_max,
        )


class TrainingGuard:
    """Rejects training steps whose loss or gradients are unusable."""

    def __init__(self, max_abs_loss: float = 1e6, dump_dir: str | Path | None = None):
        self.max_abs_loss = max_abs_loss
        self.dump_dir = Path(dump_dir) if dump_dir is not None else Path(".")

    def validate_step(
        self,
        result: LossResult,
        model: AuctionModel,
        lagrange: LagrangeState,
        iteration: int,
    ) -> None:
        grads = np.concatenate([result.alloc_grads.flat(), result.pay_grads.flat()])
        if np.isfinite(result.value) and abs(result.value) <= self.max_abs_loss and np.all(np.isfinite(grads)):
            return
        dump_path = self._dump(result, model, lagrange, iteration)
        logger.error(
            "divergence_detected",
            iteration=iteration,
            loss=float(result.value),
            dump_path=str(dump_path),
        )
        raise DivergenceError(
            f"Training diverged at iteration {iteration} (loss={result.value})",
            iteration=iteration,
            dump_path=str(dump_path),
        )

    def _dump(
        self,
        result: LossResult,
        model: AuctionModel,
        lagrange: LagrangeState,
        iteration: int,
    ) -> Path:
        self.dump_dir.mkdir(parents=True, exist_ok=True)
        path = self.dump_dir / DIVERGENCE_DUMP
        document = {
            "iteration": iteration,
            "loss": repr(result.value),
            "metrics": {k: repr(v) for k, v in result.metrics.to_dict().items()},
            "lagrange": {
                "lambda_ir": lagrange.lambda_ir,
                "lambda_ic": lagrange.lambda_ic,
                "rho": lagrange.rho,
            },
            "model": model_to_dict(model),
        }
        path.write_text(json.dumps(document, sort_keys=True) + "\n")
        return path


@dataclass
class TrainResult:
    """Final model, the metrics emitted at the evaluation cadence and the last multipliers."""
    model: AuctionModel
    history: list[BatchMetrics] = field(default_factory=list)
    lagrange: LagrangeState = field(default_factory=LagrangeState)


class AuctionTrainer:
    """Owns the model and optimizer state for one deterministic training run."""

    def __init__(
        self,
        market: MarketConfig,
        config: TrainConfig | None = None,
        dump_dir: str | Path | None = None,
        on_metrics: Callable[[BatchMetrics], None] | None = None,
    ):
        self.market = market
        self.config = config or TrainConfig()
        self.plan = self.config.seed_plan()
        self.guard = TrainingGuard(self.config.max_abs_loss, dump_dir)
        self.on_metrics = on_metrics

    def run(self) -> TrainResult:
        cfg = self.config
        values = sample_valuations(self.market, cfg.dataset_size, seed=self.plan.training).values
        model = build_model(
            self.market.n_vsps,
            self.market.n_units,
            cfg.hidden_layers,
            cfg.hidden_activation,
            cfg.payment_mode,
            seed=self.plan.net_init,
        )
        lagrange = cfg.initial_lagrange()
        params = model.alloc_net.parameters() + model.pay_net.parameters()
        n_alloc = len(model.alloc_net.parameters())
        adam: AdamState | None = adam_init(params, cfg.learning_rate) if cfg.optimizer == "adam" else None

        misreport_rng = self.plan.misreport_rng()
        batch_rng = self.plan.batch_rng()
        misreports = misreport_rng.uniform(0.0, 1.0, size=values.shape)
        batch_size = min(cfg.batch_size, values.shape[0])
        order = batch_rng.permutation(values.shape[0])
        cursor = 0

        logger.info(
            "training_started",
            n_bidders=model.n_bidders,
            n_units=model.n_units,
            dataset_size=values.shape[0],
            iterations=cfg.iterations,
            payment_mode=model.payment_mode.value,
        )
        history: list[BatchMetrics] = []
        for iteration in range(1, cfg.iterations + 1):
            if cursor + batch_size > order.size:
                order = batch_rng.permutation(values.shape[0])
                cursor = 0
            idx = order[cursor:cursor + batch_size]
            cursor += batch_size
            batch = values[idx]

            fresh = misreport_rng.uniform(
                0.0, 1.0, size=(cfg.train_misreport_restarts - 1, *batch.shape)
            )
            starts = np.concatenate([misreports[idx][None], fresh], axis=0)
            best, _ = ascend_misreports(model, batch, starts, cfg.train_misreport_steps, cfg.misreport_lr)
            misreports[idx] = best

            result = loss(model, batch, best, lagrange, iteration)
            self.guard.validate_step(result, model, lagrange, iteration)

            grads = result.alloc_grads.parameters() + result.pay_grads.parameters()
            if adam is not None:
                adam, params = adam_step(adam, params, grads)
            else:
                params = sgd_step(params, grads, cfg.learning_rate)
            model = model.with_networks(
                model.alloc_net.with_parameters(params[:n_alloc]),
                model.pay_net.with_parameters(params[n_alloc:]),
            )

            if iteration % lagrange.update_period == 0:
                lagrange = lagrange_update(lagrange, result.metrics.ir_penalty, result.metrics.ic_penalty)
                logger.debug(
                    "lagrange_updated",
                    iteration=iteration,
                    lambda_ir=lagrange.lambda_ir,
                    lambda_ic=lagrange.lambda_ic,
                    rho=lagrange.rho,
                )
            if iteration % cfg.eval_every == 0 or iteration == cfg.iterations:
                history.append(result.metrics)
                if self.on_metrics is not None:
                    self.on_metrics(result.metrics)
                logger.info("training_progress", **result.metrics.to_dict())

        logger.info("training_finished", iterations=cfg.iterations, final_revenue=history[-1].revenue)
        return TrainResult(model=model, history=history, lagrange=lagrange)


def train(
    market: MarketConfig,
    config: TrainConfig | None = None,
    dump_dir: str | Path | None = None,
) -> tuple[AuctionModel, list[BatchMetrics]]:
    """Train a learned auction for the market; same configs and seeds give identical results."""
    result = AuctionTrainer(market, config, dump_dir).run()
    return result.model, result.history
