"""
Augmented Lagrangian objective for revenue maximization under IR and IC.

    L = -R + lambda_ir * P_ir + lambda_ic * P_ic + rho/2 * (P_ir^2 + P_ic^2)

R is the batch-mean revenue, P_ir the batch mean of the per-profile IR
penalty and P_ic the mean per-bidder regret. Misreports are held fixed while
differentiating.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from src.errors import ConfigurationError
from src.nn import Gradients

from .metrics import BatchMetrics, utilities
from .model import AuctionModel, mechanism_backward, mechanism_forward


@dataclass(frozen=True)
class LagrangeState:
    """Multipliers and quadratic penalty coefficient."""
    lambda_ir: float = 1.0
    lambda_ic: float = 1.0
    rho: float = 1.0
    update_period: int = 100
    rho_growth: float = 1.0
    rho_max: float = 1e4

    def __post_init__(self) -> None:
        if self.lambda_ir < 0.0 or self.lambda_ic < 0.0:
            raise ConfigurationError("Lagrange multipliers must be non-negative", field="lambda")
        if self.rho < 0.0 or self.update_period < 1 or self.rho_growth < 1.0:
            raise ConfigurationError("Invalid penalty schedule", field="rho")


def augmented_lagrangian(revenue: float, p_ir: float, p_ic: float, state: LagrangeState) -> float:
    return (
        -revenue
        + state.lambda_ir * p_ir
        + state.lambda_ic * p_ic
        + 0.5 * state.rho * (p_ir * p_ir + p_ic * p_ic)
    )


def lagrange_update(state: LagrangeState, p_ir: float, p_ic: float) -> LagrangeState:
    """lambda <- lambda + rho * P for each constraint; rho grows geometrically if configured."""
    return replace(
        state,
        lambda_ir=state.lambda_ir + state.rho * max(p_ir, 0.0),
        lambda_ic=state.lambda_ic + state.rho * max(p_ic, 0.0),
        rho=min(state.rho * state.rho_growth, max(state.rho, state.rho_max)),
    )


@dataclass(eq=False)
class LossResult:
    """Loss value, gradients for both networks and the batch metrics."""
    value: float
    alloc_grads: Gradients
    pay_grads: Gradients
    metrics: BatchMetrics


def _misreport_rows(values: np.ndarray, misreports: np.ndarray) -> np.ndarray:
    """Stack N copies of the batch; block n has bidder n's bid replaced by its misreport."""
    batch, n = values.shape
    rows = np.tile(values, (n, 1))
    for bidder in range(n):
        rows[bidder * batch:(bidder + 1) * batch, bidder] = misreports[:, bidder]
    return rows


def loss(
    model: AuctionModel,
    values: np.ndarray,
    misreports: np.ndarray,
    lagrange: LagrangeState,
    iteration: int = 0,
) -> LossResult:
    """Augmented Lagrangian and its exact gradient with the given misreports frozen."""
    values = np.atleast_2d(np.asarray(values, dtype=np.float64))
    misreports = np.atleast_2d(np.asarray(misreports, dtype=np.float64))
    batch, n = values.shape

    truthful = mechanism_forward(model, values)
    u_truth = utilities(values, truthful.alloc, truthful.payments)
    rev = float(truthful.payments.sum(axis=1).mean())
    p_ir = float(np.maximum(0.0, -u_truth).sum(axis=1).mean())

    deviated = mechanism_forward(model, _misreport_rows(values, misreports))
    rows = np.arange(n * batch)
    own = np.repeat(np.arange(n), batch)
    true_own = values.T.reshape(-1)
    u_dev = true_own * deviated.alloc[rows, own, :].sum(axis=1) - deviated.payments[rows, own]
    gain = u_dev - u_truth.T.reshape(-1)
    p_ic = float(np.maximum(0.0, gain).mean())

    value = augmented_lagrangian(rev, p_ir, p_ic, lagrange)

    c_ir = lagrange.lambda_ir + lagrange.rho * p_ir
    c_ic = lagrange.lambda_ic + lagrange.rho * p_ic
    active = (gain > 0.0).astype(np.float64)

    # d L / d u on the truthful and deviated passes
    du_truth = -c_ir * (u_truth < 0.0) / batch
    du_truth -= c_ic * active.reshape(n, batch).T / (batch * n)
    du_dev = c_ic * active / (batch * n)

    d_pay_truth = -1.0 / batch - du_truth
    d_alloc_truth = np.repeat((du_truth * values)[:, :, None], model.n_units, axis=2)
    d_pay_dev = np.zeros_like(deviated.payments)
    d_pay_dev[rows, own] = -du_dev
    d_alloc_dev = np.zeros_like(deviated.alloc)
    d_alloc_dev[rows, own, :] = (du_dev * true_own)[:, None]

    a_truth, p_truth, _ = mechanism_backward(model, truthful, d_alloc_truth, d_pay_truth)
    a_dev, p_dev, _ = mechanism_backward(model, deviated, d_alloc_dev, d_pay_dev)

    return LossResult(
        value=value,
        alloc_grads=a_truth.accumulate(a_dev),
        pay_grads=p_truth.accumulate(p_dev),
        metrics=BatchMetrics(iteration=iteration, revenue=rev, ir_penalty=p_ir, ic_penalty=p_ic, loss=value),
    )
