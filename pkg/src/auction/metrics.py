"""Utility, revenue and IR metrics on scalars or batches."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

METRICS_CSV_HEADER = ["iter", "revenue", "ir_penalty", "ic_penalty", "loss"]


@dataclass(frozen=True)
class BatchMetrics:
    """Batch means at one training iteration."""
    iteration: int
    revenue: float
    ir_penalty: float
    ic_penalty: float
    loss: float

    def to_row(self) -> list[str]:
        return [
            str(self.iteration),
            f"{self.revenue:.9g}",
            f"{self.ir_penalty:.9g}",
            f"{self.ic_penalty:.9g}",
            f"{self.loss:.9g}",
        ]

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def utility(value: float, alloc_row: np.ndarray, payment: float) -> float:
    """u_n = v_n * sum_m z[n][m] - p_n."""
    return float(value * np.sum(alloc_row) - payment)


def utilities(values: np.ndarray, alloc: np.ndarray, payments: np.ndarray) -> np.ndarray:
    """Batched utilities: values (B, N), alloc (B, N, M), payments (B, N) -> (B, N)."""
    return values * alloc.sum(axis=-1) - payments


def revenue(payments: np.ndarray) -> float | np.ndarray:
    """Sum of payments over bidders (last axis)."""
    total = np.sum(payments, axis=-1)
    return float(total) if np.ndim(total) == 0 else total


def ir_penalty(utils: np.ndarray) -> float | np.ndarray:
    """Sum over bidders of max(0, -u_n)."""
    total = np.maximum(0.0, -np.asarray(utils)).sum(axis=-1)
    return float(total) if np.ndim(total) == 0 else total
