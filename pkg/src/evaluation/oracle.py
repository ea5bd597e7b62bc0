"""
Exact regret by exhaustive grid search over one bidder's misreport.

Works for learned models and classical rules alike: anything with an
outcome(bids) method, or a bare batched rule bids -> (alloc, payments).
"""

from __future__ import annotations

from collections.abc import Callable

import numpy as np

from src.auction.metrics import utilities
from src.errors import ConfigurationError, DimensionError
from src.market.sampling import ValuationProfile

OutcomeFn = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]

DEFAULT_GRID_STEP = 1e-3


def misreport_grid(grid_step: float = DEFAULT_GRID_STEP) -> np.ndarray:
    """{0, step, 2*step, ...} with 1 always included."""
    if not 0.0 < grid_step <= 0.5:
        raise ConfigurationError(f"grid_step must lie in (0, 0.5], got {grid_step}", field="grid_step")
    points = np.arange(0.0, 1.0, grid_step)
    return np.append(points[points < 1.0 - 1e-12], 1.0)


def _outcome_fn(mechanism: object) -> OutcomeFn:
    outcome = getattr(mechanism, "outcome", None)
    if callable(outcome):
        return outcome  # type: ignore[no-any-return]
    if callable(mechanism):
        return mechanism  # type: ignore[return-value]
    raise ConfigurationError("mechanism must provide outcome(bids) or be a batched rule", field="mechanism")


def exact_regret_grid_batch(
    mechanism: object,
    values: np.ndarray,
    bidder: int,
    grid_step: float = DEFAULT_GRID_STEP,
    chunk_rows: int = 32_768,
) -> np.ndarray:
    """Grid regret of one bidder for every row of values (B, N)."""
    outcome = _outcome_fn(mechanism)
    values = np.atleast_2d(np.asarray(values, dtype=np.float64))
    batch, n = values.shape
    if not 0 <= bidder < n:
        raise DimensionError("bidder index out of range", expected=n, actual=bidder)
    grid = misreport_grid(grid_step)
    truthful = utilities(values, *outcome(values))[:, bidder]

    per_chunk = max(1, chunk_rows // grid.size)
    best = np.empty(batch)
    for start in range(0, batch, per_chunk):
        block = values[start:start + per_chunk]
        reports = np.repeat(block, grid.size, axis=0)
        reports[:, bidder] = np.tile(grid, block.shape[0])
        alloc, pay = outcome(reports)
        gained = block[:, bidder].repeat(grid.size) * alloc[:, bidder, :].sum(axis=1) - pay[:, bidder]
        best[start:start + block.shape[0]] = gained.reshape(block.shape[0], grid.size).max(axis=1)
    return np.maximum(0.0, best - truthful)


def exact_regret_grid(
    mechanism: object,
    profile: ValuationProfile | np.ndarray,
    bidder: int,
    grid_step: float = DEFAULT_GRID_STEP,
) -> float:
    """max(0, best grid misreport utility - truthful utility) for one bidder on one profile."""
    values = profile.values if isinstance(profile, ValuationProfile) else np.asarray(profile, dtype=np.float64)
    return float(exact_regret_grid_batch(mechanism, values[None, :], bidder, grid_step)[0])
