"""
Regret estimation by misreport ascent.

For bidder n, the best misreport b'_n in [0, 1] (others bidding truthfully)
is searched by projected gradient ascent on the bidder's own utility from
several random starting points. The best utility seen along every path is
kept, so the estimate never exceeds the true regret.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from src.market.sampling import ValuationProfile

from .metrics import utilities


class Mechanism(Protocol):
    """Anything that maps bid batches to outcomes and exposes own-bid utility gradients."""
    n_bidders: int
    n_units: int

    def outcome(self, bids: np.ndarray) -> tuple[np.ndarray, np.ndarray]: ...

    def utility_bid_gradient(
        self,
        values: np.ndarray,
        bids: np.ndarray,
        bidder: int,
    ) -> tuple[np.ndarray, np.ndarray]: ...


@dataclass(frozen=True)
class MisreportSearch:
    """Restarts, ascent steps and step size of the inner maximization."""
    restarts: int = 10
    steps: int = 50
    learning_rate: float = 0.1


@dataclass(frozen=True, eq=False)
class RegretEstimate:
    """Per-profile, per-bidder regret and the misreports that achieve it."""
    regret: np.ndarray
    misreports: np.ndarray
    truthful_utility: np.ndarray


def ascend_misreports(
    mechanism: Mechanism,
    values: np.ndarray,
    starts: np.ndarray,
    steps: int,
    learning_rate: float,
    bidders: Iterable[int] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Projected gradient ascent from starts of shape (R, B, N).

    Returns the best misreport per (profile, bidder) and its utility; bidders
    not searched keep their truthful value and a utility of -inf.
    """
    n_restarts, batch, n = starts.shape
    best_bid = values.copy()
    best_util = np.full((batch, n), -np.inf)
    tiled = np.tile(values, (n_restarts, 1))
    for bidder in range(n) if bidders is None else bidders:
        bid = starts[:, :, bidder].reshape(-1).copy()
        path_best_util = np.full(bid.shape, -np.inf)
        path_best_bid = bid.copy()
        for step in range(steps + 1):
            reports = tiled.copy()
            reports[:, bidder] = bid
            util, grad = mechanism.utility_bid_gradient(tiled, reports, bidder)
            improved = util > path_best_util
            path_best_util = np.where(improved, util, path_best_util)
            path_best_bid = np.where(improved, bid, path_best_bid)
            if step < steps:
                bid = np.clip(bid + learning_rate * grad, 0.0, 1.0)
        per_restart_util = path_best_util.reshape(n_restarts, batch)
        winner = per_restart_util.argmax(axis=0)
        cols = np.arange(batch)
        best_util[:, bidder] = per_restart_util[winner, cols]
        best_bid[:, bidder] = path_best_bid.reshape(n_restarts, batch)[winner, cols]
    return best_bid, best_util


def estimate_regret_batch(
    mechanism: Mechanism,
    values: np.ndarray,
    search: MisreportSearch,
    rng: np.random.Generator,
    bidders: Iterable[int] | None = None,
) -> RegretEstimate:
    """Regret max(0, best misreport utility - truthful utility) for every profile row."""
    values = np.atleast_2d(np.asarray(values, dtype=np.float64))
    alloc, pay = mechanism.outcome(values)
    truthful = utilities(values, alloc, pay)
    starts = rng.uniform(0.0, 1.0, size=(search.restarts, *values.shape))
    misreports, best = ascend_misreports(
        mechanism, values, starts, search.steps, search.learning_rate, bidders
    )
    regret = np.maximum(0.0, best - truthful)
    return RegretEstimate(regret=regret, misreports=misreports, truthful_utility=truthful)


def estimate_regret(
    mechanism: Mechanism,
    profile: ValuationProfile | np.ndarray,
    bidder: int,
    search: MisreportSearch | None = None,
    seed: int = 0,
) -> float:
    """Estimated regret of one bidder on one profile."""
    values = profile.values if isinstance(profile, ValuationProfile) else np.asarray(profile, dtype=np.float64)
    estimate = estimate_regret_batch(
        mechanism,
        values[None, :],
        search or MisreportSearch(),
        np.random.default_rng(seed),
        bidders=[bidder],
    )
    return float(estimate.regret[0, bidder])
