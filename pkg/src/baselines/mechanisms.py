"""
Classical sealed-bid mechanisms.

Every rule has a batched form taking bids of shape (batch, N) and returning
allocations (batch, N, M) and payments (batch, N), plus a single-profile
wrapper returning a MechanismOutcome. Ties go to the lowest bidder index.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from functools import partial

import numpy as np
import structlog

from src.errors import ConfigurationError, DimensionError, DomainError

logger = structlog.get_logger(__name__)

BatchRule = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]

MECHANISM_NAMES = ("vcg", "second-price", "first-price", "myerson")


@dataclass(frozen=True, eq=False)
class MechanismOutcome:
    """0/1 allocation matrix (N, M) and payments (N,) of one auction."""
    alloc: np.ndarray
    payments: np.ndarray

    @property
    def revenue(self) -> float:
        return float(self.payments.sum())

    def winners(self) -> list[int]:
        return [int(n) for n in np.flatnonzero(self.alloc.sum(axis=1) > 0)]


def _as_bid_batch(bids: np.ndarray) -> np.ndarray:
    batch = np.asarray(bids, dtype=np.float64)
    batch = batch[None, :] if batch.ndim == 1 else batch
    if batch.ndim != 2 or batch.shape[1] < 1:
        raise DimensionError("Bids must be a vector or a (batch, N) array", actual=np.shape(bids))
    if not np.all(np.isfinite(batch)):
        raise DomainError("Bids must be finite")
    return batch


def _rank(bids: np.ndarray) -> np.ndarray:
    """Bidder indices by decreasing bid; stable so equal bids keep index order."""
    return np.argsort(-bids, axis=1, kind="stable")


def _units_by_rank(n_ranked: int, n_units: int, cap: int) -> np.ndarray:
    return np.clip(n_units - cap * np.arange(n_ranked), 0, cap)


def _greedy_welfare(bids: np.ndarray, n_units: int, cap: int) -> np.ndarray:
    if bids.shape[1] == 0:
        return np.zeros(bids.shape[0])
    ranked = np.take_along_axis(bids, _rank(bids), axis=1)
    return ranked @ _units_by_rank(bids.shape[1], n_units, cap).astype(np.float64)


def vcg_multiunit_batch(
    bids: np.ndarray,
    n_units: int,
    unit_cap: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """
    VCG for M identical units with additive per-unit values.

    Units go greedily to the highest bids, at most unit_cap per bidder
    (uncapped: all M to the top bidder). Bidder n pays the welfare the others
    would get without n minus the welfare they get with n present.
    """
    if n_units < 1:
        raise ConfigurationError("n_units must be >= 1", field="n_units")
    cap = n_units if unit_cap is None else unit_cap
    if cap < 1:
        raise ConfigurationError("unit_cap must be >= 1", field="unit_cap")
    bids = _as_bid_batch(bids)
    batch, n = bids.shape

    order = _rank(bids)
    units = _units_by_rank(n, n_units, cap)
    starts = np.concatenate([[0], np.cumsum(units)[:-1]])
    alloc = np.zeros((batch, n, n_units))
    rows = np.arange(batch)
    for rank, (count, first) in enumerate(zip(units, starts)):
        if count:
            alloc[rows, order[:, rank], first:first + count] = 1.0

    won = alloc.sum(axis=2)
    welfare = (bids * won).sum(axis=1)
    payments = np.zeros((batch, n))
    for bidder in range(n):
        without = _greedy_welfare(np.delete(bids, bidder, axis=1), n_units, cap)
        others_with = welfare - bids[:, bidder] * won[:, bidder]
        payments[:, bidder] = np.where(won[:, bidder] > 0, np.maximum(without - others_with, 0.0), 0.0)
    return alloc, payments


def second_price_batch(bids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return vcg_multiunit_batch(bids, 1)


def first_price_batch(bids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    bids = _as_bid_batch(bids)
    rows = np.arange(bids.shape[0])
    winner = _rank(bids)[:, 0]
    alloc = np.zeros((*bids.shape, 1))
    alloc[rows, winner, 0] = 1.0
    payments = np.zeros_like(bids)
    payments[rows, winner] = bids[rows, winner]
    return alloc, payments


def myerson_uniform_batch(bids: np.ndarray, reserve: float = 0.5) -> tuple[np.ndarray, np.ndarray]:
    """Second price with a reserve; no sale when every bid is below it."""
    if not 0.0 <= reserve <= 1.0:
        raise ConfigurationError(f"reserve must lie in [0, 1], got {reserve}", field="reserve")
    bids = _as_bid_batch(bids)
    rows = np.arange(bids.shape[0])
    order = _rank(bids)
    winner = order[:, 0]
    top = bids[rows, winner]
    second = bids[rows, order[:, 1]] if bids.shape[1] > 1 else np.zeros(bids.shape[0])
    sold = top >= reserve
    alloc = np.zeros((*bids.shape, 1))
    alloc[rows[sold], winner[sold], 0] = 1.0
    payments = np.zeros_like(bids)
    payments[rows[sold], winner[sold]] = np.maximum(reserve, second[sold])
    return alloc, payments


def _single(rule: BatchRule, bids: np.ndarray) -> MechanismOutcome:
    if np.ndim(bids) != 1:
        raise DimensionError("Expected a single bid vector", actual=np.shape(bids))
    alloc, payments = rule(bids)
    return MechanismOutcome(alloc[0], payments[0])


def vcg_multiunit(bids: np.ndarray, n_units: int, unit_cap: int | None = None) -> MechanismOutcome:
    return _single(partial(vcg_multiunit_batch, n_units=n_units, unit_cap=unit_cap), bids)


def second_price_single(bids: np.ndarray) -> MechanismOutcome:
    return _single(second_price_batch, bids)


def first_price_single(bids: np.ndarray) -> MechanismOutcome:
    return _single(first_price_batch, bids)


def myerson_uniform_single(bids: np.ndarray, reserve: float = 0.5) -> MechanismOutcome:
    return _single(partial(myerson_uniform_batch, reserve=reserve), bids)


class FixedMechanism:
    """
    Adapts a batched bids -> (alloc, payments) rule to the mechanism protocol
    used by regret estimation. Own-bid utility gradients are central
    differences with step h.
    """

    def __init__(self, rule: BatchRule, n_bidders: int, n_units: int, name: str = "fixed", h: float = 1e-5):
        if h <= 0.0:
            raise ConfigurationError("h must be positive", field="h")
        self.rule = rule
        self.n_bidders = n_bidders
        self.n_units = n_units
        self.name = name
        self.h = h

    def outcome(self, bids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        batch = _as_bid_batch(bids)
        if batch.shape[1] != self.n_bidders:
            raise DimensionError("Bid width must equal n_bidders", expected=self.n_bidders, actual=batch.shape)
        return self.rule(batch)

    def _utility(self, values: np.ndarray, bids: np.ndarray, bidder: int) -> np.ndarray:
        alloc, payments = self.outcome(bids)
        return values[:, bidder] * alloc[:, bidder, :].sum(axis=1) - payments[:, bidder]

    def utility_bid_gradient(
        self,
        values: np.ndarray,
        bids: np.ndarray,
        bidder: int,
    ) -> tuple[np.ndarray, np.ndarray]:
        up = np.array(bids, dtype=np.float64)
        down = up.copy()
        up[:, bidder] += self.h
        down[:, bidder] -= self.h
        grad = (self._utility(values, up, bidder) - self._utility(values, down, bidder)) / (2.0 * self.h)
        return self._utility(values, bids, bidder), grad


def make_baseline(
    name: str,
    n_bidders: int,
    n_units: int = 1,
    reserve: float = 0.5,
    unit_cap: int | None = None,
) -> FixedMechanism:
    """Baseline by CLI name; single-item rules sell one unit regardless of n_units."""
    if name == "vcg":
        rule: BatchRule = partial(vcg_multiunit_batch, n_units=n_units, unit_cap=unit_cap)
        return FixedMechanism(rule, n_bidders, n_units, name)
    if name == "second-price":
        return FixedMechanism(second_price_batch, n_bidders, 1, name)
    if name == "first-price":
        return FixedMechanism(first_price_batch, n_bidders, 1, name)
    if name == "myerson":
        if not 0.0 <= reserve <= 1.0:
            raise ConfigurationError(f"reserve must lie in [0, 1], got {reserve}", field="reserve")
        return FixedMechanism(partial(myerson_uniform_batch, reserve=reserve), n_bidders, 1, name)
    raise ConfigurationError(
        f"Unknown mechanism {name!r}; choose one of: {', '.join(MECHANISM_NAMES)}",
        field="mechanism",
    )
