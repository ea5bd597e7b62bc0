"""Monte Carlo expected revenue under truthful bidding."""

from __future__ import annotations

from collections.abc import Callable

import numpy as np
import structlog

from src.auction.regret import Mechanism
from src.errors import ConfigurationError, DimensionError
from src.market import MarketConfig, sample_valuations
from src.seeding import derive_rng

logger = structlog.get_logger(__name__)

# (generator, count) -> valuations of shape (count, N)
Sampler = Callable[[np.random.Generator, int], np.ndarray]

DEFAULT_CHUNK = 65_536


def uniform_sampler(n_bidders: int) -> Sampler:
    """i.i.d. uniform[0, 1] valuations."""
    def draw(rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.uniform(0.0, 1.0, size=(count, n_bidders))
    return draw


def market_sampler(config: MarketConfig) -> Sampler:
    """Valuations from the market model; each chunk gets its own sampling seed."""
    def draw(rng: np.random.Generator, count: int) -> np.ndarray:
        seed = int(rng.integers(0, 2**31 - 1))
        return sample_valuations(config, count, seed=seed).values
    return draw


def constant_sampler(profile: np.ndarray) -> Sampler:
    values = np.asarray(profile, dtype=np.float64)

    def draw(rng: np.random.Generator, count: int) -> np.ndarray:
        return np.tile(values, (count, 1))
    return draw


def expected_revenue_mc(
    mechanism: Mechanism,
    sampler: Sampler,
    n_samples: int,
    seed: int = 0,
    chunk_size: int = DEFAULT_CHUNK,
) -> float:
    """Mean revenue over n_samples truthful profiles, summed chunk by chunk in a fixed order."""
    if n_samples < 1:
        raise ConfigurationError(f"n_samples must be >= 1, got {n_samples}", field="n_samples")
    if chunk_size < 1:
        raise ConfigurationError("chunk_size must be >= 1", field="chunk_size")
    rng = derive_rng(seed)
    total = 0.0
    remaining = n_samples
    while remaining > 0:
        count = min(chunk_size, remaining)
        values = sampler(rng, count)
        if values.shape != (count, mechanism.n_bidders):
            raise DimensionError(
                "Sampler returned the wrong shape",
                expected=(count, mechanism.n_bidders),
                actual=values.shape,
            )
        _, payments = mechanism.outcome(values)
        total += float(payments.sum())
        remaining -= count
    mean = total / n_samples
    logger.debug("monte_carlo_revenue", n_samples=n_samples, seed=seed, revenue=mean)
    return mean
