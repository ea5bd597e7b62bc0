"""
Seed bookkeeping.

All randomness is drawn from generators keyed by (seed, stream, ...), never
from global state or the wall clock.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from src.errors import ConfigurationError


class Stream(IntEnum):
    """Stream identifiers; each purpose draws from its own generator."""
    CPU = 1
    REQUIREMENT = 2
    CYCLES = 3
    UNIFORM = 4
    NET_INIT = 10
    MISREPORT = 11
    BATCH_ORDER = 12
    EVAL_MISREPORT = 13


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for one (seed, keys...) stream."""
    if seed < 0:
        raise ConfigurationError("seed must be non-negative", field="seed")
    return np.random.default_rng([int(seed), *(int(k) for k in keys)])


def derive_seed(seed: int, *keys: int) -> int:
    return int(derive_rng(seed, *keys).integers(0, 2**31 - 1))


@dataclass(frozen=True)
class SeedPlan:
    """Training data, held-out data and algorithm streams for one run."""
    training: int
    holdout: int

    def __post_init__(self) -> None:
        if self.training == self.holdout:
            raise ConfigurationError(
                "holdout seed must differ from the training seed",
                field="holdout_seed",
            )

    @property
    def net_init(self) -> int:
        return derive_seed(self.training, Stream.NET_INIT)

    def misreport_rng(self) -> np.random.Generator:
        return derive_rng(self.training, Stream.MISREPORT)

    def batch_rng(self) -> np.random.Generator:
        return derive_rng(self.training, Stream.BATCH_ORDER)

    @property
    def eval_seed(self) -> int:
        return derive_seed(self.holdout, Stream.EVAL_MISREPORT)
