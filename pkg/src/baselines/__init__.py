"""
Baseline Mechanisms

Multi-unit VCG, second-price, first-price and a reserve-price auction,
plus a Monte Carlo revenue evaluator.
"""

from .mechanisms import (
    MECHANISM_NAMES,
    FixedMechanism,
    MechanismOutcome,
    first_price_batch,
    first_price_single,
    make_baseline,
    myerson_uniform_batch,
    myerson_uniform_single,
    second_price_batch,
    second_price_single,
    vcg_multiunit,
    vcg_multiunit_batch,
)
from .montecarlo import constant_sampler, expected_revenue_mc, market_sampler, uniform_sampler

__all__ = [
    "MechanismOutcome",
    "FixedMechanism",
    "MECHANISM_NAMES",
    "make_baseline",
    "vcg_multiunit",
    "vcg_multiunit_batch",
    "second_price_single",
    "second_price_batch",
    "first_price_single",
    "first_price_batch",
    "myerson_uniform_single",
    "myerson_uniform_batch",
    "expected_revenue_mc",
    "uniform_sampler",
    "market_sampler",
    "constant_sampler",
]
