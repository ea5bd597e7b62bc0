"""Tests for classical baseline mechanisms and Monte Carlo revenue."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from src.baselines import (
    FixedMechanism,
    constant_sampler,
    expected_revenue_mc,
    first_price_single,
    make_baseline,
    market_sampler,
    myerson_uniform_single,
    second_price_batch,
    second_price_single,
    uniform_sampler,
    vcg_multiunit,
    vcg_multiunit_batch,
)
from src.errors import ConfigurationError, DimensionError
from src.market import MarketConfig


def _brute_force_vcg(bids: np.ndarray, n_units: int, cap: int) -> tuple[float, np.ndarray]:
    """Optimal welfare and VCG payments by enumerating unit counts."""
    n = len(bids)

    def best(active: list[int]) -> tuple[float, dict[int, int]]:
        top, top_counts = 0.0, {i: 0 for i in active}
        for counts in itertools.product(range(cap + 1), repeat=len(active)):
            if sum(counts) <= n_units:
                welfare = sum(bids[i] * k for i, k in zip(active, counts))
                if welfare > top:
                    top, top_counts = welfare, dict(zip(active, counts))
        return top, top_counts

    welfare, counts = best(list(range(n)))
    pay = np.zeros(n)
    for bidder in range(n):
        without, _ = best([i for i in range(n) if i != bidder])
        pay[bidder] = without - (welfare - bids[bidder] * counts[bidder])
    return welfare, pay


class TestVcg:
    """Test multi-unit VCG."""

    def test_uncapped_top_bidder_takes_all(self):
        outcome = vcg_multiunit(np.array([0.9, 0.5, 0.2]), n_units=3)
        assert outcome.winners() == [0]
        assert outcome.alloc[0].sum() == 3
        assert outcome.payments[0] == pytest.approx(1.5)
        assert outcome.payments[1] == 0.0 and outcome.payments[2] == 0.0

    def test_capped_winners_pay_highest_loser(self):
        outcome = vcg_multiunit(np.array([0.9, 0.5, 0.2]), n_units=2, unit_cap=1)
        assert outcome.winners() == [0, 1]
        np.testing.assert_allclose(outcome.payments, [0.2, 0.2, 0.0])

    def test_single_positive_bidder_pays_nothing(self):
        outcome = vcg_multiunit(np.array([0.7, 0.0, 0.0]), n_units=1)
        assert outcome.winners() == [0]
        assert outcome.payments[0] == 0.0

    def test_tie_goes_to_lowest_index(self):
        outcome = second_price_single(np.array([0.5, 0.5]))
        assert outcome.winners() == [0]
        assert outcome.payments[0] == pytest.approx(0.5)

    @pytest.mark.parametrize("n, m, cap", [(2, 1, 1), (2, 3, 2), (3, 2, 1), (3, 3, 2), (3, 3, 3)])
    def test_matches_brute_force(self, n, m, cap):
        rng = np.random.default_rng(n * 10 + m + cap)
        for _ in range(20):
            bids = rng.uniform(size=n)
            outcome = vcg_multiunit(bids, n_units=m, unit_cap=cap)
            welfare, pay = _brute_force_vcg(bids, m, cap)
            assert float(bids @ outcome.alloc.sum(axis=1)) == pytest.approx(welfare, abs=1e-12)
            np.testing.assert_allclose(outcome.payments, pay, atol=1e-12)

    def test_individually_rational_and_losers_pay_nothing(self):
        bids = np.random.default_rng(0).uniform(size=(200, 4))
        alloc, payments = vcg_multiunit_batch(bids, n_units=3, unit_cap=2)
        won = alloc.sum(axis=2)
        assert np.all(payments <= bids * won + 1e-12)
        assert np.all(payments[won == 0] == 0.0)
        assert np.all(alloc.sum(axis=1) <= 1.0)

    def test_bad_unit_count(self):
        with pytest.raises(ConfigurationError):
            vcg_multiunit(np.array([0.1, 0.2]), n_units=0)


class TestSingleItemRules:
    """Test first-price, second-price and the uniform-prior optimal auction."""

    def test_first_price_winner_pays_bid(self):
        outcome = first_price_single(np.array([0.8, 0.4]))
        assert outcome.winners() == [0]
        np.testing.assert_allclose(outcome.payments, [0.8, 0.0])

    def test_second_price_winner_pays_runner_up(self):
        outcome = second_price_single(np.array([0.3, 0.9, 0.6]))
        assert outcome.winners() == [1]
        assert outcome.revenue == pytest.approx(0.6)

    @pytest.mark.parametrize(
        "bids, winners, revenue",
        [([0.3, 0.2], [], 0.0), ([0.6, 0.2], [0], 0.5), ([0.7, 0.9], [1], 0.7)],
    )
    def test_myerson_reserve(self, bids, winners, revenue):
        outcome = myerson_uniform_single(np.array(bids))
        assert outcome.winners() == winners
        assert outcome.revenue == pytest.approx(revenue)

    def test_myerson_reserve_range(self):
        with pytest.raises(ConfigurationError):
            myerson_uniform_single(np.array([0.5, 0.5]), reserve=1.5)

    def test_single_wrapper_rejects_batches(self):
        with pytest.raises(DimensionError):
            first_price_single(np.zeros((2, 2)))


class TestMakeBaseline:
    """Test baseline lookup by name."""

    def test_known_names(self):
        assert make_baseline("vcg", 3, n_units=2).n_units == 2
        assert make_baseline("second-price", 3, n_units=2).n_units == 1

    def test_unknown_name(self):
        with pytest.raises(ConfigurationError, match="first-price"):
            make_baseline("dutch", 2)

    def test_width_checked(self):
        with pytest.raises(DimensionError):
            make_baseline("first-price", 3).outcome(np.zeros((1, 2)))


class TestMonteCarlo:
    """Test expected revenue estimation."""

    def test_second_price_two_uniform_bidders(self):
        """E[min(U1, U2)] = 1/3."""
        revenue = expected_revenue_mc(make_baseline("second-price", 2), uniform_sampler(2), 1_000_000, seed=0)
        assert revenue == pytest.approx(1.0 / 3.0, abs=2e-3)

    def test_myerson_two_uniform_bidders(self):
        """Reserve 1/2 raises expected revenue to 5/12."""
        revenue = expected_revenue_mc(make_baseline("myerson", 2), uniform_sampler(2), 1_000_000, seed=0)
        assert revenue == pytest.approx(5.0 / 12.0, abs=2e-3)

    def test_constant_profile(self):
        mechanism = FixedMechanism(second_price_batch, 3, 1)
        revenue = expected_revenue_mc(mechanism, constant_sampler(np.array([0.2, 0.7, 0.4])), 10)
        assert revenue == pytest.approx(0.4)

    def test_chunking_does_not_change_constant_result(self):
        mechanism = make_baseline("vcg", 2, n_units=2)
        sampler = constant_sampler(np.array([0.9, 0.3]))
        a = expected_revenue_mc(mechanism, sampler, 100, chunk_size=7)
        b = expected_revenue_mc(mechanism, sampler, 100, chunk_size=100)
        assert a == pytest.approx(b, abs=1e-12)

    def test_deterministic(self):
        mechanism = make_baseline("vcg", 5, n_units=3)
        sampler = market_sampler(MarketConfig.case_study())
        assert expected_revenue_mc(mechanism, sampler, 500, seed=2) == expected_revenue_mc(
            mechanism, sampler, 500, seed=2
        )

    def test_sampler_shape_checked(self):
        with pytest.raises(DimensionError):
            expected_revenue_mc(make_baseline("vcg", 3), uniform_sampler(2), 10)

    def test_needs_samples(self):
        with pytest.raises(ConfigurationError):
            expected_revenue_mc(make_baseline("vcg", 2), uniform_sampler(2), 0)
