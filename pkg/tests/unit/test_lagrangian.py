"""Tests for the augmented Lagrangian objective."""

from __future__ import annotations

import numpy as np
import pytest

from src.auction import (
    LagrangeState,
    augmented_lagrangian,
    build_model,
    lagrange_update,
    loss,
    zero_model,
)
from src.errors import ConfigurationError
from src.nn import finite_diff_gradient


class TestAugmentedLagrangian:
    """Test the scalar objective and the multiplier update."""

    def test_worked_value(self):
        state = LagrangeState(lambda_ir=1.0, lambda_ic=1.0, rho=2.0)
        assert augmented_lagrangian(0.4, 0.1, 0.05, state) == pytest.approx(-0.2375, abs=1e-12)

    def test_no_violation_is_negative_revenue(self):
        assert augmented_lagrangian(0.7, 0.0, 0.0, LagrangeState(rho=5.0)) == pytest.approx(-0.7)

    def test_update_adds_rho_times_penalty(self):
        state = lagrange_update(LagrangeState(lambda_ir=1.0, rho=2.0), 0.1, 0.0)
        assert state.lambda_ir == pytest.approx(1.2)
        assert state.lambda_ic == 1.0

    def test_zero_penalties_leave_state_unchanged(self):
        state = LagrangeState(lambda_ir=0.3, lambda_ic=0.7, rho=2.0)
        assert lagrange_update(state, 0.0, 0.0) == state

    def test_rho_growth_is_capped(self):
        state = LagrangeState(rho=8.0, rho_growth=2.0, rho_max=10.0)
        assert lagrange_update(state, 0.0, 0.0).rho == 10.0

    def test_negative_multiplier_rejected(self):
        with pytest.raises(ConfigurationError):
            LagrangeState(lambda_ir=-0.1)


class TestLoss:
    """Test the batch loss and its analytic gradient."""

    def test_truthful_misreports_on_constant_structural_model(self):
        """Reporting the truth as the misreport gives no IC term; L = -R."""
        model = zero_model(2, 1, payment_mode="structural")
        values = np.array([[0.6, 0.3]])
        result = loss(model, values, values.copy(), LagrangeState())
        assert result.metrics.ic_penalty == 0.0
        assert result.metrics.ir_penalty == 0.0
        assert result.value == pytest.approx(-0.9 / 6.0, abs=1e-12)

    def test_metrics_carry_iteration(self):
        model = build_model(2, 1, hidden_layers=[4], seed=0)
        values = np.array([[0.2, 0.8]])
        result = loss(model, values, np.array([[0.5, 0.5]]), LagrangeState(), iteration=7)
        assert result.metrics.iteration == 7
        assert result.metrics.loss == result.value

    @pytest.mark.parametrize("mode", ["penalty", "structural"])
    def test_gradient_matches_finite_differences(self, mode):
        """Frozen misreports make the loss a smooth function of the parameters almost everywhere."""
        model = build_model(2, 1, hidden_layers=[4], payment_mode=mode, seed=13)
        rng = np.random.default_rng(2)
        values = rng.uniform(size=(6, 2))
        misreports = rng.uniform(size=(6, 2))
        state = LagrangeState(lambda_ir=0.5, lambda_ic=2.0, rho=1.5)
        result = loss(model, values, misreports, state)

        def of_alloc(flat):
            net = model.alloc_net.with_flat_parameters(flat)
            return loss(model.with_networks(net, model.pay_net), values, misreports, state).value

        def of_pay(flat):
            net = model.pay_net.with_flat_parameters(flat)
            return loss(model.with_networks(model.alloc_net, net), values, misreports, state).value

        numeric_alloc = finite_diff_gradient(of_alloc, model.alloc_net.flat_parameters(), h=1e-6)
        numeric_pay = finite_diff_gradient(of_pay, model.pay_net.flat_parameters(), h=1e-6)
        np.testing.assert_allclose(result.alloc_grads.flat(), numeric_alloc, rtol=1e-4, atol=1e-7)
        np.testing.assert_allclose(result.pay_grads.flat(), numeric_pay, rtol=1e-4, atol=1e-7)
