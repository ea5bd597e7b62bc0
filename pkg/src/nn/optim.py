"""
First-order optimizers over lists of parameter arrays.

Both steps are pure: they return new arrays and never modify their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from src.errors import DimensionError

FloatArray = np.ndarray


@dataclass(frozen=True, eq=False)
class AdamState:
    """Adam moment buffers and hyperparameters."""
    first_moment: tuple[FloatArray, ...]
    second_moment: tuple[FloatArray, ...]
    step_count: int = 0
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8


def adam_init(
    params: list[FloatArray],
    learning_rate: float = 1e-3,
    beta1: float = 0.9,
    beta2: float = 0.999,
    epsilon: float = 1e-8,
) -> AdamState:
    return AdamState(
        first_moment=tuple(np.zeros(np.shape(p)) for p in params),
        second_moment=tuple(np.zeros(np.shape(p)) for p in params),
        learning_rate=learning_rate,
        beta1=beta1,
        beta2=beta2,
        epsilon=epsilon,
    )


def _check_congruent(
    params: list[FloatArray],
    grads: list[FloatArray],
    buffers: tuple[FloatArray, ...] | None = None,
) -> None:
    if len(params) != len(grads) or (buffers is not None and len(buffers) != len(params)):
        raise DimensionError(
            "Parameter and gradient lists differ in length",
            expected=len(params),
            actual=len(grads),
        )
    for i, (p, g) in enumerate(zip(params, grads)):
        if np.shape(p) != np.shape(g) or (buffers is not None and buffers[i].shape != np.shape(p)):
            raise DimensionError(f"Shape mismatch at parameter {i}", expected=np.shape(p), actual=np.shape(g))


def adam_step(
    state: AdamState,
    params: list[FloatArray],
    grads: list[FloatArray],
) -> tuple[AdamState, list[FloatArray]]:
    """One bias-corrected Adam step; step_count advances by exactly one."""
    _check_congruent(params, grads, state.first_moment)
    step = state.step_count + 1
    b1, b2 = state.beta1, state.beta2
    first: list[FloatArray] = []
    second: list[FloatArray] = []
    updated: list[FloatArray] = []
    for p, g, m, v in zip(params, grads, state.first_moment, state.second_moment):
        g = np.asarray(g, dtype=np.float64)
        m = b1 * m + (1.0 - b1) * g
        v = b2 * v + (1.0 - b2) * g * g
        m_hat = m / (1.0 - b1**step)
        v_hat = v / (1.0 - b2**step)
        updated.append(
            np.asarray(p, dtype=np.float64) - state.learning_rate * m_hat / (np.sqrt(v_hat) + state.epsilon)
        )
        first.append(m)
        second.append(v)
    new_state = replace(state, first_moment=tuple(first), second_moment=tuple(second), step_count=step)
    return new_state, updated


def sgd_step(params: list[FloatArray], grads: list[FloatArray], learning_rate: float) -> list[FloatArray]:
    """Plain gradient descent step."""
    _check_congruent(params, grads)
    return [
        np.asarray(p, dtype=np.float64) - learning_rate * np.asarray(g, dtype=np.float64)
        for p, g in zip(params, grads)
    ]
