"""Central finite differences, used as a gradient oracle."""

from __future__ import annotations

from collections.abc import Callable

import numpy as np

from src.errors import ConfigurationError


def finite_diff_gradient(
    f: Callable[[np.ndarray], float],
    x: np.ndarray | float,
    h: float = 1e-5,
) -> np.ndarray:
    """Estimate grad f(x) coordinate-wise as (f(x + h e_i) - f(x - h e_i)) / 2h."""
    if not h > 0.0:
        raise ConfigurationError(f"Finite-difference step must be positive, got {h}", field="h")
    point = np.atleast_1d(np.asarray(x, dtype=np.float64)).copy()
    grad = np.zeros_like(point)
    for i in range(point.size):
        original = point.flat[i]
        point.flat[i] = original + h
        f_plus = float(f(point.copy()))
        point.flat[i] = original - h
        f_minus = float(f(point.copy()))
        point.flat[i] = original
        grad.flat[i] = (f_plus - f_minus) / (2.0 * h)
    return grad
