from __future__ import annotations

from collections.abc import Callable

import numpy as np

from metrobound.core.errors import ComputationError

Gradient = Callable[[np.ndarray], np.ndarray]


def fd_hessian(grad: Gradient, x: np.ndarray, h: float = 1e-3) -> np.ndarray:
    """Hessiana por diferenças centrais do gradiente, simetrizada."""
    x = np.asarray(x, dtype=float)
    n = x.size
    hessian = np.empty((n, n))
    for i in range(n):
        step = np.zeros(n)
        step[i] = h
        hessian[i] = (grad(x + step) - grad(x - step)) / (2.0 * h)
    return 0.5 * (hessian + hessian.T)


def fd_gradient(
    fun: Callable[[np.ndarray], float], x: np.ndarray, h: float = 1e-6
) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    grad = np.empty_like(x)
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = h
        grad[i] = (fun(x + step) - fun(x - step)) / (2.0 * h)
    return grad


def projected_gradient_norm(
    grad: np.ndarray, x: np.ndarray, lower: float = -1.0, upper: float = 1.0
) -> float:
    """Norma infinito do gradiente (de minimização) projetado na caixa."""
    g = np.array(grad, dtype=float, copy=True)
    g[(x <= lower) & (g > 0)] = 0.0
    g[(x >= upper) & (g < 0)] = 0.0
    return float(np.max(np.abs(g), initial=0.0))


def safe_sqrt(value: float, clamp: float) -> float:
    """√value com radicandos levemente negativos (> −clamp) tratados como 0."""
    if value < 0.0:
        if value < -clamp:
            raise ComputationError(f"radicando negativo {value!r}")
        return 0.0
    return float(np.sqrt(value))


def log_grid(low: float, high: float, points: int) -> list[int]:
    """Inteiros distintos numa grade logarítmica entre low e high."""
    grid = np.rint(np.logspace(np.log10(low), np.log10(high), points))
    return [int(v) for v in np.unique(grid.astype(np.int64))]
