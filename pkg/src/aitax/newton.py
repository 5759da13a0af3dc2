"""Damped Newton iteration for square nonlinear systems.

Forward-difference Jacobian, step halving on the residual max-norm, and a
fraction-to-boundary rule that keeps selected components above hard lower
bounds.  Everything is deterministic: no randomness, fixed iteration order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

MAX_ITER = 200
MAX_HALVINGS = 40
JAC_STEP = 1e-7


@dataclass(frozen=True)
class NewtonResult:
    x: np.ndarray
    residual_norm: float
    converged: bool
    iterations: int


def _jacobian(f: Callable, x: np.ndarray, r0: np.ndarray) -> np.ndarray:
    n = len(x)
    jac = np.empty((len(r0), n))
    for j in range(n):
        h = JAC_STEP * max(1.0, abs(x[j]))
        xp = x.copy()
        xp[j] += h
        jac[:, j] = (f(xp) - r0) / h
    return jac


def newton_solve(
    f: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    *,
    tol: float = 1e-10,
    max_iter: int = MAX_ITER,
    lower: np.ndarray | None = None,
) -> NewtonResult:
    """Solve f(x) = 0 by damped Newton from x0.

    ``lower`` gives hard lower bounds per component (-inf where free); steps
    are shortened so iterates keep a 0.5% distance-to-bound margin.
    """
    x = np.asarray(x0, dtype=float).copy()
    lo = np.full_like(x, -np.inf) if lower is None else np.asarray(lower, dtype=float)
    try:
        r = np.asarray(f(x), dtype=float)
    except (FloatingPointError, ZeroDivisionError, OverflowError, ValueError):
        return NewtonResult(x, np.inf, False, 0)
    if not np.all(np.isfinite(r)):
        return NewtonResult(x, np.inf, False, 0)
    norm = float(np.max(np.abs(r)))

    for it in range(1, max_iter + 1):
        if norm <= tol:
            return NewtonResult(x, norm, True, it - 1)
        jac = _jacobian(f, x, r)
        if not np.all(np.isfinite(jac)):
            return NewtonResult(x, norm, False, it)
        try:
            dx = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            return NewtonResult(x, norm, False, it)

        # fraction-to-boundary: keep bounded components strictly inside
        alpha = 1.0
        bounded = np.isfinite(lo) & (dx < 0.0)
        if np.any(bounded):
            gap = x[bounded] - lo[bounded]
            alpha = min(1.0, float(np.min(-0.995 * gap / dx[bounded])))
        if alpha <= 0.0:
            return NewtonResult(x, norm, False, it)

        improved = False
        for _ in range(MAX_HALVINGS):
            x_try = x + alpha * dx
            with np.errstate(all="ignore"):
                try:
                    r_try = np.asarray(f(x_try), dtype=float)
                except (FloatingPointError, ZeroDivisionError, OverflowError, ValueError):
                    r_try = np.array([np.inf])
            if np.all(np.isfinite(r_try)):
                norm_try = float(np.max(np.abs(r_try)))
                if norm_try < norm:
                    x, r, norm = x_try, r_try, norm_try
                    improved = True
                    break
            alpha *= 0.5
        if not improved:
            return NewtonResult(x, norm, False, it)

    return NewtonResult(x, norm, norm <= tol, max_iter)
