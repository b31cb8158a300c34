"""Fixed-step classical Runge-Kutta integration and fast float evaluation of polynomial arrays."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .polynomial import Poly


class PolyArray:
    """Float evaluator for a batch of polynomials over the same variables.

    ``PolyArray(polys, shape)(X)`` returns an array of shape ``(N,) + shape``
    for points ``X`` of shape ``(N, nvars)``.
    """

    def __init__(self, polys: Sequence[Poly], shape: tuple[int, ...] | None = None):
        polys = list(polys)
        self.shape = (len(polys),) if shape is None else tuple(shape)
        if int(np.prod(self.shape)) != len(polys):
            raise ValueError("shape does not match number of polynomials")
        self.nvars = polys[0].nvars if polys else 0
        exps = sorted({e for p in polys for e in p.terms})
        self.exps = np.array(exps, dtype=np.int64).reshape(len(exps), self.nvars)
        index = {e: t for t, e in enumerate(exps)}
        C = np.zeros((len(exps), len(polys)))
        for k, p in enumerate(polys):
            for e, c in p.terms.items():
                C[index[e], k] = float(c)
        self.coeffs = C
        self.maxdeg = int(self.exps.max()) if self.exps.size else 0

    def __call__(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        N = X.shape[0]
        if not self.exps.size:
            return np.zeros((N,) + self.shape)
        powers = np.empty((self.maxdeg + 1,) + X.shape)
        powers[0] = 1.0
        for k in range(1, self.maxdeg + 1):
            powers[k] = powers[k - 1] * X
        cols = np.arange(self.nvars)
        monos = np.prod(powers[self.exps, :, cols[None, :]], axis=1)  # (T, N)
        return (monos.T @ self.coeffs).reshape((N,) + self.shape)


def rk4(rhs: Callable[[float, np.ndarray], np.ndarray], y0: np.ndarray, t0: float, t1: float,
        n_steps: int) -> np.ndarray:
    """Classical 4th-order Runge-Kutta with ``n_steps`` equal steps; ``y0`` may be batched."""
    y = np.array(y0, dtype=float)
    h = (t1 - t0) / n_steps
    t = t0
    for _ in range(n_steps):
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, y + (h / 2) * k1)
        k3 = rhs(t + h / 2, y + (h / 2) * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return y


def richardson_error(coarse: np.ndarray, fine: np.ndarray, order: int = 4) -> np.ndarray:
    """Error estimate of the fine solution from one step-halving pass."""
    return np.abs(fine - coarse) / (2 ** order - 1)
