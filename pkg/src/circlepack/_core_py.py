"""Pure-Python (numpy) kernels: penalty energy, analytic gradient, and a
packing-specialised L-BFGS entry point.

This module mirrors the compiled ``_core`` extension function-for-function
and is selected at import time when the extension is unavailable (see
:mod:`circlepack.kernels`).
"""

from __future__ import annotations

import math

import numpy as np

from . import optim

BACKEND = "python"


def energy_terms(xy: np.ndarray, radii: np.ndarray, L: float):
    """Total energy plus its per-circle pieces.

    Returns ``(U, d_v, d_h, pair_sq)`` where ``d_v``/``d_h`` are the
    border overlap depths per circle and ``pair_sq[i]`` is the sum of
    squared pair depths involving circle i.
    """
    n = radii.shape[0]
    pts = xy.reshape(n, 2)
    x = pts[:, 0]
    y = pts[:, 1]
    half = 0.5 * L
    d_v = np.maximum(radii + np.abs(x) - half, 0.0)
    d_h = np.maximum(radii + np.abs(y) - half, 0.0)

    dx = x[:, None] - x[None, :]
    dy = y[:, None] - y[None, :]
    dist = np.sqrt(dx * dx + dy * dy)
    depth = radii[:, None] + radii[None, :] - dist
    np.fill_diagonal(depth, 0.0)
    np.clip(depth, 0.0, None, out=depth)
    pair_sq = np.sum(depth * depth, axis=1)

    U = float(np.dot(d_v, d_v) + np.dot(d_h, d_h) + 0.5 * np.sum(pair_sq))
    return U, d_v, d_h, pair_sq


def energy_and_grad(xy: np.ndarray, radii: np.ndarray, L: float):
    """Energy and its analytic gradient; third element counts overlapping
    pairs with exactly coincident centers (resolved by a deterministic
    separation direction)."""
    n = radii.shape[0]
    pts = xy.reshape(n, 2)
    x = pts[:, 0]
    y = pts[:, 1]
    half = 0.5 * L

    d_v = np.maximum(radii + np.abs(x) - half, 0.0)
    d_h = np.maximum(radii + np.abs(y) - half, 0.0)
    gx = 2.0 * d_v * np.sign(x)
    gy = 2.0 * d_h * np.sign(y)
    U = float(np.dot(d_v, d_v) + np.dot(d_h, d_h))

    dx = x[:, None] - x[None, :]
    dy = y[:, None] - y[None, :]
    dist = np.sqrt(dx * dx + dy * dy)
    depth = radii[:, None] + radii[None, :] - dist
    np.fill_diagonal(depth, 0.0)
    np.clip(depth, 0.0, None, out=depth)
    U += 0.5 * float(np.sum(depth * depth))

    overlapping = depth > 0.0
    coincident = overlapping & (dist == 0.0)
    regular = overlapping & ~coincident
    coef = np.zeros_like(depth)
    np.divide(2.0 * depth, dist, out=coef, where=regular)
    gx -= np.sum(coef * dx, axis=1)
    gy -= np.sum(coef * dy, axis=1)

    n_degenerate = 0
    if coincident.any():
        for a, b in zip(*np.nonzero(np.triu(coincident, k=1))):
            ux, uy = _separation_direction(int(a), int(b))
            push = 2.0 * depth[a, b]
            gx[a] -= push * ux
            gy[a] -= push * uy
            gx[b] += push * ux
            gy[b] += push * uy
            n_degenerate += 1

    grad = np.empty(2 * n)
    grad[0::2] = gx
    grad[1::2] = gy
    return U, grad, n_degenerate


def _separation_direction(a: int, b: int) -> tuple[float, float]:
    """Deterministic unit vector used when an overlapping pair sits on
    exactly the same point (indices 0-based, a < b)."""
    ang = 0.017453292519943295 * math.fmod(31.0 * (a + 1) + 17.0 * (b + 1), 360.0)
    return math.cos(ang), math.sin(ang)


def lbfgs_pack(
    xy0: np.ndarray,
    radii: np.ndarray,
    L: float,
    memory: int = 7,
    max_iters: int = 5000,
    grad_tol: float = 1e-10,
    f_tol: float = 1e-20,
    c1: float = 1e-4,
    c2: float = 0.9,
):
    """Minimize the packing energy from ``xy0``; returns
    ``(x, f, iterations, reason_code, n_evals)`` with reason codes as in
    :class:`circlepack.optim.TerminationReason`."""
    cfg = optim.MinimizeConfig(
        memory=memory,
        max_iters=max_iters,
        grad_tol=grad_tol,
        energy_tol=f_tol,
        sufficient_decrease=c1,
        curvature=c2,
    )

    def fun(v):
        U, grad, _ = energy_and_grad(v, radii, L)
        return U, grad

    res = optim.minimize(fun, xy0, cfg)
    return res.x, res.f, res.iterations, res.reason.value, res.n_evals
