"""Independent brute-force oracles used to validate the fast paths."""

from __future__ import annotations

import math

import numpy as np

from circlepack.actionspace import Square


def oracle_action_spaces(squares: list[Square], container_side: float) -> list[tuple]:
    """Maximal empty rectangles by exhaustive enumeration: every rectangle
    whose edges come from the square/container edge coordinates, kept if
    its interior meets no square and it is not contained in another kept
    rectangle.  Returns sorted (x1, y1, x2, y2) tuples."""
    half = container_side / 2.0
    xs = {-half, half}
    ys = {-half, half}
    clipped = []
    for sq in squares:
        x1 = max(sq.lo[0], -half)
        y1 = max(sq.lo[1], -half)
        x2 = min(sq.hi[0], half)
        y2 = min(sq.hi[1], half)
        if x1 < x2 and y1 < y2:
            clipped.append((x1, y1, x2, y2))
            xs.update((x1, x2))
            ys.update((y1, y2))
    xs = np.array(sorted(xs))
    ys = np.array(sorted(ys))

    ix1, ix2 = np.triu_indices(len(xs), k=1)
    iy1, iy2 = np.triu_indices(len(ys), k=1)
    X1, X2 = xs[ix1], xs[ix2]   # (P,)
    Y1, Y2 = ys[iy1], ys[iy2]   # (Q,)

    if clipped:
        sq_arr = np.array(clipped)
        x_over = (X1[:, None] < sq_arr[None, :, 2]) & (sq_arr[None, :, 0] < X2[:, None])
        y_over = (Y1[:, None] < sq_arr[None, :, 3]) & (sq_arr[None, :, 1] < Y2[:, None])
        blocked = np.einsum("ps,qs->pq", x_over, y_over) > 0
    else:
        blocked = np.zeros((len(X1), len(Y1)), dtype=bool)

    cand = [
        (X1[p], Y1[q], X2[p], Y2[q])
        for p in range(len(X1))
        for q in range(len(Y1))
        if not blocked[p, q]
    ]
    if not cand:
        return []
    arr = np.array(cand)
    inside = (
        (arr[:, None, 0] >= arr[None, :, 0])
        & (arr[:, None, 1] >= arr[None, :, 1])
        & (arr[:, None, 2] <= arr[None, :, 2])
        & (arr[:, None, 3] <= arr[None, :, 3])
    )
    np.fill_diagonal(inside, False)
    keep = arr[~inside.any(axis=1)]
    return sorted(map(tuple, keep))


def brute_force_energy(centers: np.ndarray, radii: np.ndarray, L: float) -> float:
    """Direct transcription of the energy definition, scalar loops only."""
    n = len(radii)
    U = 0.0
    for i in range(n):
        dv = max(radii[i] + abs(centers[i, 0]) - L / 2.0, 0.0)
        dh = max(radii[i] + abs(centers[i, 1]) - L / 2.0, 0.0)
        U += dv * dv + dh * dh
    for i in range(n - 1):
        for j in range(i + 1, n):
            d = math.hypot(centers[i, 0] - centers[j, 0], centers[i, 1] - centers[j, 1])
            dij = max(radii[i] + radii[j] - d, 0.0)
            U += dij * dij
    return U


def central_difference_gradient(xy: np.ndarray, radii: np.ndarray, L: float, h: float) -> np.ndarray:
    """Finite-difference gradient of the energy (independent of the
    analytic-gradient code path)."""
    from circlepack import kernels

    fd = np.empty_like(xy)
    for k in range(xy.size):
        xp = xy.copy()
        xp[k] += h
        xm = xy.copy()
        xm[k] -= h
        fd[k] = (kernels.energy_terms(xp, radii, L)[0] - kernels.energy_terms(xm, radii, L)[0]) / (2.0 * h)
    return fd
