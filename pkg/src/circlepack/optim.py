"""Limited-memory BFGS minimizer with a strong-Wolfe line search.

This is the reference implementation used for all continuous
optimization steps; a compiled twin specialised to the packing energy
lives in the ``_core`` extension (see :mod:`circlepack.kernels`).
Two-loop recursion, history scaling by s.y/y.y, and deterministic
arithmetic: identical inputs produce bit-identical iterate sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

Objective = Callable[[np.ndarray], tuple[float, np.ndarray]]


class TerminationReason(Enum):
    OBJECTIVE_BELOW_TOL = 0
    GRAD_BELOW_TOL = 1
    MAX_ITERS = 2
    LINE_SEARCH_FAILURE = 3


@dataclass(frozen=True)
class MinimizeConfig:
    memory: int = 7
    max_iters: int = 5000
    grad_tol: float = 1e-10          # max-norm of the gradient
    energy_tol: float = 1e-20        # stop as soon as f drops below this
    sufficient_decrease: float = 1e-4
    curvature: float = 0.9

    def __post_init__(self):
        if self.memory < 1:
            raise ValueError("memory must be >= 1")
        if not 0.0 < self.sufficient_decrease < self.curvature < 1.0:
            raise ValueError("need 0 < sufficient_decrease < curvature < 1")


@dataclass(frozen=True)
class MinimizeResult:
    x: np.ndarray
    f: float
    iterations: int
    reason: TerminationReason
    n_evals: int = 0


def minimize(fun: Objective, x0: np.ndarray, cfg: Optional[MinimizeConfig] = None) -> MinimizeResult:
    """Minimize ``fun`` (returning (value, gradient)) from ``x0``.

    Accepted iterates are strictly non-increasing in objective value.
    Non-finite values encountered during the search terminate with
    LINE_SEARCH_FAILURE at the last finite iterate.
    """
    if cfg is None:
        cfg = MinimizeConfig()
    x = np.array(x0, dtype=float, copy=True)
    f, g = fun(x)
    g = np.asarray(g, dtype=float)
    n_evals = 1
    if not (math.isfinite(f) and np.all(np.isfinite(g))):
        raise ValueError("objective must be finite at the starting point")

    if f < cfg.energy_tol:
        return MinimizeResult(x, f, 0, TerminationReason.OBJECTIVE_BELOW_TOL, n_evals)
    if np.max(np.abs(g)) < cfg.grad_tol:
        return MinimizeResult(x, f, 0, TerminationReason.GRAD_BELOW_TOL, n_evals)

    s_hist: list[np.ndarray] = []
    y_hist: list[np.ndarray] = []
    rho_hist: list[float] = []
    gamma = 1.0

    for it in range(1, cfg.max_iters + 1):
        d = _two_loop_direction(g, s_hist, y_hist, rho_hist, gamma)
        dg = float(np.dot(d, g))
        if dg >= 0.0:  # history produced a non-descent direction
            s_hist.clear(); y_hist.clear(); rho_hist.clear()
            gamma = 1.0
            d = -g
            dg = -float(np.dot(g, g))

        alpha0 = 1.0 if s_hist else min(1.0, 1.0 / np.sum(np.abs(g)))
        ls = _wolfe_search(fun, x, f, g, d, dg, alpha0, cfg)
        n_evals += ls.n_evals
        if not ls.ok and s_hist:
            # retry once along steepest descent with cleared memory
            s_hist.clear(); y_hist.clear(); rho_hist.clear()
            gamma = 1.0
            d = -g
            dg = -float(np.dot(g, g))
            ls = _wolfe_search(fun, x, f, g, d, dg, min(1.0, 1.0 / np.sum(np.abs(g))), cfg)
            n_evals += ls.n_evals
        if not ls.ok:
            return MinimizeResult(x, f, it - 1, TerminationReason.LINE_SEARCH_FAILURE, n_evals)

        s = ls.x - x
        y = ls.g - g
        sy = float(np.dot(s, y))
        if sy > 1e-10 * float(np.linalg.norm(s)) * float(np.linalg.norm(y)):
            if len(s_hist) == cfg.memory:
                s_hist.pop(0); y_hist.pop(0); rho_hist.pop(0)
            s_hist.append(s); y_hist.append(y); rho_hist.append(1.0 / sy)
            gamma = sy / float(np.dot(y, y))

        assert ls.f <= f, "line search accepted an ascent step"
        x, f, g = ls.x, ls.f, ls.g

        if f < cfg.energy_tol:
            return MinimizeResult(x, f, it, TerminationReason.OBJECTIVE_BELOW_TOL, n_evals)
        if np.max(np.abs(g)) < cfg.grad_tol:
            return MinimizeResult(x, f, it, TerminationReason.GRAD_BELOW_TOL, n_evals)

    return MinimizeResult(x, f, cfg.max_iters, TerminationReason.MAX_ITERS, n_evals)


def _two_loop_direction(g, s_hist, y_hist, rho_hist, gamma) -> np.ndarray:
    q = g.copy()
    k = len(s_hist)
    alphas = [0.0] * k
    for i in range(k - 1, -1, -1):
        alphas[i] = rho_hist[i] * float(np.dot(s_hist[i], q))
        q -= alphas[i] * y_hist[i]
    q *= gamma
    for i in range(k):
        beta = rho_hist[i] * float(np.dot(y_hist[i], q))
        q += (alphas[i] - beta) * s_hist[i]
    return -q


@dataclass
class _LineSearchResult:
    ok: bool
    x: np.ndarray = None
    f: float = 0.0
    g: np.ndarray = None
    n_evals: int = 0


_MAX_BRACKET = 30
_MAX_ZOOM = 40


def _wolfe_search(fun, x0, f0, g0, d, dg0, alpha0, cfg) -> _LineSearchResult:
    """Strong-Wolfe search along d (dg0 = g0.d < 0), bracket + zoom with
    cubic interpolation.  Falls back to the best Armijo point when no
    strong-Wolfe point is located before the interval underflows."""
    c1, c2 = cfg.sufficient_decrease, cfg.curvature
    evals = 0

    def phi(alpha):
        nonlocal evals
        xt = x0 + alpha * d
        ft, gt = fun(xt)
        evals += 1
        return xt, ft, np.asarray(gt, dtype=float)

    def result(xt, ft, gt):
        return _LineSearchResult(True, xt, ft, gt, evals)

    best = None  # best Armijo-satisfying point seen: (alpha, x, f, g)

    def note_armijo(alpha, xt, ft, gt):
        nonlocal best
        if ft <= f0 + c1 * alpha * dg0 and (best is None or ft < best[1]):
            best = (xt, ft, gt)

    a_prev, f_prev, dg_prev = 0.0, f0, dg0
    a = alpha0
    bracket = None
    for i in range(_MAX_BRACKET):
        xt, ft, gt = phi(a)
        if not (math.isfinite(ft) and np.all(np.isfinite(gt))):
            return _LineSearchResult(False, n_evals=evals)  # caller reports failure
        dgt = float(np.dot(gt, d))
        note_armijo(a, xt, ft, gt)
        if ft > f0 + c1 * a * dg0 or (i > 0 and ft >= f_prev):
            bracket = (a_prev, f_prev, dg_prev, a, ft, dgt)
            break
        if abs(dgt) <= -c2 * dg0:
            return result(xt, ft, gt)
        if dgt >= 0.0:
            bracket = (a, ft, dgt, a_prev, f_prev, dg_prev)
            break
        a_prev, f_prev, dg_prev = a, ft, dgt
        a = 2.0 * a
    else:
        # never bracketed: monotone decrease the whole way out
        if best is not None:
            return result(*best)
        return _LineSearchResult(False, n_evals=evals)

    lo, f_lo, dg_lo, hi, f_hi, dg_hi = bracket
    for _ in range(_MAX_ZOOM):
        if abs(hi - lo) * float(np.max(np.abs(d))) <= 1e-16 * (1.0 + float(np.max(np.abs(x0)))):
            break
        a = _cubic_step(lo, f_lo, dg_lo, hi, f_hi, dg_hi)
        xt, ft, gt = phi(a)
        if not (math.isfinite(ft) and np.all(np.isfinite(gt))):
            return _LineSearchResult(False, n_evals=evals)
        dgt = float(np.dot(gt, d))
        note_armijo(a, xt, ft, gt)
        if ft > f0 + c1 * a * dg0 or ft >= f_lo:
            hi, f_hi, dg_hi = a, ft, dgt
        else:
            if abs(dgt) <= -c2 * dg0:
                return result(xt, ft, gt)
            if dgt * (hi - lo) >= 0.0:
                hi, f_hi, dg_hi = lo, f_lo, dg_lo
            lo, f_lo, dg_lo = a, ft, dgt
    if best is not None:
        return result(*best)
    return _LineSearchResult(False, n_evals=evals)


def _cubic_step(a, fa, dga, b, fb, dgb) -> float:
    """Minimizer of the cubic interpolant on [a, b], safeguarded to the
    interior fifth of the interval; falls back to bisection."""
    lo, hi = (a, b) if a < b else (b, a)
    width = hi - lo
    d1 = dga + dgb - 3.0 * (fa - fb) / (a - b)
    disc = d1 * d1 - dga * dgb
    if disc >= 0.0 and a != b:
        d2 = math.copysign(math.sqrt(disc), b - a)
        denom = dgb - dga + 2.0 * d2
        if denom != 0.0:
            t = b - (b - a) * (dgb + d2 - d1) / denom
            if lo + 0.1 * width <= t <= hi - 0.1 * width:
                return t
    return 0.5 * (lo + hi)
