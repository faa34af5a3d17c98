# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: penalty energy, analytic gradient, and the
packing-specialised L-BFGS loop (all C-level, GIL released).

Mirrors ``circlepack._core_py`` function-for-function; the algorithm and
all constants match the reference implementation in
:mod:`circlepack.optim`.
"""

import numpy as np

from libc.math cimport cos, fabs, fmod, isfinite, sin, sqrt

BACKEND = "cython"

cdef double DEG = 0.017453292519943295  # pi / 180
cdef int MAX_BRACKET = 30
cdef int MAX_ZOOM = 40


cdef inline double _sign(double v) noexcept nogil:
    if v > 0.0:
        return 1.0
    elif v < 0.0:
        return -1.0
    return 0.0


cdef double _energy_only(int n, const double* xy, const double* r, double L) noexcept nogil:
    cdef int i, j
    cdef double half = 0.5 * L
    cdef double U = 0.0
    cdef double dv, dh, dx, dy, dist, depth
    for i in range(n):
        dv = r[i] + fabs(xy[2 * i]) - half
        if dv > 0.0:
            U += dv * dv
        dh = r[i] + fabs(xy[2 * i + 1]) - half
        if dh > 0.0:
            U += dh * dh
    for i in range(n - 1):
        for j in range(i + 1, n):
            dx = xy[2 * i] - xy[2 * j]
            dy = xy[2 * i + 1] - xy[2 * j + 1]
            dist = sqrt(dx * dx + dy * dy)
            depth = r[i] + r[j] - dist
            if depth > 0.0:
                U += depth * depth
    return U


cdef double _energy_grad(int n, const double* xy, const double* r, double L,
                         double* grad, int* degenerate) noexcept nogil:
    """Energy plus gradient; counts overlapping pairs with coincident
    centers (resolved by a deterministic unit direction)."""
    cdef int i, j
    cdef double half = 0.5 * L
    cdef double U = 0.0
    cdef double dv, dh, dx, dy, dist, depth, coef, ang, ux, uy, push
    for i in range(2 * n):
        grad[i] = 0.0
    for i in range(n):
        dv = r[i] + fabs(xy[2 * i]) - half
        if dv > 0.0:
            U += dv * dv
            grad[2 * i] += 2.0 * dv * _sign(xy[2 * i])
        dh = r[i] + fabs(xy[2 * i + 1]) - half
        if dh > 0.0:
            U += dh * dh
            grad[2 * i + 1] += 2.0 * dh * _sign(xy[2 * i + 1])
    for i in range(n - 1):
        for j in range(i + 1, n):
            dx = xy[2 * i] - xy[2 * j]
            dy = xy[2 * i + 1] - xy[2 * j + 1]
            dist = sqrt(dx * dx + dy * dy)
            depth = r[i] + r[j] - dist
            if depth > 0.0:
                U += depth * depth
                if dist > 0.0:
                    coef = 2.0 * depth / dist
                    grad[2 * i] -= coef * dx
                    grad[2 * i + 1] -= coef * dy
                    grad[2 * j] += coef * dx
                    grad[2 * j + 1] += coef * dy
                else:
                    ang = DEG * fmod(31.0 * (i + 1) + 17.0 * (j + 1), 360.0)
                    ux = cos(ang)
                    uy = sin(ang)
                    push = 2.0 * depth
                    grad[2 * i] -= push * ux
                    grad[2 * i + 1] -= push * uy
                    grad[2 * j] += push * ux
                    grad[2 * j + 1] += push * uy
                    degenerate[0] += 1
    return U


def energy_terms(const double[::1] xy, const double[::1] radii, double L):
    """Total energy plus its per-circle pieces; see the fallback twin."""
    cdef int n = radii.shape[0]
    d_v = np.zeros(n)
    d_h = np.zeros(n)
    pair_sq = np.zeros(n)
    cdef double[::1] dv_mv = d_v
    cdef double[::1] dh_mv = d_h
    cdef double[::1] ps_mv = pair_sq
    cdef double U = 0.0
    cdef double half = 0.5 * L
    cdef int i, j
    cdef double t, dx, dy, dist, depth
    with nogil:
        for i in range(n):
            t = radii[i] + fabs(xy[2 * i]) - half
            if t > 0.0:
                dv_mv[i] = t
                U += t * t
            t = radii[i] + fabs(xy[2 * i + 1]) - half
            if t > 0.0:
                dh_mv[i] = t
                U += t * t
        for i in range(n - 1):
            for j in range(i + 1, n):
                dx = xy[2 * i] - xy[2 * j]
                dy = xy[2 * i + 1] - xy[2 * j + 1]
                dist = sqrt(dx * dx + dy * dy)
                depth = radii[i] + radii[j] - dist
                if depth > 0.0:
                    U += depth * depth
                    ps_mv[i] += depth * depth
                    ps_mv[j] += depth * depth
    return U, d_v, d_h, pair_sq


def energy_and_grad(const double[::1] xy, const double[::1] radii, double L):
    """Energy, analytic gradient, and degenerate coincident-pair count."""
    cdef int n = radii.shape[0]
    grad = np.empty(2 * n)
    cdef double[::1] g_mv = grad
    cdef int degenerate = 0
    cdef double U
    with nogil:
        U = _energy_grad(n, &xy[0], &radii[0], L, &g_mv[0], &degenerate)
    return U, grad, degenerate


# ---------------------------------------------------------------------------
# L-BFGS (two-loop recursion, strong-Wolfe line search with cubic zoom)

cdef inline double _dot(int m, const double* a, const double* b) noexcept nogil:
    cdef int i
    cdef double s = 0.0
    for i in range(m):
        s += a[i] * b[i]
    return s


cdef inline double _max_abs(int m, const double* a) noexcept nogil:
    cdef int i
    cdef double s = 0.0
    for i in range(m):
        if fabs(a[i]) > s:
            s = fabs(a[i])
    return s


cdef inline double _sum_abs(int m, const double* a) noexcept nogil:
    cdef int i
    cdef double s = 0.0
    for i in range(m):
        s += fabs(a[i])
    return s


cdef inline void _copy(int m, const double* src, double* dst) noexcept nogil:
    cdef int i
    for i in range(m):
        dst[i] = src[i]


cdef double _cubic_step(double a, double fa, double dga,
                        double b, double fb, double dgb) noexcept nogil:
    cdef double lo = a if a < b else b
    cdef double hi = b if a < b else a
    cdef double width = hi - lo
    cdef double d1, disc, d2, denom, t
    d1 = dga + dgb - 3.0 * (fa - fb) / (a - b)
    disc = d1 * d1 - dga * dgb
    if disc >= 0.0 and a != b:
        d2 = sqrt(disc)
        if b - a < 0.0:
            d2 = -d2
        denom = dgb - dga + 2.0 * d2
        if denom != 0.0:
            t = b - (b - a) * (dgb + d2 - d1) / denom
            if lo + 0.1 * width <= t <= hi - 0.1 * width:
                return t
    return 0.5 * (lo + hi)


cdef int _wolfe(int n, const double* r, double L,
                const double* x0, double f0, const double* g0,
                const double* d, double dg0, double alpha0,
                double c1, double c2,
                double* xt, double* gt, double* xb, double* gb,
                double* out_f, int* evals, int* degenerate) noexcept nogil:
    """Strong-Wolfe search along d.  On success writes the accepted point
    into (xt, gt, out_f) and returns 1; returns 0 on failure and -1 when
    a non-finite value was met."""
    cdef int dim = 2 * n
    cdef int i, it
    cdef double a_prev = 0.0, f_prev = f0, dg_prev = dg0
    cdef double a = alpha0
    cdef double ft, dgt
    cdef double best_f = 0.0
    cdef int have_best = 0
    cdef double lo = 0.0, f_lo = 0.0, dg_lo = 0.0
    cdef double hi = 0.0, f_hi = 0.0, dg_hi = 0.0
    cdef int bracketed = 0
    cdef double d_scale = _max_abs(dim, d)
    cdef double x_scale = 1.0 + _max_abs(dim, x0)

    for it in range(MAX_BRACKET):
        for i in range(dim):
            xt[i] = x0[i] + a * d[i]
        ft = _energy_grad(n, xt, r, L, gt, degenerate)
        evals[0] += 1
        if not isfinite(ft):
            return -1
        dgt = _dot(dim, gt, d)
        if not isfinite(dgt):
            return -1
        if ft <= f0 + c1 * a * dg0 and (have_best == 0 or ft < best_f):
            best_f = ft
            _copy(dim, xt, xb)
            _copy(dim, gt, gb)
            have_best = 1
        if ft > f0 + c1 * a * dg0 or (it > 0 and ft >= f_prev):
            lo = a_prev; f_lo = f_prev; dg_lo = dg_prev
            hi = a; f_hi = ft; dg_hi = dgt
            bracketed = 1
            break
        if fabs(dgt) <= -c2 * dg0:
            out_f[0] = ft
            return 1
        if dgt >= 0.0:
            lo = a; f_lo = ft; dg_lo = dgt
            hi = a_prev; f_hi = f_prev; dg_hi = dg_prev
            bracketed = 1
            break
        a_prev = a; f_prev = ft; dg_prev = dgt
        a = 2.0 * a

    if not bracketed:
        if have_best:
            _copy(dim, xb, xt)
            _copy(dim, gb, gt)
            out_f[0] = best_f
            return 1
        return 0

    for it in range(MAX_ZOOM):
        if fabs(hi - lo) * d_scale <= 1e-16 * x_scale:
            break
        a = _cubic_step(lo, f_lo, dg_lo, hi, f_hi, dg_hi)
        for i in range(dim):
            xt[i] = x0[i] + a * d[i]
        ft = _energy_grad(n, xt, r, L, gt, degenerate)
        evals[0] += 1
        if not isfinite(ft):
            return -1
        dgt = _dot(dim, gt, d)
        if not isfinite(dgt):
            return -1
        if ft <= f0 + c1 * a * dg0 and (have_best == 0 or ft < best_f):
            best_f = ft
            _copy(dim, xt, xb)
            _copy(dim, gt, gb)
            have_best = 1
        if ft > f0 + c1 * a * dg0 or ft >= f_lo:
            hi = a; f_hi = ft; dg_hi = dgt
        else:
            if fabs(dgt) <= -c2 * dg0:
                out_f[0] = ft
                return 1
            if dgt * (hi - lo) >= 0.0:
                hi = lo; f_hi = f_lo; dg_hi = dg_lo
            lo = a; f_lo = ft; dg_lo = dgt

    if have_best:
        _copy(dim, xb, xt)
        _copy(dim, gb, gt)
        out_f[0] = best_f
        return 1
    return 0


cdef int _lbfgs(int n, double* x, const double* r, double L,
                int memory, int max_iters,
                double grad_tol, double f_tol, double c1, double c2,
                double* g, double* d, double* xt, double* gt,
                double* xb, double* gb,
                double* S, double* Y, double* rho, double* alphas,
                double* out_f, int* out_iters, int* out_evals,
                int* degenerate) noexcept nogil:
    """Reason codes: 0 objective-below-tol, 1 grad-below-tol, 2 max-iters,
    3 line-search-failure, 4 non-finite start (wrapper raises)."""
    cdef int dim = 2 * n
    cdef int i, t, idx, it
    cdef double f, ft, dg, sy, ss, yy, sv, yv, gamma, beta, a0
    cdef int hist_len = 0, hist_start = 0
    cdef int ls

    out_iters[0] = 0
    f = _energy_grad(n, x, r, L, g, degenerate)
    out_evals[0] += 1
    if not isfinite(f):
        return 4
    out_f[0] = f
    if f < f_tol:
        return 0
    if _max_abs(dim, g) < grad_tol:
        return 1

    gamma = 1.0
    for it in range(1, max_iters + 1):
        # two-loop recursion into d (uses gt as scratch q)
        _copy(dim, g, gt)
        for t in range(hist_len - 1, -1, -1):
            idx = (hist_start + t) % memory
            alphas[t] = rho[idx] * _dot(dim, &S[idx * dim], gt)
            for i in range(dim):
                gt[i] -= alphas[t] * Y[idx * dim + i]
        for i in range(dim):
            gt[i] *= gamma
        for t in range(hist_len):
            idx = (hist_start + t) % memory
            beta = rho[idx] * _dot(dim, &Y[idx * dim], gt)
            for i in range(dim):
                gt[i] += (alphas[t] - beta) * S[idx * dim + i]
        for i in range(dim):
            d[i] = -gt[i]

        dg = _dot(dim, d, g)
        if dg >= 0.0:
            hist_len = 0; hist_start = 0
            gamma = 1.0
            for i in range(dim):
                d[i] = -g[i]
            dg = -_dot(dim, g, g)

        if hist_len > 0:
            a0 = 1.0
        else:
            a0 = 1.0 / _sum_abs(dim, g)
            if a0 > 1.0:
                a0 = 1.0
        ls = _wolfe(n, r, L, x, f, g, d, dg, a0, c1, c2,
                    xt, gt, xb, gb, &ft, out_evals, degenerate)
        if ls != 1 and hist_len > 0:
            hist_len = 0; hist_start = 0
            gamma = 1.0
            for i in range(dim):
                d[i] = -g[i]
            dg = -_dot(dim, g, g)
            a0 = 1.0 / _sum_abs(dim, g)
            if a0 > 1.0:
                a0 = 1.0
            ls = _wolfe(n, r, L, x, f, g, d, dg, a0, c1, c2,
                        xt, gt, xb, gb, &ft, out_evals, degenerate)
        if ls != 1:
            out_iters[0] = it - 1
            out_f[0] = f
            return 3

        # curvature update: store (s, y) only when s.y is safely positive
        sy = 0.0; ss = 0.0; yy = 0.0
        for i in range(dim):
            sv = xt[i] - x[i]
            yv = gt[i] - g[i]
            sy += sv * yv
            ss += sv * sv
            yy += yv * yv
        if sy > 1e-10 * sqrt(ss) * sqrt(yy):
            if hist_len == memory:
                idx = hist_start
                hist_start = (hist_start + 1) % memory
            else:
                idx = (hist_start + hist_len) % memory
                hist_len += 1
            for i in range(dim):
                S[idx * dim + i] = xt[i] - x[i]
                Y[idx * dim + i] = gt[i] - g[i]
            rho[idx] = 1.0 / sy
            gamma = sy / yy

        _copy(dim, xt, x)
        _copy(dim, gt, g)
        f = ft
        out_iters[0] = it
        out_f[0] = f
        if f < f_tol:
            return 0
        if _max_abs(dim, g) < grad_tol:
            return 1

    out_f[0] = f
    return 2


def lbfgs_pack(xy0, radii, double L,
               int memory=7, int max_iters=5000,
               double grad_tol=1e-10, double f_tol=1e-20,
               double c1=1e-4, double c2=0.9):
    """Minimize the packing energy from ``xy0``; returns
    ``(x, f, iterations, reason_code, n_evals)``."""
    x = np.array(xy0, dtype=np.float64).reshape(-1).copy()
    r = np.ascontiguousarray(radii, dtype=np.float64)
    cdef int n = r.shape[0]
    if x.shape[0] != 2 * n:
        raise ValueError("xy0 must have length 2 * len(radii)")
    if memory < 1:
        raise ValueError("memory must be >= 1")
    if not 0.0 < c1 < c2 < 1.0:
        raise ValueError("need 0 < c1 < c2 < 1")
    cdef int dim = 2 * n
    g = np.empty(dim); d = np.empty(dim)
    xt = np.empty(dim); gt = np.empty(dim)
    xb = np.empty(dim); gb = np.empty(dim)
    S = np.empty(memory * dim); Y = np.empty(memory * dim)
    rho = np.empty(memory); alphas = np.empty(memory)

    cdef double[::1] x_mv = x
    cdef const double[::1] r_mv = r
    cdef double[::1] g_mv = g, d_mv = d, xt_mv = xt, gt_mv = gt, xb_mv = xb, gb_mv = gb
    cdef double[::1] S_mv = S, Y_mv = Y, rho_mv = rho, al_mv = alphas
    cdef double out_f = 0.0
    cdef int out_iters = 0, out_evals = 0, degenerate = 0
    cdef int code
    cdef int mem_c = memory, iters_c = max_iters
    cdef double gtol = grad_tol, ftol = f_tol, cc1 = c1, cc2 = c2, L_c = L

    with nogil:
        code = _lbfgs(n, &x_mv[0], &r_mv[0], L_c, mem_c, iters_c,
                      gtol, ftol, cc1, cc2,
                      &g_mv[0], &d_mv[0], &xt_mv[0], &gt_mv[0],
                      &xb_mv[0], &gb_mv[0],
                      &S_mv[0], &Y_mv[0], &rho_mv[0], &al_mv[0],
                      &out_f, &out_iters, &out_evals, &degenerate)
    if code == 4:
        raise ValueError("objective must be finite at the starting point")
    return x, out_f, out_iters, code, out_evals
