"""Backend selection for the hot numerical kernels.

The compiled extension (``circlepack._core``, Cython) is preferred; the
numpy implementation (``circlepack._core_py``) is the drop-in fallback.
Set ``CIRCLEPACK_BACKEND=python`` (or ``cython``) to force a lane;
``benchmarks/bench_backends.py`` compares the two.
"""

from __future__ import annotations

import dataclasses
import os

import numpy as np

from .optim import MinimizeConfig, MinimizeResult, TerminationReason

_requested = os.environ.get("CIRCLEPACK_BACKEND", "auto").lower()
if _requested not in ("auto", "cython", "python"):
    raise RuntimeError(f"CIRCLEPACK_BACKEND must be auto|cython|python, got {_requested!r}")

if _requested in ("auto", "cython"):
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        if _requested == "cython":
            raise
        from . import _core_py as _impl
else:
    from . import _core_py as _impl

BACKEND: str = _impl.BACKEND

energy_terms = _impl.energy_terms
energy_and_grad = _impl.energy_and_grad
lbfgs_pack = _impl.lbfgs_pack


def minimize_pattern(pattern, cfg: MinimizeConfig | None = None):
    """Run the packing L-BFGS on a Pattern; returns (new_pattern, result)."""
    if cfg is None:
        cfg = MinimizeConfig()
    radii = np.asarray(pattern.instance.radii)
    x, f, iters, reason, n_evals = lbfgs_pack(
        pattern.centers.reshape(-1).copy(),
        radii,
        pattern.L,
        memory=cfg.memory,
        max_iters=cfg.max_iters,
        grad_tol=cfg.grad_tol,
        f_tol=cfg.energy_tol,
        c1=cfg.sufficient_decrease,
        c2=cfg.curvature,
    )
    new_pattern = dataclasses.replace(pattern, centers=np.asarray(x).reshape(-1, 2))
    result = MinimizeResult(
        x=np.asarray(x), f=f, iterations=iters,
        reason=TerminationReason(reason), n_evals=n_evals,
    )
    return new_pattern, result
