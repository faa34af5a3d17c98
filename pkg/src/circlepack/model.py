"""Quasi-physical penalty model for circles in a square container.

Circles are treated as elastic solids: any circle/circle or
circle/border overlap stores elastic energy proportional to the squared
overlap depth.  The total energy is zero exactly when the pattern is
feasible, which is what the whole search pipeline minimizes.

Container coordinates are centered: the square spans
``[-L/2, L/2] x [-L/2, L/2]``.  Circle indices are 1-based in every
public signature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .instance import Instance


@dataclass
class Pattern:
    """Candidate solution: all circle centers plus the container size."""

    instance: Instance
    L: float
    centers: np.ndarray  # shape (n, 2)

    def __post_init__(self):
        self.centers = np.asarray(self.centers, dtype=float)
        if self.centers.shape != (self.instance.n, 2):
            raise ValueError(
                f"centers must have shape ({self.instance.n}, 2), got {self.centers.shape}"
            )
        if not (self.L > 0 and math.isfinite(self.L)):
            raise ValueError(f"container size must be positive and finite, got {self.L}")
        if not np.all(np.isfinite(self.centers)):
            raise ValueError("all coordinates must be finite")

    @property
    def n(self) -> int:
        return self.instance.n

    def as_vector(self) -> np.ndarray:
        return self.centers.reshape(-1).copy()

    def with_centers(self, centers: np.ndarray) -> "Pattern":
        return Pattern(self.instance, self.L, np.array(centers, dtype=float))

    def with_container(self, L: float) -> "Pattern":
        return Pattern(self.instance, L, self.centers.copy())

    def copy(self) -> "Pattern":
        return Pattern(self.instance, self.L, self.centers.copy())


@dataclass(frozen=True)
class EnergyReport:
    """Energy decomposition for one pattern."""

    U_e: float
    border_depths: np.ndarray   # (n, 2): vertical-border and horizontal-border depth
    pair_depth_sum: np.ndarray  # (n,): sum over j of D_ij^2
    pain: np.ndarray            # (n,): per-circle pain degree


@dataclass
class PartitionSets:
    """Radius-ordered quartile groups of circle indices (1-based), with
    the per-circle tabu counters used by the basin-hopping moves."""

    s1: tuple[int, ...]
    s2: tuple[int, ...]
    s3: tuple[int, ...]
    s4: tuple[int, ...]
    tabu: dict[int, int] = field(default_factory=dict)

    @property
    def sets(self) -> tuple[tuple[int, ...], ...]:
        return (self.s1, self.s2, self.s3, self.s4)

    @property
    def n(self) -> int:
        return self.s4[-1]


@lru_cache(maxsize=None)
def _radii_cache(instance: Instance) -> np.ndarray:
    r = np.asarray(instance.radii, dtype=float)
    r.setflags(write=False)
    return r


def radii_array(instance: Instance) -> np.ndarray:
    return _radii_cache(instance)


def border_depths(center: tuple[float, float], radius: float, L: float) -> tuple[float, float]:
    """Overlap depths of one circle with the vertical and horizontal borders."""
    x, y = center
    half = 0.5 * L
    return max(radius + abs(x) - half, 0.0), max(radius + abs(y) - half, 0.0)


def pair_depth(
    center1: tuple[float, float], radius1: float,
    center2: tuple[float, float], radius2: float,
) -> float:
    """Embedding depth of two circles (0 when separated or tangent)."""
    d = math.hypot(center1[0] - center2[0], center1[1] - center2[1])
    return max(radius1 + radius2 - d, 0.0)


def energy(pattern: Pattern) -> EnergyReport:
    """Total elastic energy with its per-circle decomposition."""
    r = radii_array(pattern.instance)
    U, d_v, d_h, pair_sq = kernels.energy_terms(pattern.centers.reshape(-1), r, pattern.L)
    pain = (d_v * d_v + d_h * d_h + pair_sq) / (r * r)
    border = np.column_stack([d_v, d_h])
    for arr in (border, pair_sq, pain):
        arr.setflags(write=False)
    return EnergyReport(U_e=U, border_depths=border, pair_depth_sum=pair_sq, pain=pain)


def energy_value(pattern: Pattern) -> float:
    r = radii_array(pattern.instance)
    return kernels.energy_terms(pattern.centers.reshape(-1), r, pattern.L)[0]


def energy_gradient(pattern: Pattern) -> np.ndarray:
    """Analytic gradient of the energy, as a flat (2n,) vector ordered
    ``x_1, y_1, ..., x_n, y_n``."""
    return energy_value_and_grad(pattern)[1]


def energy_value_and_grad(pattern: Pattern) -> tuple[float, np.ndarray, bool]:
    """Energy, gradient, and a flag marking overlapping pairs whose
    centers coincide exactly (their push direction is substituted by a
    deterministic unit vector)."""
    r = radii_array(pattern.instance)
    U, grad, n_degen = kernels.energy_and_grad(pattern.centers.reshape(-1), r, pattern.L)
    return U, grad, n_degen > 0


def pain_degrees(pattern: Pattern) -> np.ndarray:
    """Pain degree of every circle (0-based array; entry i-1 is circle i)."""
    return energy(pattern).pain


def pain_degree(pattern: Pattern, i: int) -> float:
    """Pain degree of circle i (1-based): squared overlap normalized by r_i^2."""
    if not 1 <= i <= pattern.n:
        raise ValueError(f"circle index {i} out of range 1..{pattern.n}")
    return float(pain_degrees(pattern)[i - 1])


def worst_overlap(pattern: Pattern) -> tuple[float, str, tuple[int, ...]]:
    """Largest overlap depth in the pattern.

    Returns ``(depth, kind, ids)`` with kind one of ``"border-v"``,
    ``"border-h"``, ``"pair"`` and ids the 1-based circles involved.
    """
    r = radii_array(pattern.instance)
    x = pattern.centers[:, 0]
    y = pattern.centers[:, 1]
    half = 0.5 * pattern.L
    d_v = r + np.abs(x) - half
    d_h = r + np.abs(y) - half

    worst = 0.0
    kind = "none"
    ids: tuple[int, ...] = ()
    iv = int(np.argmax(d_v))
    if d_v[iv] > worst:
        worst, kind, ids = float(d_v[iv]), "border-v", (iv + 1,)
    ih = int(np.argmax(d_h))
    if d_h[ih] > worst:
        worst, kind, ids = float(d_h[ih]), "border-h", (ih + 1,)

    if pattern.n > 1:
        dx = x[:, None] - x[None, :]
        dy = y[:, None] - y[None, :]
        depth = r[:, None] + r[None, :] - np.sqrt(dx * dx + dy * dy)
        np.fill_diagonal(depth, -np.inf)
        flat = int(np.argmax(depth))
        a, b = divmod(flat, pattern.n)
        if depth[a, b] > worst:
            worst, kind, ids = float(depth[a, b]), "pair", (min(a, b) + 1, max(a, b) + 1)
    return max(worst, 0.0), kind, ids


def is_feasible(pattern: Pattern, tol: float = 1e-9) -> bool:
    """True iff every border and pair overlap depth is at most ``tol``."""
    if tol < 0:
        raise ValueError("tol must be >= 0")
    return worst_overlap(pattern)[0] <= tol


def partition_sets(n: int) -> PartitionSets:
    """Quartile partition of circles 1..n by radius rank: S1 holds the
    smallest quarter, S4 the largest."""
    if n < 4:
        raise ValueError(f"partition requires n >= 4, got {n}")
    q1 = n // 4
    q2 = n // 2
    q3 = (3 * n) // 4
    return PartitionSets(
        s1=tuple(range(1, q1 + 1)),
        s2=tuple(range(q1 + 1, q2 + 1)),
        s3=tuple(range(q2 + 1, q3 + 1)),
        s4=tuple(range(q3 + 1, n + 1)),
    )
