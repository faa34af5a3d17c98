"""Maximal unoccupied rectangles ("action spaces") over the square
approximations of placed circles.

Each circle of radius r is approximated by a concentric square of side
(1 + 1/sqrt(2)) * r.  An action space is an axis-aligned rectangle inside
the container whose interior meets no approximating square and that
cannot be extended in any direction.  Insertion works by splitting every
intersected space into its four one-sided remainders and pruning
rectangles contained in another; the result is exactly the set of
maximal empty rectangles (checked against a brute-force oracle in the
test suite).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .model import Pattern, radii_array

SQUARE_SIDE_FACTOR = 1.0 + 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class Square:
    """Axis-aligned square approximating one circle."""

    cx: float
    cy: float
    side: float

    def __post_init__(self):
        if not self.side > 0:
            raise ValueError("square side must be positive")

    @property
    def lo(self) -> tuple[float, float]:
        h = 0.5 * self.side
        return (self.cx - h, self.cy - h)

    @property
    def hi(self) -> tuple[float, float]:
        h = 0.5 * self.side
        return (self.cx + h, self.cy + h)


@dataclass(frozen=True)
class ActionSpace:
    """Maximal empty rectangle, stored by its corner coordinates."""

    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self):
        if not (self.x1 < self.x2 and self.y1 < self.y2):
            raise ValueError("action space corners must satisfy lo < hi")

    @property
    def lo(self) -> tuple[float, float]:
        return (self.x1, self.y1)

    @property
    def hi(self) -> tuple[float, float]:
        return (self.x2, self.y2)

    @property
    def width(self) -> float:
        return self.x2 - self.x1

    @property
    def height(self) -> float:
        return self.y2 - self.y1

    @property
    def min_side(self) -> float:
        return min(self.width, self.height)

    @property
    def semi_perimeter(self) -> float:
        return self.width + self.height

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return (0.5 * (self.x1 + self.x2), 0.5 * (self.y1 + self.y2))


@dataclass(frozen=True)
class SpaceLists:
    """Top-10 action spaces under the two size orders: l1 by shortest
    side, l2 by semi-perimeter, both non-ascending."""

    l1: tuple[ActionSpace, ...]
    l2: tuple[ActionSpace, ...]

    LIST_CAP = 10


def circle_to_square(radius: float, center: tuple[float, float]) -> Square:
    """Concentric square stand-in for a circle: side (1 + 1/sqrt(2)) * r."""
    if not radius > 0:
        raise ValueError("radius must be positive")
    return Square(cx=center[0], cy=center[1], side=SQUARE_SIDE_FACTOR * radius)


def pattern_squares(pattern: Pattern, exclude: Sequence[int] = ()) -> list[Square]:
    """Square approximations of a pattern's circles (1-based ``exclude``)."""
    skip = set(exclude)
    r = radii_array(pattern.instance)
    return [
        circle_to_square(float(r[i]), (float(pattern.centers[i, 0]), float(pattern.centers[i, 1])))
        for i in range(pattern.n)
        if i + 1 not in skip
    ]


def compute_action_spaces(squares: Sequence[Square], container_side: float) -> list[ActionSpace]:
    """All maximal empty rectangles w.r.t. the squares, clipped to the
    container.  Squares fully outside are ignored; partially outside
    ones are clipped first.  Result is sorted by (x1, y1, x2, y2)."""
    if not container_side > 0:
        raise ValueError("container side must be positive")
    half = 0.5 * container_side
    spaces = np.array([[-half, -half, half, half]])
    for sq in squares:
        lo_x = max(sq.lo[0], -half)
        lo_y = max(sq.lo[1], -half)
        hi_x = min(sq.hi[0], half)
        hi_y = min(sq.hi[1], half)
        if not (lo_x < hi_x and lo_y < hi_y):
            continue  # no interior inside the container
        hit = (
            (spaces[:, 0] < hi_x)
            & (lo_x < spaces[:, 2])
            & (spaces[:, 1] < hi_y)
            & (lo_y < spaces[:, 3])
        )
        if not hit.any():
            continue
        pieces = []
        for sx1, sy1, sx2, sy2 in spaces[hit]:
            if lo_x > sx1:
                pieces.append((sx1, sy1, lo_x, sy2))
            if hi_x < sx2:
                pieces.append((hi_x, sy1, sx2, sy2))
            if lo_y > sy1:
                pieces.append((sx1, sy1, sx2, lo_y))
            if hi_y < sy2:
                pieces.append((sx1, hi_y, sx2, sy2))
        survivors = spaces[~hit]
        if pieces:
            spaces = np.vstack([survivors, np.array(pieces)])
        else:
            spaces = survivors
        spaces = _prune_contained(spaces)
    return [ActionSpace(*map(float, row)) for row in spaces]


def _prune_contained(rects: np.ndarray) -> np.ndarray:
    """Drop rectangles contained in another (duplicates collapse first)."""
    if rects.shape[0] <= 1:
        return rects
    rects = np.unique(rects, axis=0)
    k = rects.shape[0]
    inside = (
        (rects[:, None, 0] >= rects[None, :, 0])
        & (rects[:, None, 1] >= rects[None, :, 1])
        & (rects[:, None, 2] <= rects[None, :, 2])
        & (rects[:, None, 3] <= rects[None, :, 3])
    )
    np.fill_diagonal(inside, False)
    return rects[~inside.any(axis=1)]


def pattern_action_spaces(pattern: Pattern, exclude: Sequence[int] = ()) -> list[ActionSpace]:
    return compute_action_spaces(pattern_squares(pattern, exclude), pattern.L)


def rank_spaces(spaces: Sequence[ActionSpace]) -> SpaceLists:
    """The two top-10 lists; ties resolve by larger semi-perimeter then
    lower-left corner so rankings are reproducible."""
    cap = SpaceLists.LIST_CAP
    l1 = sorted(spaces, key=lambda s: (-s.min_side, -s.semi_perimeter, s.x1, s.y1))[:cap]
    l2 = sorted(spaces, key=lambda s: (-s.semi_perimeter, s.x1, s.y1))[:cap]
    return SpaceLists(l1=tuple(l1), l2=tuple(l2))


def is_narrow(space: ActionSpace) -> bool:
    """Narrow means the long side is at least double the short side."""
    return space.height <= 0.5 * space.width or space.width <= 0.5 * space.height


def split_narrow(space: ActionSpace) -> tuple[ActionSpace, ActionSpace]:
    """Halve a narrow space at the midpoint of its long side.  The first
    half is the one with the lexicographically smaller lower-left corner."""
    if not is_narrow(space):
        raise ValueError(f"space {space} is not narrow")
    if space.width > space.height:
        mid = 0.5 * (space.x1 + space.x2)
        return (
            ActionSpace(space.x1, space.y1, mid, space.y2),
            ActionSpace(mid, space.y1, space.x2, space.y2),
        )
    mid = 0.5 * (space.y1 + space.y2)
    return (
        ActionSpace(space.x1, space.y1, space.x2, mid),
        ActionSpace(space.x1, mid, space.x2, space.y2),
    )


def best_matching(spaces: Sequence[ActionSpace], radius: float) -> Optional[ActionSpace]:
    """Space whose short side is closest to the circle's diameter; ties
    prefer larger area, then position order.  None when no spaces."""
    if not radius > 0:
        raise ValueError("radius must be positive")
    if not spaces:
        return None
    diameter = 2.0 * radius
    return min(spaces, key=lambda s: (abs(s.min_side - diameter), -s.area, s.x1, s.y1))
