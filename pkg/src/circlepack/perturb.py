"""Perturbation operator applied when basin hopping stalls.

The two large-circle groups keep their geometry apart from pairwise
swaps down the pain ranking; the two small-circle groups are lifted out
and re-seeded one by one into the best-matching unoccupied rectangle,
recomputed after every placement.  A final continuous minimization
settles the rebuilt pattern.
"""

from __future__ import annotations

import logging
from typing import Optional

from . import kernels
from .actionspace import best_matching, compute_action_spaces, circle_to_square
from .model import PartitionSets, Pattern, pain_degrees, radii_array
from .optim import MinimizeConfig

log = logging.getLogger(__name__)


def pain_ranking(indices, pains) -> list[int]:
    """Indices sorted by pain non-ascending, ties by ascending index."""
    return sorted(indices, key=lambda i: (-pains[i - 1], i))


def perturb(
    pattern: Pattern,
    sets: PartitionSets,
    minimize_cfg: Optional[MinimizeConfig] = None,
) -> Pattern:
    """Rebuild a stuck pattern and return its minimized successor.

    Steps: rank everything by pain; swap consecutive entries of the
    pain-ranked S3+S4 list pairwise; re-place each S1+S2 circle (most
    pained first) at the center of its best-matching action space,
    refreshing the spaces after each placement; then run the packing
    L-BFGS.  A circle with no available space lands on the container
    center.
    """
    pains = pain_degrees(pattern)
    radii = radii_array(pattern.instance)
    out = pattern.copy()

    # pairwise swaps down the pain ranking of the large groups
    big = pain_ranking(list(sets.s3) + list(sets.s4), pains)
    for k in range(0, len(big) - 1, 2):
        a, b = big[k], big[k + 1]
        out.centers[[a - 1, b - 1]] = out.centers[[b - 1, a - 1]]

    # re-seed the small groups, most pained first
    small = pain_ranking(list(sets.s1) + list(sets.s2), pains)
    placed_squares = [
        circle_to_square(float(radii[i - 1]), (float(out.centers[i - 1, 0]), float(out.centers[i - 1, 1])))
        for i in big
    ]
    for i in small:
        spaces = compute_action_spaces(placed_squares, out.L)
        target = best_matching(spaces, float(radii[i - 1]))
        if target is None:
            log.debug("no action space left for circle %d; using container center", i)
            center = (0.0, 0.0)
        else:
            center = target.center
        out.centers[i - 1] = center
        placed_squares.append(circle_to_square(float(radii[i - 1]), center))

    minimized, _ = kernels.minimize_pattern(out, minimize_cfg)
    return minimized
