"""Basin-hopping move generator.

From a stuck pattern, a batch of up to 43 candidate patterns is built
from six move blocks:

  (a) 24 relocations: each quartile group's most-pained non-tabued
      circle is recentered on the largest, best-matching, and a random
      action space of each of the two ranked lists;
  (b) 3 narrow-space moves pairing the two most-pained circles of S1;
  (c) 3 narrow-space moves pairing the most-pained circles of S1 and S2;
  (d) 5 cross-group swaps of adjacent similar-radius pairs;
  (e) 4 swaps of each group's most-pained circle with its next neighbor;
  (f) 4 uniform random swaps inside each group.

Moves whose resource is missing (no spaces, no narrow space, everything
tabued, group too small) are skipped.  Circles relocated by blocks
(a)-(c) are tabued for ``tenure`` subsequent calls.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .actionspace import ActionSpace, SpaceLists, best_matching, is_narrow, split_narrow
from .model import PartitionSets, Pattern, pain_degrees


class MoveKind(Enum):
    RELOCATE = "relocate"
    NSO_S1 = "nso-s1"
    NSO_S1_S2 = "nso-s1-s2"
    SWAP_SIMILAR_CROSS = "swap-similar-cross"
    SWAP_PAIN_NEXT = "swap-pain-next"
    SWAP_RANDOM_IN_SET = "swap-random-in-set"


@dataclass
class HopBatch:
    """Generated candidate patterns with the move kind behind each one."""

    patterns: list[Pattern]
    kinds: list[MoveKind]
    jammers: tuple[int, ...]  # circles relocated by blocks (a)-(c), now tabued

    def __len__(self) -> int:
        return len(self.patterns)

    @property
    def entries(self) -> list[tuple[Pattern, MoveKind]]:
        return list(zip(self.patterns, self.kinds))

    def count(self, kind: MoveKind) -> int:
        return sum(1 for k in self.kinds if k is kind)


def place_item_in_space(pattern: Pattern, i: int, space: ActionSpace) -> Pattern:
    """New pattern with circle i (1-based) recentered on the space center."""
    out = pattern.copy()
    out.centers[i - 1] = space.center
    return out


def neighbour_space_occupy(pattern: Pattern, i: int, j: int, narrow: ActionSpace) -> Pattern:
    """Split a narrow space and center circles i and j on the two halves
    (i takes the half with the lexicographically smaller corner)."""
    if i == j:
        raise ValueError("neighbour space occupying needs two distinct circles")
    first, second = split_narrow(narrow)
    out = pattern.copy()
    out.centers[i - 1] = first.center
    out.centers[j - 1] = second.center
    return out


def swap_circles(pattern: Pattern, i: int, j: int) -> Pattern:
    """New pattern with the centers of circles i and j exchanged."""
    if i == j:
        raise ValueError("cannot swap a circle with itself")
    out = pattern.copy()
    out.centers[[i - 1, j - 1]] = out.centers[[j - 1, i - 1]]
    return out


def _swap_two_pairs(pattern: Pattern, i: int, j: int, i2: int, j2: int) -> Pattern:
    out = swap_circles(pattern, i, j)
    out.centers[[i2 - 1, j2 - 1]] = out.centers[[j2 - 1, i2 - 1]]
    return out


def _ranked_by_pain(indices: Sequence[int], pains: np.ndarray, tabu: dict[int, int]):
    """Non-tabued indices sorted by pain (desc), index (asc)."""
    avail = [i for i in indices if tabu.get(i, 0) <= 0]
    avail.sort(key=lambda i: (-pains[i - 1], i))
    return avail


def _max_pain(indices: Sequence[int], pains: np.ndarray) -> int:
    return min(indices, key=lambda i: (-pains[i - 1], i))


def _narrow_spaces(lists: SpaceLists) -> list[ActionSpace]:
    """Narrow members of l1 and l2, largest (by semi-perimeter) first."""
    seen: dict[tuple, ActionSpace] = {}
    for sp in list(lists.l1) + list(lists.l2):
        if is_narrow(sp):
            seen.setdefault((sp.x1, sp.y1, sp.x2, sp.y2), sp)
    return sorted(seen.values(), key=lambda s: (-s.semi_perimeter, s.x1, s.y1))


def _adjacent_pairs(group: Sequence[int]) -> list[tuple[int, int]]:
    return [(group[k], group[k + 1]) for k in range(len(group) - 1)]


def generate_neighbors(
    pattern: Pattern,
    sets: PartitionSets,
    lists: SpaceLists,
    rng: np.random.Generator,
    tenure: int = 1,
    random_intraset_swaps: bool = True,
    advance: bool = True,
) -> HopBatch:
    """Build the full move batch for one stuck pattern.

    By default ``sets.tabu`` is advanced in place: existing counters drop
    by one and every relocated jammer is tabued for ``tenure`` further
    steps.  A caller expanding several patterns in one step passes
    ``advance=False`` and calls :func:`advance_tabu` once with the union
    of the batches' jammers.  With ``random_intraset_swaps=False`` block
    (f) is dropped, matching the 39-pattern batch size quoted alongside
    the move listing.  Deterministic given (pattern, sets, lists, rng
    state).
    """
    n = pattern.n
    pains = pain_degrees(pattern)
    radii = np.asarray(pattern.instance.radii)
    narrow = _narrow_spaces(lists)

    patterns: list[Pattern] = []
    kinds: list[MoveKind] = []
    jammers: list[int] = []

    def emit(p: Pattern, kind: MoveKind):
        patterns.append(p)
        kinds.append(kind)

    # (a) relocations of each group's most-pained free circle
    for group in sets.sets:
        ranked = _ranked_by_pain(group, pains, sets.tabu)
        if not ranked:
            continue
        jam = ranked[0]
        jammers.append(jam)
        r_jam = float(radii[jam - 1])
        for lst in (lists.l1, lists.l2):
            if lst:
                emit(place_item_in_space(pattern, jam, lst[0]), MoveKind.RELOCATE)
        for lst in (lists.l1, lists.l2):
            match = best_matching(lst, r_jam)
            if match is not None:
                emit(place_item_in_space(pattern, jam, match), MoveKind.RELOCATE)
        for lst in (lists.l1, lists.l2):
            if lst:
                pick = lst[int(rng.integers(len(lst)))]
                emit(place_item_in_space(pattern, jam, pick), MoveKind.RELOCATE)

    # (b) two most-pained free circles of S1 into a split narrow space
    s1_ranked = _ranked_by_pain(sets.s1, pains, sets.tabu)
    if len(s1_ranked) >= 2 and narrow:
        a, b = s1_ranked[0], s1_ranked[1]
        emit(neighbour_space_occupy(pattern, a, b, narrow[0]), MoveKind.NSO_S1)
        match = best_matching(narrow, float(radii[a - 1]))
        emit(neighbour_space_occupy(pattern, a, b, match), MoveKind.NSO_S1)
        pick = narrow[int(rng.integers(len(narrow)))]
        emit(neighbour_space_occupy(pattern, a, b, pick), MoveKind.NSO_S1)
        jammers.extend((a, b))

    # (c) most-pained free circles of S1 and S2 into a split narrow space
    s2_ranked = _ranked_by_pain(sets.s2, pains, sets.tabu)
    if s1_ranked and s2_ranked and narrow:
        a, c = s1_ranked[0], s2_ranked[0]
        emit(neighbour_space_occupy(pattern, a, c, narrow[0]), MoveKind.NSO_S1_S2)
        match_a = best_matching(narrow, float(radii[a - 1]))
        emit(neighbour_space_occupy(pattern, a, c, match_a), MoveKind.NSO_S1_S2)
        match_c = best_matching(narrow, float(radii[c - 1]))
        emit(neighbour_space_occupy(pattern, a, c, match_c), MoveKind.NSO_S1_S2)
        jammers.extend((a, c))

    # (d) cross-group swaps of similar adjacent pairs
    groups = sets.sets
    for ia, ib in ((0, 1), (1, 2), (2, 3), (0, 2), (1, 3)):
        pairs_a = _adjacent_pairs(groups[ia])
        pairs_b = _adjacent_pairs(groups[ib])
        if not pairs_a or not pairs_b:
            continue
        i, i_next = pairs_a[int(rng.integers(len(pairs_a)))]
        j, j_next = min(
            pairs_b,
            key=lambda p: (
                abs(radii[p[0] - 1] - radii[i - 1]) + abs(radii[p[1] - 1] - radii[i_next - 1]),
                p[0],
            ),
        )
        emit(_swap_two_pairs(pattern, i, j, i_next, j_next), MoveKind.SWAP_SIMILAR_CROSS)

    # (e) each group's most-pained circle swapped with its next neighbor
    for group in sets.sets:
        jam = _max_pain(group, pains)
        if jam < n:
            emit(swap_circles(pattern, jam, jam + 1), MoveKind.SWAP_PAIN_NEXT)

    # (f) one uniform random swap inside each group
    if random_intraset_swaps:
        for group in sets.sets:
            if len(group) >= 2:
                ia = int(rng.integers(len(group)))
                ib = int(rng.integers(len(group) - 1))
                if ib >= ia:
                    ib += 1
                emit(swap_circles(pattern, group[ia], group[ib]), MoveKind.SWAP_RANDOM_IN_SET)

    if advance:
        advance_tabu(sets, jammers, tenure)
    return HopBatch(patterns=patterns, kinds=kinds, jammers=tuple(dict.fromkeys(jammers)))


def advance_tabu(sets: PartitionSets, jammers: Sequence[int], tenure: int = 1) -> None:
    """One tabu step: tick existing counters down, then tabu ``jammers``."""
    ticked = {i: t - 1 for i, t in sets.tabu.items() if t - 1 > 0}
    for j in jammers:
        ticked[j] = tenure
    sets.tabu.clear()
    sets.tabu.update(ticked)
