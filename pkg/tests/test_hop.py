import numpy as np
import pytest

from circlepack import (
    Pattern,
    energy,
    make_instance,
    pain_degrees,
    partition_sets,
)
from circlepack.actionspace import ActionSpace, is_narrow, pattern_action_spaces, rank_spaces
from circlepack.hop import (
    MoveKind,
    advance_tabu,
    generate_neighbors,
    neighbour_space_occupy,
    place_item_in_space,
    swap_circles,
)
from conftest import make_pattern


def overlapped_n12_pattern():
    """n=12 fixture: four controlled overlapping pairs fix the per-group
    pain ranking (1, 4, 7, 10 are the group maxima; circle 12 is calm),
    and the whole cluster sits left of x=0 leaving a narrow empty strip."""
    inst = make_instance("linear", 12)
    r = inst.radii
    L = 200.0
    centers = np.zeros((12, 2))
    # overlapping pairs (1,2), (4,5), (7,8), (10,11) at controlled depths
    pair_depth = {(1, 2): 0.5, (4, 5): 0.6, (7, 8): 0.7, (10, 11): 0.8}
    y_slots = {1: -80.0, 2: -80.0, 4: -45.0, 5: -45.0, 7: -5.0, 8: -5.0, 10: 50.0, 11: 50.0}
    x_left = -85.0
    for (a, b), depth in pair_depth.items():
        d = r[a - 1] + r[b - 1] - depth
        centers[a - 1] = (x_left, y_slots[a])
        centers[b - 1] = (x_left + d, y_slots[b])
    # non-overlapping fillers, still left of the strip
    centers[2] = (-50.0, -85.0)   # circle 3
    centers[5] = (-50.0, -60.0)   # circle 6
    centers[8] = (-55.0, -25.0)   # circle 9
    centers[11] = (-60.0, 80.0)   # circle 12
    return Pattern(inst, L, centers)


def offboard_pattern(L=10.0):
    """n=12 fixture with every circle fully outside the container, so the
    single action space is the (non-narrow) container itself."""
    inst = make_instance("linear", 12)
    centers = np.array([(30.0 + 2.0 * i, 0.0) for i in range(1, 13)], dtype=float)
    return Pattern(inst, L, centers)


class TestPlaceItem:
    def test_center_goes_to_space_center(self, unit_pair):
        out = place_item_in_space(unit_pair, 1, ActionSpace(0, 0, 2, 2))
        assert tuple(out.centers[0]) == (1.0, 1.0)
        assert tuple(out.centers[1]) == (1.0, 0.0)
        assert tuple(unit_pair.centers[0]) == (0.0, 0.0)  # source untouched

    def test_identity_move_allowed(self, unit_pair):
        out = place_item_in_space(unit_pair, 1, ActionSpace(-1, -1, 1, 1))
        assert np.array_equal(out.centers, unit_pair.centers)

    def test_relocation_then_minimize_resolves_overlap(self):
        from circlepack.kernels import minimize_pattern

        pat = make_pattern([1.0, 1.0], [(0.0, 0.0), (0.0, 0.0)], 50.0)
        pains = pain_degrees(pat)
        assert pains[0] == pains[1]
        moved = place_item_in_space(pat, 1, ActionSpace(5.0, 5.0, 15.0, 15.0))
        settled, res = minimize_pattern(moved)
        assert res.f < 1e-20
        assert energy(settled).U_e == 0.0


class TestNeighbourSpaceOccupy:
    def test_horizontal_narrow(self, unit_pair):
        out = neighbour_space_occupy(unit_pair, 1, 2, ActionSpace(0, 0, 4, 1))
        assert tuple(out.centers[0]) == (1.0, 0.5)
        assert tuple(out.centers[1]) == (3.0, 0.5)

    def test_vertical_narrow(self, unit_pair):
        out = neighbour_space_occupy(unit_pair, 1, 2, ActionSpace(0, 0, 1, 6))
        assert tuple(out.centers[0]) == (0.5, 1.5)
        assert tuple(out.centers[1]) == (0.5, 4.5)

    def test_same_circle_rejected(self, unit_pair):
        with pytest.raises(ValueError):
            neighbour_space_occupy(unit_pair, 1, 1, ActionSpace(0, 0, 4, 1))

    def test_fat_space_rejected(self, unit_pair):
        with pytest.raises(ValueError):
            neighbour_space_occupy(unit_pair, 1, 2, ActionSpace(0, 0, 2, 1.5))


class TestSwap:
    def test_involution(self, feasible_grid):
        once = swap_circles(feasible_grid, 2, 7)
        twice = swap_circles(once, 2, 7)
        assert np.array_equal(twice.centers, feasible_grid.centers)

    def test_equal_radii_preserve_energy(self):
        pat = make_pattern([1.0, 1.0, 1.0], [(0, 0), (1.5, 0), (0, 1.5)], 8.0)
        assert energy(swap_circles(pat, 1, 3)).U_e == pytest.approx(energy(pat).U_e)

    def test_unequal_swap_changes_energy(self):
        pat = make_pattern([1.0, 3.0], [(-3.0, 0.0), (1.0, 0.0)], 8.0)
        swapped = swap_circles(pat, 1, 2)
        assert energy(swapped).U_e != pytest.approx(energy(pat).U_e)

    def test_self_swap_rejected(self, unit_pair):
        with pytest.raises(ValueError):
            swap_circles(unit_pair, 1, 1)


class TestGenerateNeighbors:
    def batch_for(self, pattern, seed=0, **kw):
        sets = partition_sets(pattern.n)
        lists = rank_spaces(pattern_action_spaces(pattern))
        rng = np.random.default_rng(seed)
        return generate_neighbors(pattern, sets, lists, rng, **kw), sets, lists

    def test_full_batch_is_43(self):
        pat = overlapped_n12_pattern()
        batch, sets, lists = self.batch_for(pat)
        assert any(is_narrow(s) for s in lists.l1 + lists.l2)  # fixture sanity
        assert len(batch) == 43
        assert batch.count(MoveKind.RELOCATE) == 24
        assert batch.count(MoveKind.NSO_S1) == 3
        assert batch.count(MoveKind.NSO_S1_S2) == 3
        assert batch.count(MoveKind.SWAP_SIMILAR_CROSS) == 5
        assert batch.count(MoveKind.SWAP_PAIN_NEXT) == 4
        assert batch.count(MoveKind.SWAP_RANDOM_IN_SET) == 4
        assert batch.jammers == (1, 4, 7, 10, 2)

    def test_39_move_switch_drops_random_swaps(self):
        pat = overlapped_n12_pattern()
        batch, _, _ = self.batch_for(pat, random_intraset_swaps=False)
        assert len(batch) == 39
        assert batch.count(MoveKind.SWAP_RANDOM_IN_SET) == 0

    def test_no_narrow_space_gives_37(self):
        pat = offboard_pattern()
        batch, _, lists = self.batch_for(pat)
        assert lists.l1 and not any(is_narrow(s) for s in lists.l1 + lists.l2)
        assert len(batch) == 37
        assert batch.count(MoveKind.NSO_S1) == 0
        assert batch.count(MoveKind.NSO_S1_S2) == 0

    def test_pain_ranking_drives_jammer_choice(self):
        pat = offboard_pattern()
        pains = pain_degrees(pat)
        sets = partition_sets(12)
        for group in sets.sets:
            top = max(group, key=lambda i: pains[i - 1])
            assert top == group[0]  # smallest (border-deepest relative) circle
        batch, _, _ = self.batch_for(pat)
        assert batch.jammers == (1, 4, 7, 10)  # no narrow space: (b)/(c) skipped

    def test_all_s1_tabued_skips_block_b(self):
        pat = overlapped_n12_pattern()
        sets = partition_sets(12)
        sets.tabu.update({1: 1, 2: 1, 3: 1})
        lists = rank_spaces(pattern_action_spaces(pat))
        batch = generate_neighbors(pat, sets, lists, np.random.default_rng(0))
        assert batch.count(MoveKind.NSO_S1) == 0
        assert batch.count(MoveKind.NSO_S1_S2) == 0  # needs the S1 top too
        assert batch.count(MoveKind.RELOCATE) == 18  # S1 contributes none
        # blocks (e)/(f) ignore tabu entirely
        assert batch.count(MoveKind.SWAP_PAIN_NEXT) == 4
        assert batch.count(MoveKind.SWAP_RANDOM_IN_SET) == 4

    def test_every_offspring_preserves_structure(self):
        pat = overlapped_n12_pattern()
        batch, _, _ = self.batch_for(pat)
        for child in batch.patterns:
            assert child.n == pat.n
            assert child.L == pat.L
            assert child.instance is pat.instance

    def test_center_change_counts_per_kind(self):
        pat = overlapped_n12_pattern()
        batch, _, _ = self.batch_for(pat)
        expected = {
            MoveKind.RELOCATE: {0, 1},        # identity moves allowed
            MoveKind.NSO_S1: {1, 2},
            MoveKind.NSO_S1_S2: {1, 2},
            MoveKind.SWAP_SIMILAR_CROSS: {4},
            MoveKind.SWAP_PAIN_NEXT: {2},
            MoveKind.SWAP_RANDOM_IN_SET: {2},
        }
        for child, kind in batch.entries:
            changed = int(np.sum(np.any(child.centers != pat.centers, axis=1)))
            assert changed in expected[kind], (kind, changed)

    def test_determinism(self):
        pat = overlapped_n12_pattern()
        b1, _, _ = self.batch_for(pat, seed=123)
        b2, _, _ = self.batch_for(pat, seed=123)
        assert b1.kinds == b2.kinds
        assert all(np.array_equal(p.centers, q.centers) for p, q in zip(b1.patterns, b2.patterns))

    def test_tabu_one_step_cycle(self):
        pat = overlapped_n12_pattern()
        sets = partition_sets(12)
        lists = rank_spaces(pattern_action_spaces(pat))
        b1 = generate_neighbors(pat, sets, lists, np.random.default_rng(0))
        assert set(b1.jammers) <= set(sets.tabu)
        b2 = generate_neighbors(pat, sets, lists, np.random.default_rng(0))
        assert not set(b2.jammers) & set(b1.jammers)
        b3 = generate_neighbors(pat, sets, lists, np.random.default_rng(0))
        assert b3.jammers == b1.jammers  # selectable again two steps later

    def test_manual_advance_mode(self):
        pat = overlapped_n12_pattern()
        sets = partition_sets(12)
        lists = rank_spaces(pattern_action_spaces(pat))
        b1 = generate_neighbors(pat, sets, lists, np.random.default_rng(0), advance=False)
        assert sets.tabu == {}
        advance_tabu(sets, b1.jammers)
        assert set(sets.tabu) == set(b1.jammers)
        advance_tabu(sets, [])
        assert sets.tabu == {}
