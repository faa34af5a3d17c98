import math
import time

import numpy as np
import pytest
from scipy import stats

from circlepack import (
    Pattern,
    SolverConfig,
    custom_instance,
    default_l0,
    energy,
    is_feasible,
    known_best,
    make_instance,
    post_process,
    random_pattern,
    solve,
)
from circlepack.search import shrink_and_bisect


class TestSolverConfig:
    def test_defaults_follow_the_regulation_table(self):
        cfg = SolverConfig()
        assert (cfg.G, cfg.m, cfg.k_p, cfg.k_b) == (32, 3, 20, 5)
        assert cfg.alpha == 0.999
        assert cfg.bisection_tol == 1e-7
        assert cfg.energy_tol == 1e-20
        assert cfg.tabu_tenure == 1

    def test_validation(self):
        with pytest.raises(ValueError):
            SolverConfig(G=2, m=3)
        with pytest.raises(ValueError):
            SolverConfig(alpha=1.0)
        with pytest.raises(ValueError):
            SolverConfig(time_limit=-1)


class TestRandomPattern:
    def test_single_circle_stays_inside(self):
        inst = make_instance("linear", 1)
        rng = np.random.default_rng(0)
        for _ in range(100):
            pat = random_pattern(inst, 3.0, rng)
            assert is_feasible(pat, 0.0)

    def test_fixed_seed_reproduces(self):
        inst = make_instance("sqrt", 6)
        a = random_pattern(inst, 20.0, np.random.default_rng(h := 1234))
        b = random_pattern(inst, 20.0, np.random.default_rng(h))
        assert np.array_equal(a.centers, b.centers)

    def test_oversized_circle_falls_back_to_full_range(self):
        inst = custom_instance([5.0])
        rng = np.random.default_rng(1)
        pat = random_pattern(inst, 4.0, rng)  # r > L/2
        assert np.all(np.abs(pat.centers) <= 2.0)

    def test_axis_distribution_is_uniform(self):
        inst = make_instance("linear", 5)
        L = 40.0
        rng = np.random.default_rng(99)
        xs = np.array([random_pattern(inst, L, rng).centers for _ in range(1000)])
        for i in range(5):
            span = L / 2 - inst.radii[i]
            for axis in (0, 1):
                stat = stats.kstest(xs[:, i, axis], stats.uniform(-span, 2 * span).cdf)
                assert stat.pvalue > 1e-3, (i, axis, stat)

    def test_positive_container_required(self):
        with pytest.raises(ValueError):
            random_pattern(make_instance("linear", 2), 0.0, np.random.default_rng(0))


class TestSolveBasics:
    def test_loose_container_feasible_fast(self):
        inst = make_instance("linear", 4)
        res = solve(inst, L0=30.0, cfg=SolverConfig(time_limit=60, seed=11))
        assert res.feasible
        assert res.L <= 30.0
        assert is_feasible(res.pattern, 1e-9)
        assert res.lbfgs_calls > 0
        assert res.trace and res.trace[-1]["phase"] == "post-processed"

    def test_zero_budget_returns_nothing(self):
        inst = make_instance("linear", 4)
        res = solve(inst, L0=30.0, cfg=SolverConfig(time_limit=0, seed=1))
        assert not res.feasible
        assert res.pattern is None and res.L is None
        assert res.lbfgs_calls == 0
        assert res.hop_batches == 0

    def test_deadline_cuts_off_hard_instance(self):
        inst = make_instance("sqrt", 15)
        rec = known_best("sqrt", 15)
        t0 = time.monotonic()
        res = solve(inst, L0=rec * 0.9, cfg=SolverConfig(time_limit=1.0, seed=2))
        wall = time.monotonic() - t0
        assert not res.feasible
        assert wall < 10.0  # one minimization of overshoot at most

    def test_default_l0_prefers_records(self):
        assert default_l0(make_instance("linear", 15)) == known_best("linear", 15)

    def test_default_l0_fallback_bound_packs(self):
        inst = make_instance("linear", 4)  # not in the tables
        L0 = default_l0(inst)
        r = np.asarray(inst.radii)
        assert L0 == pytest.approx(math.sqrt(8.0 * float(np.sum(r * r))))
        res = solve(inst, cfg=SolverConfig(time_limit=60, seed=0))
        assert res.feasible

    def test_bit_reproducible_serial_runs(self):
        inst = make_instance("linear", 5)
        cfg = SolverConfig(time_limit=120, seed=77)
        r1 = solve(inst, L0=35.0, cfg=cfg)
        r2 = solve(inst, L0=35.0, cfg=cfg)
        assert r1.feasible and r2.feasible
        assert r1.L == r2.L
        assert np.array_equal(r1.pattern.centers, r2.pattern.centers)
        assert r1.lbfgs_calls == r2.lbfgs_calls

    def test_small_n_skips_hopping(self):
        inst = custom_instance([1.0, 1.0])
        res = solve(inst, L0=5.0, cfg=SolverConfig(time_limit=60, seed=4))
        assert res.feasible
        assert res.hop_batches == 0


class TestPostProcess:
    def test_single_circle_reaches_diameter(self):
        inst = make_instance("linear", 1)
        pat = Pattern(inst, 3.0, np.array([[0.4, -0.3]]))
        out, L = post_process(pat)
        assert abs(L - 2.0) < 1e-6
        assert is_feasible(out, 1e-9)

    def test_two_unit_circles_reach_diagonal_optimum(self):
        inst = custom_instance([1.0, 1.0])
        pat = Pattern(inst, 5.0, np.array([[-1.2, -1.2], [1.2, 1.2]]))
        assert energy(pat).U_e == 0.0
        out, L = post_process(pat)
        assert abs(L - (2.0 + math.sqrt(2.0))) < 1e-5
        assert is_feasible(out, 1e-9)

    def test_output_never_exceeds_input(self):
        rng = np.random.default_rng(3)
        inst = make_instance("sqrt", 5)
        for _ in range(3):
            centers = rng.uniform(-6, 6, (5, 2))
            pat = Pattern(inst, 30.0, centers)
            if energy(pat).U_e > 0:
                continue
            out, L = post_process(pat)
            assert L <= 30.0
            assert is_feasible(out, 1e-9)

    def test_bracket_width_below_tolerance(self):
        inst = make_instance("linear", 1)
        pat = Pattern(inst, 2.6, np.array([[0.0, 0.0]]))
        res = shrink_and_bisect(pat, SolverConfig())
        assert res.L_upper - res.L_lower < 1e-7
        assert res.L == res.L_upper
        assert res.shrink_steps > 0

    def test_infeasible_input_rejected(self, unit_pair):
        with pytest.raises(ValueError):
            post_process(unit_pair)


class TestSelection:
    def test_picks_m_lowest_with_generation_order_ties(self):
        from circlepack.search import select_lowest

        pool = [("a", 3.0), ("b", 1.0), ("c", 2.0), ("d", 1.0), ("e", 0.5)]
        assert select_lowest(pool, 3) == [("e", 0.5), ("b", 1.0), ("d", 1.0)]
        assert select_lowest(pool, 1) == [("e", 0.5)]
