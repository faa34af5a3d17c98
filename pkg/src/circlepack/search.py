"""Top-level search: random restarts, basin-hopping rounds, perturbation
loops, and the shrink/bisection post-processing of feasible patterns.

The flow per restart: minimize G random patterns; if none is feasible,
run up to ``k_b`` perturbation loops of ``k_p`` basin-hopping iterations
each, where every iteration expands the ``m`` lowest-energy patterns
into move batches and keeps parents plus minimized offspring as the new
pool.  The first feasible pattern goes straight to post-processing,
which shrinks the container geometrically and finishes with bisection.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels
from .actionspace import pattern_action_spaces, rank_spaces
from .hop import advance_tabu, generate_neighbors
from .instance import Instance, known_best
from .model import Pattern, is_feasible, partition_sets, radii_array
from .optim import MinimizeConfig
from .perturb import perturb

TraceHook = Callable[[dict], None]


@dataclass(frozen=True)
class SolverConfig:
    """All solver tunables (defaults follow the published regulation)."""

    G: int = 32                 # random patterns per restart
    m: int = 3                  # patterns selected for expansion
    k_p: int = 20               # basin-hopping iterations per loop
    k_b: int = 5                # perturbation loops per restart
    alpha: float = 0.999        # container shrink factor
    bisection_tol: float = 1e-7
    energy_tol: float = 1e-20
    tabu_tenure: int = 1
    time_limit: float = math.inf  # seconds
    seed: int = 0
    threads: int = 0            # 0 = reproducible serial execution
    batch39: bool = False       # drop random intra-group swaps (39-move batches)

    def __post_init__(self):
        if not self.G >= self.m >= 1:
            raise ValueError("need G >= m >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if min(self.bisection_tol, self.energy_tol) <= 0:
            raise ValueError("tolerances must be positive")
        if self.time_limit < 0:
            raise ValueError("time limit must be >= 0")

    def minimize_config(self) -> MinimizeConfig:
        return MinimizeConfig(energy_tol=self.energy_tol)


@dataclass
class SolveResult:
    pattern: Optional[Pattern]
    L: Optional[float]
    wall_seconds: float
    lbfgs_calls: int = 0
    hop_batches: int = 0
    perturbations: int = 0
    restarts: int = 0
    trace: list[dict] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.pattern is not None


def default_l0(instance: Instance) -> float:
    """Starting container size: the recorded best when one exists, else a
    shelf-packing bound (any square set of total area at most half the
    container area packs, so L = sqrt(2 * sum (2 r_i)^2) always fits)."""
    rec = known_best(instance.family, instance.n)
    if rec is not None:
        return rec
    r = np.asarray(instance.radii)
    return float(math.sqrt(8.0 * float(np.sum(r * r))))


def random_pattern(instance: Instance, L: float, rng: np.random.Generator) -> Pattern:
    """Uniform random placement; each center is drawn from the axis range
    that keeps the circle inside when that range is nonempty."""
    if not L > 0:
        raise ValueError("container size must be positive")
    half = 0.5 * L
    centers = np.empty((instance.n, 2))
    for i, r in enumerate(instance.radii):
        span = half - r
        if span > 0:
            centers[i, 0] = rng.uniform(-span, span)
            centers[i, 1] = rng.uniform(-span, span)
        else:
            centers[i, 0] = rng.uniform(-half, half)
            centers[i, 1] = rng.uniform(-half, half)
    return Pattern(instance=instance, L=L, centers=centers)


class _DeadlineReached(Exception):
    pass


class _Deadline:
    def __init__(self, seconds: float):
        self.start = time.monotonic()
        self.limit = seconds

    def exceeded(self) -> bool:
        return time.monotonic() - self.start >= self.limit

    def check(self) -> None:
        if self.exceeded():
            raise _DeadlineReached

    def elapsed(self) -> float:
        return time.monotonic() - self.start


class _Searcher:
    def __init__(self, instance: Instance, L0: float, cfg: SolverConfig, trace_hook: Optional[TraceHook]):
        self.instance = instance
        self.L0 = L0
        self.cfg = cfg
        self.mcfg = cfg.minimize_config()
        self.trace_hook = trace_hook
        self.result = SolveResult(pattern=None, L=None, wall_seconds=0.0)
        self.deadline = _Deadline(cfg.time_limit)
        self.pool: list[tuple[Pattern, float]] = []  # (pattern, energy), generation order

    def trace(self, phase: str, **extra):
        rec = {
            "t": round(self.deadline.elapsed(), 3),
            "phase": phase,
            "best_ue": min((u for _, u in self.pool), default=None),
            "pool": len(self.pool),
        }
        rec.update(extra)
        self.result.trace.append(rec)
        if self.trace_hook is not None:
            self.trace_hook(rec)

    def minimize(self, pattern: Pattern) -> tuple[Pattern, float]:
        self.deadline.check()
        self.result.lbfgs_calls += 1
        minimized, res = kernels.minimize_pattern(pattern, self.mcfg)
        return minimized, res.f

    def minimize_many(self, patterns: list[Pattern]) -> list[tuple[Pattern, float]]:
        if self.cfg.threads > 0 and len(patterns) > 1:
            self.deadline.check()
            with ThreadPoolExecutor(max_workers=self.cfg.threads) as pool:
                out = list(pool.map(lambda p: kernels.minimize_pattern(p, self.mcfg), patterns))
            self.result.lbfgs_calls += len(patterns)
            return [(p, r.f) for p, r in out]
        return [self.minimize(p) for p in patterns]

    def run(self) -> SolveResult:
        master = np.random.SeedSequence(self.cfg.seed)
        try:
            while True:
                self.deadline.check()
                rng = np.random.Generator(np.random.PCG64(master.spawn(1)[0]))
                found = self.one_restart(rng)
                if found is not None:
                    return self.finish(found)
                self.result.restarts += 1
                self.trace("restart")
        except _DeadlineReached:
            return self.finish(None)

    def one_restart(self, rng: np.random.Generator) -> Optional[Pattern]:
        cfg = self.cfg
        self.pool = []
        for _ in range(cfg.G):
            pat, ue = self.minimize(random_pattern(self.instance, self.L0, rng))
            self.pool.append((pat, ue))
            if ue < cfg.energy_tol:
                return pat
        self.trace("initial-pool")
        if self.instance.n < 4:
            return None  # basin hopping needs the four groups; keep restarting

        sets = partition_sets(self.instance.n)
        for _ in range(cfg.k_b):
            for _ in range(cfg.k_p):
                found = self.hop_iteration(sets, rng)
                if found is not None:
                    return found
            found = self.perturb_round(sets)
            if found is not None:
                return found
        return None  # restart

    def select(self) -> list[tuple[Pattern, float]]:
        return select_lowest(self.pool, self.cfg.m)

    def hop_iteration(self, sets, rng) -> Optional[Pattern]:
        cfg = self.cfg
        parents = self.select()
        offspring: list[Pattern] = []
        jammers: list[int] = []
        for parent, _ in parents:
            lists = rank_spaces(pattern_action_spaces(parent))
            batch = generate_neighbors(
                parent, sets, lists, rng,
                tenure=cfg.tabu_tenure,
                random_intraset_swaps=not cfg.batch39,
                advance=False,
            )
            self.result.hop_batches += 1
            offspring.extend(batch.patterns)
            jammers.extend(batch.jammers)
        advance_tabu(sets, jammers, cfg.tabu_tenure)
        minimized = self.minimize_many(offspring)
        for pat, ue in minimized:
            if ue < cfg.energy_tol:
                return pat
        self.pool = parents + minimized
        self.trace("hop")
        return None

    def perturb_round(self, sets) -> Optional[Pattern]:
        cfg = self.cfg
        parents = self.select()
        replacements: list[tuple[Pattern, float]] = []
        for parent, _ in parents:
            self.deadline.check()
            new = perturb(parent, sets, self.mcfg)
            self.result.lbfgs_calls += 1
            self.result.perturbations += 1
            ue = _pattern_energy(new)
            if ue < cfg.energy_tol:
                return new
            replacements.append((new, ue))
        # the perturbed patterns alone seed the next basin-hopping block;
        # keeping the pre-perturbation pool would immediately out-select
        # them and stall the outer loop (see decisions log)
        self.pool = replacements
        self.trace("perturb")
        return None

    def finish(self, feasible: Optional[Pattern]) -> SolveResult:
        if feasible is not None:
            self.trace("feasible")
            pattern, L = post_process(feasible, self.cfg, _counter=self.result)
            self.result.pattern = pattern
            self.result.L = L
            self.trace("post-processed", L=L)
        self.result.wall_seconds = self.deadline.elapsed()
        return self.result


def _pattern_energy(pattern: Pattern) -> float:
    r = radii_array(pattern.instance)
    return kernels.energy_terms(pattern.centers.reshape(-1), r, pattern.L)[0]


def select_lowest(pool, m: int):
    """The m lowest-energy entries of ``pool`` [(item, U_e), ...]; ties
    resolve by generation order (list position)."""
    order = sorted(range(len(pool)), key=lambda k: (pool[k][1], k))
    return [pool[k] for k in order[:m]]


def solve(
    instance: Instance,
    L0: Optional[float] = None,
    cfg: Optional[SolverConfig] = None,
    trace_hook: Optional[TraceHook] = None,
) -> SolveResult:
    """Search for a feasible packing at container size L0 (defaulting to
    the recorded best) and post-process the first one found.  Returns a
    result with ``pattern=None`` when the deadline passes first."""
    if cfg is None:
        cfg = SolverConfig()
    if L0 is None:
        L0 = default_l0(instance)
    if not L0 > 0:
        raise ValueError("L0 must be positive")
    return _Searcher(instance, L0, cfg, trace_hook).run()


@dataclass
class PostProcessResult:
    pattern: Pattern
    L: float          # = L_upper, the smallest verified-feasible size
    L_lower: float    # largest size probed infeasible
    L_upper: float
    shrink_steps: int
    bisection_probes: int


def shrink_and_bisect(
    pattern: Pattern,
    cfg: Optional[SolverConfig] = None,
    _counter: Optional[SolveResult] = None,
) -> PostProcessResult:
    """Shrink a feasible pattern's container geometrically (factor alpha,
    re-minimizing from the previous centers after each step) until a step
    turns infeasible, then bisect the bracketing interval until its width
    drops below ``bisection_tol``."""
    if cfg is None:
        cfg = SolverConfig()
    mcfg = cfg.minimize_config()

    def minimize(pat: Pattern) -> tuple[Pattern, float]:
        if _counter is not None:
            _counter.lbfgs_calls += 1
        out, res = kernels.minimize_pattern(pat, mcfg)
        return out, res.f

    if _pattern_energy(pattern) >= cfg.energy_tol:
        raise ValueError("post-processing requires a feasible input pattern")

    best = pattern.copy()
    L_upper = pattern.L
    shrink_steps = 0
    while True:
        L_try = cfg.alpha * L_upper
        candidate, ue = minimize(best.with_container(L_try))
        shrink_steps += 1
        if ue < cfg.energy_tol:
            best, L_upper = candidate, L_try
        else:
            L_lower = L_try
            break

    probes = 0
    while L_upper - L_lower >= cfg.bisection_tol:
        L_mid = 0.5 * (L_upper + L_lower)
        candidate, ue = minimize(best.with_container(L_mid))
        probes += 1
        if ue < cfg.energy_tol:
            best, L_upper = candidate, L_mid
        else:
            L_lower = L_mid

    best = best.with_container(L_upper)
    if not is_feasible(best, 1e-9):
        raise AssertionError("post-processing produced an infeasible pattern")
    return PostProcessResult(
        pattern=best, L=L_upper, L_lower=L_lower, L_upper=L_upper,
        shrink_steps=shrink_steps, bisection_probes=probes,
    )


def post_process(
    pattern: Pattern,
    cfg: Optional[SolverConfig] = None,
    _counter: Optional[SolveResult] = None,
) -> tuple[Pattern, float]:
    """Container-size reduction of a feasible pattern; returns the
    smallest verified-feasible pattern and its container size."""
    res = shrink_and_bisect(pattern, cfg, _counter)
    return res.pattern, res.L
