#!/usr/bin/env python3
"""Compare the compiled and pure-Python kernel lanes.

Times the energy+gradient kernel and a full packing minimization on
representative instance sizes, printing one table row per case.

Usage: python benchmarks/bench_backends.py [--repeats N]
"""

import argparse
import importlib
import time

import numpy as np

from circlepack import make_instance
from circlepack.search import random_pattern


def load_lanes():
    lanes = {}
    try:
        lanes["cython"] = importlib.import_module("circlepack._core")
    except ImportError:
        print("note: compiled lane unavailable; benchmarking fallback only")
    lanes["python"] = importlib.import_module("circlepack._core_py")
    return lanes


def bench_energy_grad(lane, xy, radii, L, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(200):
            lane.energy_and_grad(xy, radii, L)
        best = min(best, (time.perf_counter() - t0) / 200)
    return best


def bench_minimize(lane, starts, radii, L, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for xy in starts:
            lane.lbfgs_pack(xy.copy(), radii, L)
        best = min(best, (time.perf_counter() - t0) / len(starts))
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3, help="timing repeats (best kept)")
    args = parser.parse_args()

    lanes = load_lanes()
    rng = np.random.default_rng(0)
    print(f"{'n':>4} {'family':>7} {'lane':>7} {'energy+grad':>14} {'minimize':>12}")
    print("-" * 50)
    for family, n in (("linear", 14), ("sqrt", 15), ("linear", 32), ("linear", 72)):
        inst = make_instance(family, n)
        radii = np.asarray(inst.radii)
        L = 2.2 * float(np.sqrt(np.sum(radii**2)))
        starts = [random_pattern(inst, L, rng).as_vector() for _ in range(20)]
        xy = starts[0]
        base = None
        for name, lane in lanes.items():
            t_eg = bench_energy_grad(lane, xy, radii, L, args.repeats)
            t_min = bench_minimize(lane, starts, radii, L, args.repeats)
            if base is None:
                base = t_min
            print(
                f"{n:>4} {family:>7} {name:>7} {t_eg * 1e6:>11.2f} us {t_min * 1e3:>9.3f} ms"
                + ("" if t_min == base else f"  ({t_min / base:.1f}x slower)" if t_min > base else f"  ({base / t_min:.1f}x faster)")
            )


if __name__ == "__main__":
    main()
