"""Solution files: JSON on disk, lossless float round-trip.

A solution records the instance identity, the container size, run
metadata, and one row per circle.  ``wall_time_s`` is null when the run
executed in reproducible serial mode so that identical seeds produce
byte-identical files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .instance import Family, Instance
from .model import Pattern


@dataclass
class SolutionFile:
    family: Family
    n: int
    L: float
    circles: list[tuple[int, float, float, float]]  # (index, r, x, y)
    solver_version: str = ""
    seed: Optional[int] = None
    wall_time_s: Optional[float] = None

    def __post_init__(self):
        if len(self.circles) != self.n:
            raise ValueError(f"expected {self.n} circle rows, got {len(self.circles)}")

    def to_pattern(self) -> Pattern:
        """Pattern built from the file's own radii (the verifier trusts
        the file, not the family rule)."""
        rows = sorted(self.circles)
        instance = Instance(family=self.family, n=self.n, radii=tuple(r for (_, r, _, _) in rows))
        centers = np.array([[x, y] for (_, _, x, y) in rows])
        return Pattern(instance=instance, L=self.L, centers=centers)


def from_pattern(
    pattern: Pattern,
    solver_version: str = "",
    seed: Optional[int] = None,
    wall_time_s: Optional[float] = None,
) -> SolutionFile:
    inst = pattern.instance
    if inst.family is None:
        raise ValueError("solution files require a family instance")
    circles = [
        (i + 1, float(inst.radii[i]), float(pattern.centers[i, 0]), float(pattern.centers[i, 1]))
        for i in range(inst.n)
    ]
    return SolutionFile(
        family=inst.family,
        n=inst.n,
        L=float(pattern.L),
        circles=circles,
        solver_version=solver_version,
        seed=seed,
        wall_time_s=wall_time_s,
    )


def serialize(sol: SolutionFile) -> str:
    doc = {
        "family": sol.family.value,
        "n": sol.n,
        "L": sol.L,
        "solver_version": sol.solver_version,
        "seed": sol.seed,
        "wall_time_s": sol.wall_time_s,
        "circles": [
            {"index": i, "r": r, "x": x, "y": y} for (i, r, x, y) in sol.circles
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def deserialize(text: str) -> SolutionFile:
    doc = json.loads(text)
    try:
        circles = [
            (int(c["index"]), float(c["r"]), float(c["x"]), float(c["y"]))
            for c in doc["circles"]
        ]
        sol = SolutionFile(
            family=Family.parse(doc["family"]),
            n=int(doc["n"]),
            L=float(doc["L"]),
            circles=circles,
            solver_version=str(doc.get("solver_version", "")),
            seed=doc.get("seed"),
            wall_time_s=doc.get("wall_time_s"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed solution document: {exc}") from exc
    if not math.isfinite(sol.L):
        raise ValueError("container size must be finite")
    return sol


def write_solution(sol: SolutionFile, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize(sol))


def read_solution(path: str) -> SolutionFile:
    with open(path, encoding="utf-8") as f:
        return deserialize(f.read())


def write_plaintext(sol: SolutionFile, path: str) -> None:
    """Interoperability export: one ``i x y r`` line per circle."""
    with open(path, "w", encoding="utf-8") as f:
        for i, r, x, y in sol.circles:
            f.write(f"{i} {x!r} {y!r} {r!r}\n")
