import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for oracles.py

from circlepack import Pattern, custom_instance, make_instance


@pytest.fixture
def unit_pair():
    """Two unit circles in a huge container, overlapping at distance 1."""
    inst = custom_instance([1.0, 1.0])
    return Pattern(inst, 100.0, np.array([[0.0, 0.0], [1.0, 0.0]]))


def make_pattern(radii, centers, L):
    return Pattern(custom_instance(radii), L, np.asarray(centers, dtype=float))


@pytest.fixture
def feasible_grid():
    """Nine unit circles on a comfortable 3x3 grid, strictly feasible."""
    pts = [(x, y) for x in (-3.0, 0.0, 3.0) for y in (-3.0, 0.0, 3.0)]
    return make_pattern([1.0] * 9, pts, 12.0)


def random_loose_pattern(rng, n=8, family="linear", squeeze=1.0):
    """Random pattern of a family instance; squeeze < 1 forces overlap."""
    inst = make_instance(family, n)
    r = np.asarray(inst.radii)
    L = squeeze * 2.0 * float(np.sqrt(2.0 * np.sum(r * r)))
    centers = rng.uniform(-L / 2, L / 2, size=(n, 2))
    return Pattern(inst, L, centers)
