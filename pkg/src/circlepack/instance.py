"""Benchmark instances and the table of best-known container sizes.

Two instance families are supported: circle i has radius i ("linear")
or radius sqrt(i) ("sqrt"), for i = 1..n.  Best-known container sizes
are shipped as a CSV data file with one row per (family, n, source)
and are used both to initialize the solver and to score benchmark runs.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Optional

RECORDS_ENV_VAR = "CIRCLEPACK_RECORDS"


class Family(str, Enum):
    LINEAR = "linear"
    SQRT = "sqrt"

    @classmethod
    def parse(cls, name: str) -> "Family":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown family {name!r}; expected 'linear' or 'sqrt'") from None


@dataclass(frozen=True)
class Instance:
    """One case: n circles with fixed radii.  Family instances follow the
    benchmark rules (radii i or sqrt(i)); ``family`` is None for ad-hoc
    radii built with :func:`custom_instance`.

    Circle indices are 1-based in all public interfaces; ``radii[i-1]``
    is the radius of circle i.
    """

    family: Optional[Family]
    n: int
    radii: tuple[float, ...] = field(repr=False)

    def radius(self, i: int) -> float:
        """Radius of circle i (1-based)."""
        return self.radii[i - 1]


def make_instance(family: Family | str, n: int) -> Instance:
    """Build the instance for (family, n): radii i or sqrt(i), i = 1..n."""
    if isinstance(family, str):
        family = Family.parse(family)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if family is Family.LINEAR:
        radii = tuple(float(i) for i in range(1, n + 1))
    else:
        radii = tuple(math.sqrt(i) for i in range(1, n + 1))
    return Instance(family=family, n=n, radii=radii)


def custom_instance(radii) -> Instance:
    """Instance with arbitrary positive radii (no family attached)."""
    radii = tuple(float(r) for r in radii)
    if not radii:
        raise ValueError("need at least one radius")
    if any(not (r > 0 and math.isfinite(r)) for r in radii):
        raise ValueError("all radii must be positive and finite")
    return Instance(family=None, n=len(radii), radii=radii)


@dataclass(frozen=True)
class Record:
    family: Family
    n: int
    source: str  # ASGO | Packomania | PAS-PCI
    L: float


class RecordsTable:
    """Best-known container sizes keyed by (family, n, source)."""

    def __init__(self, records: list[Record]):
        self._by_key: dict[tuple[Family, int, str], Record] = {}
        for rec in records:
            if not (rec.L > 0 and math.isfinite(rec.L)):
                raise ValueError(f"record {rec} has non-positive or non-finite L")
            self._by_key[(rec.family, rec.n, rec.source)] = rec

    def __len__(self) -> int:
        return len(self._by_key)

    def get(self, family: Family, n: int, source: str) -> Optional[float]:
        rec = self._by_key.get((family, n, source))
        return rec.L if rec is not None else None

    def sources(self, family: Family, n: int) -> dict[str, float]:
        """All recorded values for one (family, n), keyed by source."""
        return {
            key[2]: rec.L
            for key, rec in self._by_key.items()
            if key[0] is family and key[1] == n
        }

    def rows(self) -> list[Record]:
        return sorted(
            self._by_key.values(), key=lambda r: (r.family.value, r.n, r.source)
        )


def load_records(path: Optional[str] = None) -> RecordsTable:
    """Load the records CSV (header ``family,n,source,L``).

    Resolution order: explicit path argument, the CIRCLEPACK_RECORDS
    environment variable, then the packaged data file.
    """
    if path is None:
        path = os.environ.get(RECORDS_ENV_VAR)
    if path is not None:
        with open(path, newline="", encoding="utf-8") as f:
            return _parse_records(f)
    ref = resources.files("circlepack.data").joinpath("records.csv")
    with ref.open("r", encoding="utf-8") as f:
        return _parse_records(f)


def _parse_records(f) -> RecordsTable:
    reader = csv.DictReader(f)
    records = [
        Record(
            family=Family.parse(row["family"]),
            n=int(row["n"]),
            source=row["source"],
            L=float(row["L"]),
        )
        for row in reader
    ]
    return RecordsTable(records)


_tables_by_source: dict[Optional[str], RecordsTable] = {}


def default_records() -> RecordsTable:
    """Cached table from the default records file (env override honored)."""
    key = os.environ.get(RECORDS_ENV_VAR)
    if key not in _tables_by_source:
        _tables_by_source[key] = load_records()
    return _tables_by_source[key]


def known_best(family: Family | str, n: int) -> Optional[float]:
    """Best recorded container size for (family, n), if the tables have a row."""
    if isinstance(family, str):
        family = Family.parse(family)
    return default_records().get(family, n, "PAS-PCI")
