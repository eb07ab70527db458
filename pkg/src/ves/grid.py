"""Deterministic one-dimensional evaluation grids over the capital-labor ratio."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GridError

SPACINGS = ("linear", "log")


@dataclass(frozen=True)
class GridSpec:
    k_min: float
    k_max: float
    points: int
    spacing: str = "log"

    def __post_init__(self):
        if not (math.isfinite(self.k_min) and math.isfinite(self.k_max)):
            raise GridError("grid bounds must be finite")
        if self.k_min <= 0:
            raise GridError(f"k_min must be positive (got {self.k_min!r})")
        if self.k_max <= self.k_min:
            raise GridError(f"k_max must exceed k_min (got {self.k_min!r}, {self.k_max!r})")
        if int(self.points) != self.points or self.points < 2:
            raise GridError(f"points must be an integer >= 2 (got {self.points!r})")
        if self.spacing not in SPACINGS:
            raise GridError(f"spacing must be one of {SPACINGS} (got {self.spacing!r})")

    def values(self) -> np.ndarray:
        """Grid nodes, strictly increasing, with exact endpoints.

        Log grids are built from base-10 exponents so that decades such as
        ``k = 1`` land on exact nodes whenever the spacing allows it.
        """
        n = int(self.points)
        if self.spacing == "log":
            k = 10.0 ** np.linspace(math.log10(self.k_min), math.log10(self.k_max), n)
        else:
            k = np.linspace(self.k_min, self.k_max, n)
        k[0] = self.k_min
        k[-1] = self.k_max
        if np.any(np.diff(k) <= 0):
            raise GridError("grid too fine for double precision: nodes not strictly increasing")
        return k

    def __len__(self):
        return int(self.points)
