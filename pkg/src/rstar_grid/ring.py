"""Candidate successors: the rasterized circle of radius delta / c_hv around a cell."""

from __future__ import annotations

import math
import random
from functools import lru_cache

import numpy as np

from .grid import C_HV, Cell, Grid


def radius_for(delta: int) -> int:
    """Ring radius in cells for a distance in cost units, rounded half up, at least 1."""
    return max(1, (2 * int(delta) + C_HV) // (2 * C_HV))


@lru_cache(maxsize=None)
def enumerate_ring(r: int) -> tuple[Cell, ...]:
    """Midpoint circle offsets of radius ``r``, deduplicated, ordered by angle.

    The cache is filled once per radius; lru_cache is thread safe for readers.
    """
    if r < 1:
        raise ValueError(f"ring radius must be >= 1, got {r}")
    pts: set[Cell] = set()
    x, y = r, 0
    err = 1 - r
    while x >= y:
        for a, b in ((x, y), (y, x)):
            pts.update(((a, b), (-a, b), (a, -b), (-a, -b)))
        y += 1
        if err < 0:
            err += 2 * y + 1
        else:
            x -= 1
            err += 2 * (y - x) + 1
    return tuple(sorted(pts, key=lambda p: (math.atan2(p[0], p[1]), p)))


@lru_cache(maxsize=None)
def _ring_arrays(r: int) -> tuple[np.ndarray, np.ndarray]:
    offs = np.array(enumerate_ring(r), dtype=np.int64)
    return offs[:, 0].copy(), offs[:, 1].copy()


def ring_cells(grid: Grid, center: Cell, r: int) -> list[Cell]:
    """Free in-bounds ring cells around ``center``, in the ring's angular order."""
    di, dj = _ring_arrays(r)
    i = di + center[0]
    j = dj + center[1]
    inside = (i >= 0) & (i < grid.rows) & (j >= 0) & (j < grid.cols)
    i, j = i[inside], j[inside]
    free = np.frombuffer(grid.blocked, dtype=np.uint8)[i * grid.cols + j] == 0
    return list(zip(i[free].tolist(), j[free].tolist()))


def sample_successors(grid: Grid, center: Cell, delta: int, k: int, rng: random.Random) -> list[Cell]:
    """Uniform sample without replacement of min(k, available) free ring cells."""
    if k < 1:
        raise ValueError("k must be >= 1")
    cells = ring_cells(grid, center, radius_for(delta))
    if k >= len(cells):
        return cells
    return rng.sample(cells, k)
