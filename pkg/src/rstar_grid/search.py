"""A*, weighted A* with an expansion budget, and a Dijkstra reference oracle."""

from __future__ import annotations

import enum
import heapq
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernel
from .grid import C_D, C_HV, Cell, Grid, neighbors8


class Outcome(str, enum.Enum):
    FOUND = "found"
    BUDGET_EXHAUSTED = "budget_exhausted"
    SPACE_EXHAUSTED = "space_exhausted"


@dataclass
class SearchStats:
    expansions: int = 0
    generated: int = 0
    open_size_final: int = 0
    closed_size_final: int = 0
    wall_time_ms: float = 0.0

    @property
    def cells(self) -> int:
        return self.open_size_final + self.closed_size_final


@dataclass
class SearchResult:
    outcome: Outcome
    path: list[Cell] = field(default_factory=list)
    length: int | None = None
    stats: SearchStats = field(default_factory=SearchStats)
    # admissible bound on the s-g cost when not found: min g + h over OPEN
    lower_bound: int | None = None

    @property
    def found(self) -> bool:
        return self.outcome is Outcome.FOUND


def weight_ratio(w) -> tuple[int, int]:
    """(numerator, denominator) of w; f is compared as g*den + num*h in integers."""
    frac = Fraction(w).limit_denominator(10_000)
    if frac < 1:
        raise ValueError(f"heuristic weight must be >= 1, got {w}")
    return frac.numerator, frac.denominator


@lru_cache(maxsize=64)
def _moves(width: int, corner_cutting: bool) -> np.ndarray:
    # rows of (flat offset, cost, corner offset a, corner offset b) in padded
    # coordinates; corner offsets are 0 when no corner check applies
    moves = []
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            off = di * width + dj
            if di and dj:
                if corner_cutting:
                    moves.append((off, C_D, 0, 0))
                else:
                    moves.append((off, C_D, di * width, dj))
            else:
                moves.append((off, C_HV, 0, 0))
    return np.array(moves, dtype=np.int64)


_OUTCOMES = {_kernel.FOUND: Outcome.FOUND, _kernel.BUDGET: Outcome.BUDGET_EXHAUSTED,
             _kernel.SPACE: Outcome.SPACE_EXHAUSTED}


def weighted_astar(grid: Grid, s: Cell, g: Cell, w=1, max_expansions: int | None = None) -> SearchResult:
    """Best-first search on f = g + w * octile(., goal).

    One step is one expansion; popping the goal is not counted. Ties on f go
    to the larger g, then to insertion order. Stale heap entries are skipped.
    """
    for c in (s, g):
        if not grid.passable(c):
            raise ValueError(f"endpoint {c} is out of bounds or blocked")
    if tuple(s) == tuple(g):
        raise ValueError("start and goal must differ")
    if max_expansions is not None and max_expansions < 1:
        raise ValueError("max_expansions must be >= 1")
    num, den = weight_ratio(w)
    t0 = time.perf_counter()

    width = grid.cols + 2
    blk = np.frombuffer(grid.padded, dtype=np.uint8)
    start = (s[0] + 1) * width + s[1] + 1
    goal = (g[0] + 1) * width + g[1] + 1
    ws = _kernel.workspace(len(blk))
    code, expansions, generated, n_seen, n_closed, lower = _kernel.wastar_kernel(
        blk, width, start, goal, num, den,
        -1 if max_expansions is None else max_expansions,
        _moves(width, grid.corner_cutting),
        ws.gcost, ws.seen, ws.closed, ws.parent, ws.epoch, C_HV, C_D,
    )
    outcome = _OUTCOMES[code]
    stats = SearchStats(
        expansions=expansions,
        generated=generated,
        open_size_final=n_seen - n_closed,
        closed_size_final=n_closed,
    )
    result = SearchResult(outcome, stats=stats)
    if outcome is Outcome.FOUND:
        result.path = [tuple(c) for c in _kernel.trace_path(ws.parent, goal, width).tolist()]
        result.length = int(ws.gcost[goal])
    elif outcome is Outcome.BUDGET_EXHAUSTED:
        result.lower_bound = lower
    stats.wall_time_ms = (time.perf_counter() - t0) * 1000.0
    return result


def astar(grid: Grid, s: Cell, g: Cell) -> SearchResult:
    return weighted_astar(grid, s, g, 1)


def dijkstra_oracle(grid: Grid, s: Cell, g: Cell) -> int | None:
    """Exact shortest path cost under the grid's move rules, or None if unreachable."""
    s, g = tuple(s), tuple(g)
    if s == g:
        return 0
    dist = {s: 0}
    heap = [(0, s)]
    done = set()
    while heap:
        d, c = heapq.heappop(heap)
        if c in done:
            continue
        if c == g:
            return d
        done.add(c)
        for n in neighbors8(grid, c):
            nd = d + (C_D if n[0] != c[0] and n[1] != c[1] else C_HV)
            if nd < dist.get(n, nd + 1):
                dist[n] = nd
                heapq.heappush(heap, (nd, n))
    return None
