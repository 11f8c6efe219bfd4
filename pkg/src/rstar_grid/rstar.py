"""R*: sparse randomized search over ring waypoints with WA* local planning.

States whose local path cannot be found within the step budget are marked
AVOID and kept in OPEN; they are only selected once no other state remains,
and each retry multiplies the budget by ``escalation``.
"""

from __future__ import annotations

import enum
import heapq
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from typing import IO, Callable

from .grid import C_D, C_HV, Cell, Grid, octile_dist, path_length
from .ring import radius_for, sample_successors
from .search import Outcome, weight_ratio, weighted_astar


def round_half_up(num: int, den: int = 1) -> int:
    """num / den rounded half up, for nonnegative integers."""
    return (2 * num + den) // (2 * den)


@dataclass(frozen=True)
class RStarParams:
    delta: int
    k_succ: int
    m_budget: int
    w: float | Fraction = 3
    escalation: int = 2

    @property
    def radius(self) -> int:
        return radius_for(self.delta)


def k_upper_bound(delta: int) -> int:
    return math.ceil(6 * delta / C_HV)


def m_lower_bound(delta: int) -> int:
    return round_half_up(delta, C_HV)


def validate_params(p: RStarParams) -> list[str]:
    """Every violated bound as a human-readable formula; empty when valid."""
    violations = []
    if p.delta < C_HV:
        violations.append(f"Δ ≥ c_hv = {C_HV}")
    if p.k_succ < 3:
        violations.append("K ≥ 3")
    if p.delta >= C_HV and p.k_succ > k_upper_bound(p.delta):
        violations.append(f"K ≤ 6·Δ/10 = {k_upper_bound(p.delta)}")
    if p.m_budget < max(1, m_lower_bound(p.delta)):
        violations.append(f"m ≥ Δ/10 = {max(1, m_lower_bound(p.delta))}")
    if Fraction(p.w).limit_denominator(10_000) < 1:
        violations.append("w ≥ 1")
    if p.escalation < 2:
        violations.append("escalation ≥ 2")
    return violations


def auto_params(s: Cell, g: Cell, w=3, escalation: int = 2) -> RStarParams:
    """Start/goal-only parameter rules: Δ = dist/10, K = max(10, Δ/20), m = Δ/5."""
    if tuple(s) == tuple(g):
        raise ValueError("start and goal must differ")
    dist = octile_dist(s, g)
    delta = max(C_HV, round_half_up(dist, 10 * C_HV) * C_HV)
    k = min(max(10, round_half_up(delta, 20)), k_upper_bound(delta))
    m = max(m_lower_bound(delta), round_half_up(delta, 5))
    return RStarParams(delta, k, m, w, escalation)


class LocalStatus(str, enum.Enum):
    NONE_NEEDED = "none_needed"
    PENDING = "pending"
    SOLVED = "solved"
    FAILED = "failed"


@dataclass(eq=False)
class SparseState:
    cell: Cell
    pred: SparseState | None
    g_cost: int
    h_cost: int
    avoid: bool = False
    local_status: LocalStatus = LocalStatus.PENDING
    local_path: list[Cell] | None = None
    retry_count: int = 0
    closed: bool = False
    in_open: bool = False
    version: int = 0


@dataclass
class RStarStats:
    sparse_states: int = 0
    expansions: int = 0
    local_searches: int = 0
    failed_local: int = 0
    local_cells: int = 0
    wall_time_ms: float = 0.0
    length: int | None = None

    @property
    def cells(self) -> int:
        return self.sparse_states + self.local_cells


@dataclass
class RStarResult:
    outcome: Outcome
    path: list[Cell] = field(default_factory=list)
    stats: RStarStats = field(default_factory=RStarStats)

    @property
    def found(self) -> bool:
        return self.outcome is Outcome.FOUND


@dataclass(frozen=True)
class TraceEvent:
    step: int
    cell: Cell
    f: Fraction
    g: int
    avoid: bool
    event: str
    # non-AVOID states left in OPEN after this selection
    open_clear: int
    local_cells: int = 0

    def line(self) -> str:
        f = self.f
        ftxt = str(f.numerator) if f.denominator == 1 else f"{float(f):.4f}"
        return f"{self.step} {self.cell[0]} {self.cell[1]} {ftxt} {self.g} {int(self.avoid)} {self.event}"


def reconstruct(goal_state: SparseState) -> list[Cell]:
    chain = []
    st = goal_state
    while st.pred is not None:
        if st.local_status is not LocalStatus.SOLVED or not st.local_path:
            raise RuntimeError(f"state {st.cell} has no solved local path")
        chain.append(st.local_path)
        st = st.pred
    if st.local_status is not LocalStatus.NONE_NEEDED:
        raise RuntimeError("chain does not end at the start state")
    if not chain:
        return [st.cell]
    chain.reverse()
    path = list(chain[0])
    for seg in chain[1:]:
        if seg[0] != path[-1]:
            raise RuntimeError(f"local paths do not join at {path[-1]}")
        path.extend(seg[1:])
    return path


class RStarPlanner:
    """One planning episode. Use :func:`rstar_plan` unless you need the trace."""

    def __init__(self, grid: Grid, s: Cell, g: Cell, params: RStarParams,
                 rng: random.Random | int | None = None,
                 on_event: Callable[[TraceEvent], None] | None = None):
        problems = validate_params(params)
        if problems:
            raise ValueError("invalid R* parameters: " + "; ".join(problems))
        s, g = tuple(s), tuple(g)
        for c in (s, g):
            if not grid.passable(c):
                raise ValueError(f"endpoint {c} is out of bounds or blocked")
        if s == g:
            raise ValueError("start and goal must differ")
        self.grid, self.start, self.goal, self.params = grid, s, g, params
        self.rng = rng if isinstance(rng, random.Random) else random.Random(rng)
        self.on_event = on_event
        self.num, self.den = weight_ratio(params.w)
        self.budget_cap = grid.rows * grid.cols
        self.states: dict[Cell, SparseState] = {}
        self.heap: list = []
        self.tie = count()
        self.open_clear = 0
        self.stats = RStarStats()
        self.step = 0

    def _key(self, st: SparseState) -> int:
        return st.g_cost * self.den + self.num * st.h_cost

    def _push(self, st: SparseState) -> None:
        if st.in_open and not st.avoid:
            self.open_clear -= 1
        st.version += 1
        st.in_open = True
        if not st.avoid:
            self.open_clear += 1
        heapq.heappush(self.heap, (st.avoid, self._key(st), -st.g_cost, next(self.tie), st.version, st))

    def _pop(self) -> SparseState | None:
        while self.heap:
            *_, version, st = heapq.heappop(self.heap)
            if st.in_open and version == st.version:
                st.in_open = False
                if not st.avoid:
                    self.open_clear -= 1
                return st
        return None

    def _emit(self, st: SparseState, event: str, local_cells: int = 0) -> None:
        if self.on_event is not None:
            f = Fraction(self._key(st), self.den)
            self.on_event(TraceEvent(self.step, st.cell, f, st.g_cost, st.avoid, event,
                                     self.open_clear, local_cells))

    def _new_state(self, cell: Cell, pred: SparseState | None, g_cost: int) -> SparseState:
        st = SparseState(cell, pred, g_cost, octile_dist(cell, self.goal))
        self.states[cell] = st
        return st

    def _solve_local(self, st: SparseState) -> None:
        p = self.params
        budget = min(p.m_budget * p.escalation ** st.retry_count, self.budget_cap)
        res = weighted_astar(self.grid, st.pred.cell, st.cell, p.w, budget)
        self.stats.local_searches += 1
        self.stats.local_cells += res.stats.cells
        if res.found:
            st.local_status = LocalStatus.SOLVED
            st.local_path = res.path
            st.g_cost = st.pred.g_cost + res.length
            st.avoid = False
            self._emit(st, "solved", res.stats.cells)
            self._push(st)
            return
        self.stats.failed_local += 1
        if res.outcome is Outcome.SPACE_EXHAUSTED:
            # the grid is undirected and pred is reachable from start: cell never is
            st.local_status = LocalStatus.FAILED
            self._emit(st, "unreachable", res.stats.cells)
            return
        # raise g to the failed search's lower bound so a cheaper predecessor can take over
        st.g_cost = max(st.g_cost, st.pred.g_cost + res.lower_bound)
        st.avoid = True
        st.retry_count += 1
        self._emit(st, "avoid", res.stats.cells)
        self._push(st)

    def _expand(self, st: SparseState) -> None:
        p = self.params
        st.closed = True
        self.stats.expansions += 1
        self._emit(st, "expand")
        succ = sample_successors(self.grid, st.cell, p.delta, p.k_succ, self.rng)
        if octile_dist(st.cell, self.goal) <= p.delta:
            succ.append(self.goal)
        states = self.states
        g0 = st.g_cost
        ci, cj = st.cell
        for cell in succ:
            di = abs(cell[0] - ci)
            dj = abs(cell[1] - cj)
            est = g0 + (C_D * di + C_HV * (dj - di) if di < dj else C_D * dj + C_HV * (di - dj))
            other = states.get(cell)
            if other is None:
                self._push(self._new_state(cell, st, est))
                continue
            if other.closed or other.local_status is LocalStatus.FAILED:
                continue
            if est < other.g_cost:
                other.pred = st
                other.g_cost = est
                other.local_status = LocalStatus.PENDING
                other.local_path = None
                other.retry_count = 0
                if other.avoid and other.in_open:
                    other.in_open = False
                other.avoid = False
                self._push(other)

    def plan(self) -> RStarResult:
        t0 = time.perf_counter()
        start = self._new_state(self.start, None, 0)
        start.local_status = LocalStatus.NONE_NEEDED
        self._push(start)
        result = RStarResult(Outcome.SPACE_EXHAUSTED)
        while True:
            st = self._pop()
            if st is None:
                break
            self.step += 1
            if st.local_status is LocalStatus.PENDING:
                self._solve_local(st)
                continue
            if st.cell == self.goal:
                self._emit(st, "goal")
                result.outcome = Outcome.FOUND
                result.path = reconstruct(st)
                break
            self._expand(st)
        self.stats.sparse_states = len(self.states)
        if result.found:
            self.stats.length = path_length(result.path)
        self.stats.wall_time_ms = (time.perf_counter() - t0) * 1000.0
        result.stats = self.stats
        return result


def rstar_plan(grid: Grid, s: Cell, g: Cell, params: RStarParams,
               rng: random.Random | int | None = None,
               trace: IO[str] | None = None) -> RStarResult:
    """Plan from s to g; optionally write one trace line per selection event."""
    hook = None
    if trace is not None:
        def hook(ev: TraceEvent) -> None:
            trace.write(ev.line() + "\n")
    return RStarPlanner(grid, s, g, params, rng, hook).plan()
