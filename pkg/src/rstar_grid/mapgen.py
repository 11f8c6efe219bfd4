"""Procedural test maps: random rectangles or scaled tetrominoes up to a blocked fraction."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .grid import C_HV, Cell, Grid, octile_dist

# base shapes on a 4x4 canvas, (row, col) cells
TETROMINOES: dict[str, tuple[Cell, ...]] = {
    "I": ((0, 0), (0, 1), (0, 2), (0, 3)),
    "O": ((0, 0), (0, 1), (1, 0), (1, 1)),
    "T": ((0, 0), (0, 1), (0, 2), (1, 1)),
    "S": ((0, 1), (0, 2), (1, 0), (1, 1)),
    "Z": ((0, 0), (0, 1), (1, 1), (1, 2)),
    "L": ((0, 0), (1, 0), (2, 0), (2, 1)),
    "J": ((0, 1), (1, 1), (2, 1), (2, 0)),
}


def _tetromino_masks() -> list[tuple[str, int, np.ndarray]]:
    masks = []
    for name, cells in TETROMINOES.items():
        h = max(c[0] for c in cells) + 1
        w = max(c[1] for c in cells) + 1
        base = np.zeros((h, w), dtype=bool)
        for c in cells:
            base[c] = True
        for quarter in range(4):
            masks.append((name, quarter * 90, np.rot90(base, quarter)))
    return masks


_MASKS = _tetromino_masks()


@dataclass(frozen=True)
class RectangleSpec:
    w_min: int = 1
    w_max: int = 30
    h_min: int = 1
    h_max: int = 30

    @property
    def max_area(self) -> int:
        return self.w_max * self.h_max

    @property
    def min_extent(self) -> int:
        return min(self.w_min, self.h_min)


@dataclass(frozen=True)
class TetrominoSpec:
    scale_min: int = 1
    scale_max: int = 7

    @property
    def max_area(self) -> int:
        return 4 * self.scale_max ** 2

    @property
    def min_extent(self) -> int:
        return self.scale_min


@dataclass(frozen=True)
class GenConfig:
    rows: int = 501
    cols: int = 501
    blocked_threshold: float = 0.30
    obstacle_spec: RectangleSpec | TetrominoSpec = field(default_factory=RectangleSpec)
    seed: int = 0
    max_attempts: int | None = None

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("grid dimensions must be positive")
        if not 0 <= self.blocked_threshold < 1:
            raise ValueError("blocked_threshold must be in [0, 1)")
        o = self.obstacle_spec
        if isinstance(o, RectangleSpec):
            if not (1 <= o.w_min <= o.w_max and 1 <= o.h_min <= o.h_max):
                raise ValueError("rectangle size ranges must be nonempty and positive")
        elif not 1 <= o.scale_min <= o.scale_max:
            raise ValueError("tetromino scale range must be nonempty and positive")


def default_spec(family: str, rows: int, cols: int) -> RectangleSpec | TetrominoSpec:
    """Obstacle size ranges calibrated at 501x501 and scaled with the grid size."""
    side = min(rows, cols)
    if family == "rects":
        hi = max(1, round(30 * side / 501))
        return RectangleSpec(1, hi, 1, hi)
    if family == "tetris":
        return TetrominoSpec(1, max(1, round(7 * side / 501)))
    raise ValueError(f"unknown family {family!r}")


class GenerationError(RuntimeError):
    pass


@dataclass
class Stamp:
    kind: str
    row: int
    col: int
    height: int
    width: int
    rotation: int = 0
    scale: int = 1


def generate(config: GenConfig, rng: random.Random | None = None, log: list[Stamp] | None = None) -> Grid:
    """Drop obstacles one at a time until the blocked fraction reaches the threshold.

    Obstacles may overlap and are clipped at the border. ``log`` receives one
    Stamp per placed obstacle.
    """
    rng = rng if rng is not None else random.Random(config.seed)
    rows, cols = config.rows, config.cols
    spec = config.obstacle_spec
    if spec.min_extent > max(rows, cols):
        raise GenerationError("smallest obstacle is larger than the grid")
    arr = np.zeros((rows, cols), dtype=bool)
    target = config.blocked_threshold * rows * cols
    attempts = config.max_attempts or 50 * rows * cols
    blocked = 0
    n = 0
    while blocked < target:
        n += 1
        if n > attempts:
            raise GenerationError(f"threshold not reached after {attempts} obstacles")
        if isinstance(spec, RectangleSpec):
            h = rng.randint(spec.h_min, spec.h_max)
            w = rng.randint(spec.w_min, spec.w_max)
            rot = 0
            if rng.random() < 0.5:
                h, w = w, h
                rot = 90
            mask = np.ones((h, w), dtype=bool)
            stamp = Stamp("rect", 0, 0, h, w, rot)
        else:
            name, rot, base = _MASKS[rng.randrange(len(_MASKS))]
            scale = rng.randint(spec.scale_min, spec.scale_max)
            mask = np.kron(base, np.ones((scale, scale), dtype=bool))
            stamp = Stamp(name, 0, 0, mask.shape[0], mask.shape[1], rot, scale)
        i = rng.randrange(rows)
        j = rng.randrange(cols)
        stamp.row, stamp.col = i, j
        sub = arr[i:i + mask.shape[0], j:j + mask.shape[1]]
        m = mask[:sub.shape[0], :sub.shape[1]]
        blocked += int(np.count_nonzero(m & ~sub))
        sub |= m
        if log is not None:
            log.append(stamp)
    return Grid.from_array(arr)


@dataclass(frozen=True)
class TaskSpec:
    s: Cell
    g: Cell
    target_dist: int


class PlacementError(RuntimeError):
    pass


def components(grid: Grid) -> np.ndarray:
    """Connected-component labels of free cells (0 = blocked).

    Without corner cutting a legal diagonal step can be replaced by two
    orthogonal ones, so reachability is 4-connectivity; with it, 8.
    """
    structure = np.ones((3, 3), dtype=bool) if grid.corner_cutting else None
    labels, _ = ndimage.label(~grid.to_array(), structure=structure)
    return labels


def reachable(grid: Grid, a: Cell, b: Cell) -> bool:
    if not (grid.passable(a) and grid.passable(b)):
        return False
    labels = components(grid)
    return labels[a] == labels[b]


def place_task(grid: Grid, target_dist: int, rng: random.Random, max_tries: int | None = None) -> TaskSpec:
    """Start and goal on opposite edges at exactly ``target_dist``, mutually reachable."""
    if target_dist == C_HV * (grid.cols - 1):
        lines, n = grid.rows, grid.cols

        def ends(r):
            return (r, 0), (r, n - 1)
    elif target_dist == C_HV * (grid.rows - 1):
        lines, n = grid.cols, grid.rows

        def ends(r):
            return (0, r), (n - 1, r)
    else:
        raise ValueError(f"target_dist {target_dist} does not span the grid edge to edge")
    labels = components(grid)
    order = list(range(lines))
    rng.shuffle(order)
    tries = lines if max_tries is None else min(max_tries, lines)
    for r in order[:tries]:
        s, g = ends(r)
        if labels[s] and labels[s] == labels[g]:
            assert octile_dist(s, g) == target_dist
            return TaskSpec(s, g, target_dist)
    raise PlacementError("no reachable opposite-edge placement")
