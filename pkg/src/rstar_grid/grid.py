"""Grid world: cells, the octile metric, paths and the map text format."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path as FsPath
from typing import Iterable, Sequence

import numpy as np

C_HV = 10
C_D = 14

Cell = tuple[int, int]

# row-major over the 8 offsets
OFFSETS: tuple[Cell, ...] = (
    (-1, -1), (-1, 0), (-1, 1),
    (0, -1), (0, 1),
    (1, -1), (1, 0), (1, 1),
)

FREE = "."
BLOCKED = "@"


class InvalidPathError(ValueError):
    def __init__(self, step: int, message: str):
        super().__init__(f"step {step}: {message}")
        self.step = step


class MapFormatError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def octile_dist(a: Cell, b: Cell) -> int:
    di = abs(a[0] - b[0])
    dj = abs(a[1] - b[1])
    if di < dj:
        return C_D * di + C_HV * (dj - di)
    return C_D * dj + C_HV * (di - dj)


def step_cost(a: Cell, b: Cell) -> int:
    """Cost of one move between 8-adjacent cells; raises ValueError otherwise."""
    di = abs(a[0] - b[0])
    dj = abs(a[1] - b[1])
    if di > 1 or dj > 1 or di + dj == 0:
        raise ValueError(f"{a} and {b} are not 8-adjacent")
    return C_D if di and dj else C_HV


def path_length(path: Sequence[Cell]) -> int:
    total = 0
    for k in range(1, len(path)):
        try:
            total += step_cost(path[k - 1], path[k])
        except ValueError as exc:
            raise InvalidPathError(k, str(exc)) from None
    return total


@dataclass(frozen=True)
class Grid:
    """Immutable M x N traversability field, origin top-left, (row, col) indexing.

    ``blocked`` is row-major, one byte per cell (1 = un-traversable).
    Diagonal moves past a blocked orthogonal neighbour are illegal unless
    ``corner_cutting`` is set.
    """

    rows: int
    cols: int
    blocked: bytes
    corner_cutting: bool = False
    # blocked mask with a one-cell blocked border; lets planners skip bounds checks
    padded: bytes = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("grid dimensions must be positive")
        blocked = self.blocked
        if not isinstance(blocked, bytes) or not set(blocked) <= {0, 1}:
            blocked = bytes(1 if b else 0 for b in blocked)
        if len(blocked) != self.rows * self.cols:
            raise ValueError("blocked mask size does not match dimensions")
        object.__setattr__(self, "blocked", blocked)
        w = self.cols + 2
        pad = bytearray(b"\x01" * (w * (self.rows + 2)))
        for i in range(self.rows):
            start = (i + 1) * w + 1
            pad[start:start + self.cols] = blocked[i * self.cols:(i + 1) * self.cols]
        object.__setattr__(self, "padded", bytes(pad))

    @classmethod
    def empty(cls, rows: int, cols: int, corner_cutting: bool = False) -> Grid:
        return cls(rows, cols, bytes(rows * cols), corner_cutting)

    @classmethod
    def from_array(cls, arr, corner_cutting: bool = False) -> Grid:
        a = np.asarray(arr, dtype=bool)
        if a.ndim != 2:
            raise ValueError("expected a 2D array")
        return cls(a.shape[0], a.shape[1], a.astype(np.uint8).tobytes(), corner_cutting)

    @classmethod
    def from_strings(cls, lines: Iterable[str], corner_cutting: bool = False) -> Grid:
        lines = list(lines)
        return cls.from_array([[ch == BLOCKED for ch in ln] for ln in lines], corner_cutting)

    def to_array(self) -> np.ndarray:
        return np.frombuffer(self.blocked, dtype=np.uint8).reshape(self.rows, self.cols).astype(bool)

    def with_corner_cutting(self, allowed: bool) -> Grid:
        return Grid(self.rows, self.cols, self.blocked, allowed)

    def in_bounds(self, c: Cell) -> bool:
        return 0 <= c[0] < self.rows and 0 <= c[1] < self.cols

    def is_blocked(self, c: Cell) -> bool:
        return self.padded[(c[0] + 1) * (self.cols + 2) + c[1] + 1] == 1

    def passable(self, c: Cell) -> bool:
        return self.in_bounds(c) and not self.is_blocked(c)

    @property
    def blocked_fraction(self) -> float:
        return sum(self.blocked) / (self.rows * self.cols)

    def move_allowed(self, a: Cell, b: Cell) -> bool:
        """True if a single step a -> b is legal (both cells free, corner rule)."""
        if not (self.passable(a) and self.passable(b)):
            return False
        di, dj = b[0] - a[0], b[1] - a[1]
        if max(abs(di), abs(dj)) != 1:
            return False
        if di and dj and not self.corner_cutting:
            return self.passable((a[0] + di, a[1])) and self.passable((a[0], a[1] + dj))
        return True


def neighbors8(grid: Grid, c: Cell) -> list[Cell]:
    if not grid.passable(c):
        raise ValueError(f"cell {c} is out of bounds or blocked")
    i, j = c
    out = []
    for di, dj in OFFSETS:
        n = (i + di, j + dj)
        if not grid.passable(n):
            continue
        if di and dj and not grid.corner_cutting:
            if grid.is_blocked((i + di, j)) or grid.is_blocked((i, j + dj)):
                continue
        out.append(n)
    return out


def check_path(grid: Grid, path: Sequence[Cell]) -> None:
    """Raise InvalidPathError unless every cell is free and every step legal."""
    if not path:
        raise InvalidPathError(0, "empty path")
    if not grid.passable(path[0]):
        raise InvalidPathError(0, f"cell {path[0]} is not traversable")
    for k in range(1, len(path)):
        if not grid.move_allowed(path[k - 1], path[k]):
            raise InvalidPathError(k, f"illegal move {path[k - 1]} -> {path[k]}")


def is_valid_path(grid: Grid, path: Sequence[Cell], start: Cell | None = None, goal: Cell | None = None) -> bool:
    try:
        check_path(grid, path)
    except InvalidPathError:
        return False
    if start is not None and tuple(path[0]) != tuple(start):
        return False
    if goal is not None and tuple(path[-1]) != tuple(goal):
        return False
    return True


def save_map(grid: Grid) -> str:
    lines = ["type octile", f"height {grid.rows}", f"width {grid.cols}", "map"]
    b = grid.blocked
    for i in range(grid.rows):
        row = b[i * grid.cols:(i + 1) * grid.cols]
        lines.append("".join(BLOCKED if x else FREE for x in row))
    return "\n".join(lines) + "\n"


def _header_value(lines: list[str], idx: int, key: str) -> int:
    if idx >= len(lines):
        raise MapFormatError(idx + 1, f"missing '{key}' header")
    parts = lines[idx].split()
    if len(parts) != 2 or parts[0] != key:
        raise MapFormatError(idx + 1, f"expected '{key} <int>', got {lines[idx]!r}")
    try:
        value = int(parts[1])
    except ValueError:
        raise MapFormatError(idx + 1, f"bad {key} value {parts[1]!r}") from None
    if value < 1:
        raise MapFormatError(idx + 1, f"{key} must be positive")
    return value


def load_map(text: str, corner_cutting: bool = False) -> Grid:
    lines = [ln.rstrip() for ln in text.splitlines()]
    if not lines or lines[0].split() != ["type", "octile"]:
        raise MapFormatError(1, "expected 'type octile'")
    rows = _header_value(lines, 1, "height")
    cols = _header_value(lines, 2, "width")
    if len(lines) < 4 or lines[3] != "map":
        raise MapFormatError(4, "expected 'map'")
    body = lines[4:]
    while body and body[-1] == "" and len(body) > rows:
        body.pop()
    if len(body) != rows:
        raise MapFormatError(4 + len(body), f"expected {rows} map rows, found {len(body)}")
    blocked = bytearray(rows * cols)
    for r, ln in enumerate(body):
        lineno = r + 5
        if len(ln) != cols:
            raise MapFormatError(lineno, f"row {r} has {len(ln)} cells, expected {cols}")
        for c, ch in enumerate(ln):
            if ch == BLOCKED:
                blocked[r * cols + c] = 1
            elif ch != FREE:
                raise MapFormatError(lineno, f"unknown glyph {ch!r} at column {c}")
    return Grid(rows, cols, bytes(blocked), corner_cutting)


def read_map(path: str | FsPath, corner_cutting: bool = False) -> Grid:
    return load_map(FsPath(path).read_text(encoding="utf-8"), corner_cutting)


def write_map(path: str | FsPath, grid: Grid) -> None:
    FsPath(path).write_text(save_map(grid), encoding="utf-8", newline="\n")
