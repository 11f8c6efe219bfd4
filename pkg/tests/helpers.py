import random

from rstar_grid.mapgen import GenConfig, RectangleSpec, generate


def small_corpus(n, seed=0, size=30, threshold=0.3):
    """n seeded size x size rectangle grids with a random free start and goal each."""
    out = []
    for k in range(n):
        rng = random.Random(seed * 100_003 + k)
        grid = generate(GenConfig(size, size, threshold, RectangleSpec(1, 4, 1, 4), seed=k), rng)
        free = [(i, j) for i in range(size) for j in range(size) if not grid.is_blocked((i, j))]
        s, g = rng.sample(free, 2)
        out.append((grid, s, g))
    return out


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def report(n: int, ok: bool, detail: str) -> bool:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok
