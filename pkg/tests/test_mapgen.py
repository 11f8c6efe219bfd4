import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rstar_grid.grid import Grid, octile_dist
from rstar_grid.mapgen import (
    _MASKS,
    GenConfig,
    GenerationError,
    PlacementError,
    RectangleSpec,
    TetrominoSpec,
    components,
    default_spec,
    generate,
    place_task,
    reachable,
)
from rstar_grid.search import dijkstra_oracle


def test_threshold_zero_is_empty():
    log = []
    g = generate(GenConfig(20, 20, 0.0), log=log)
    assert g.blocked_fraction == 0 and log == []


def test_full_scale_rectangles_band():
    cfg = GenConfig(501, 501, 0.30, RectangleSpec(), seed=1)
    g = generate(cfg)
    assert 0.30 <= g.blocked_fraction < 0.30 + 30 * 30 / 501 ** 2


@pytest.mark.parametrize("spec", [RectangleSpec(1, 6, 1, 6), TetrominoSpec(1, 3)])
def test_same_seed_same_grid(spec):
    cfg = GenConfig(80, 60, 0.3, spec, seed=9)
    assert generate(cfg) == generate(cfg)
    assert generate(cfg) != generate(GenConfig(80, 60, 0.3, spec, seed=10))


@given(st.integers(0, 2**32), st.floats(0.05, 0.5), st.booleans())
@settings(max_examples=40, deadline=None)
def test_blocked_fraction_band(seed, threshold, tetris):
    spec = TetrominoSpec(1, 3) if tetris else RectangleSpec(1, 5, 1, 5)
    g = generate(GenConfig(40, 50, threshold, spec, seed=seed))
    assert threshold <= g.blocked_fraction < threshold + spec.max_area / (40 * 50)


def test_tetris_grid_is_union_of_logged_stamps():
    log = []
    cfg = GenConfig(60, 60, 0.3, TetrominoSpec(1, 3), seed=4)
    g = generate(cfg, log=log)
    masks = {(name, rot): m for name, rot, m in _MASKS}
    rebuilt = np.zeros((60, 60), dtype=bool)
    for s in log:
        assert s.kind in "IOTSZLJ" and s.rotation in (0, 90, 180, 270)
        m = np.kron(masks[s.kind, s.rotation], np.ones((s.scale, s.scale), dtype=bool))
        assert m.shape == (s.height, s.width)
        sub = rebuilt[s.row:s.row + s.height, s.col:s.col + s.width]
        sub |= m[:sub.shape[0], :sub.shape[1]]
    assert (rebuilt == g.to_array()).all()


def test_masks_cover_seven_shapes_four_rotations():
    assert len(_MASKS) == 28
    assert all(m.sum() == 4 for _, _, m in _MASKS)


def test_rectangle_stamps_within_bounds():
    log = []
    generate(GenConfig(50, 50, 0.2, RectangleSpec(2, 4, 5, 7), seed=2), log=log)
    for s in log:
        h, w = (s.height, s.width) if s.rotation == 0 else (s.width, s.height)
        assert 5 <= h <= 7 and 2 <= w <= 4


def test_oversized_obstacles_rejected():
    with pytest.raises(GenerationError):
        generate(GenConfig(5, 5, 0.3, RectangleSpec(9, 9, 9, 9)))


def test_attempt_cap():
    with pytest.raises(GenerationError):
        generate(GenConfig(50, 50, 0.9, RectangleSpec(1, 1, 1, 1), max_attempts=10))


def test_bad_config():
    with pytest.raises(ValueError):
        GenConfig(10, 10, 1.0)
    with pytest.raises(ValueError):
        GenConfig(10, 10, 0.3, RectangleSpec(3, 2))


def test_default_spec_scaling():
    assert default_spec("rects", 501, 501) == RectangleSpec(1, 30, 1, 30)
    assert default_spec("tetris", 501, 501) == TetrominoSpec(1, 7)
    assert default_spec("rects", 201, 201) == RectangleSpec(1, 12, 1, 12)
    with pytest.raises(ValueError):
        default_spec("city", 10, 10)


def test_place_task_empty():
    g = Grid.empty(501, 501)
    t = place_task(g, 5000, random.Random(0))
    assert t.s == (t.s[0], 0) and t.g == (t.s[0], 500)
    assert octile_dist(t.s, t.g) == 5000


def test_place_task_same_seed():
    g = generate(GenConfig(60, 60, 0.3, RectangleSpec(1, 4, 1, 4), seed=3))
    assert place_task(g, 590, random.Random(8)) == place_task(g, 590, random.Random(8))


def test_place_task_vertical_wall():
    arr = np.zeros((20, 20), dtype=bool)
    arr[:, 10] = True
    with pytest.raises(PlacementError):
        place_task(Grid.from_array(arr), 190, random.Random(0))


def test_place_task_column_fallback():
    g = Grid.empty(10, 30)
    t = place_task(g, 90, random.Random(1))
    assert t.s[0] == 0 and t.g[0] == 9 and t.s[1] == t.g[1]
    with pytest.raises(ValueError):
        place_task(g, 123, random.Random(1))


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_placed_tasks_are_solvable(seed):
    g = generate(GenConfig(30, 30, 0.3, RectangleSpec(1, 4, 1, 4), seed=seed))
    try:
        t = place_task(g, 290, random.Random(seed))
    except PlacementError:
        return
    assert dijkstra_oracle(g, t.s, t.g) is not None


def test_reachability_matches_oracle():
    rng = random.Random(0)
    for k in range(15):
        g = generate(GenConfig(25, 25, 0.35, RectangleSpec(1, 3, 1, 3), seed=k))
        if k % 2:
            g = g.with_corner_cutting(True)
        free = [(i, j) for i in range(25) for j in range(25) if not g.is_blocked((i, j))]
        for _ in range(10):
            a, b = rng.sample(free, 2)
            assert reachable(g, a, b) == (dijkstra_oracle(g, a, b) is not None)


def test_components_diagonal_gap():
    g = Grid.from_strings([".@", "@."])
    assert not reachable(g, (0, 0), (1, 1))
    assert reachable(g.with_corner_cutting(True), (0, 0), (1, 1))
    assert components(g)[0, 1] == 0
