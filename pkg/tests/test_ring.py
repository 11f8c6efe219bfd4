import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rstar_grid.grid import C_D, C_HV, Grid, octile_dist
from rstar_grid.ring import enumerate_ring, radius_for, ring_cells, sample_successors


def reference_ring(r):
    """Per-row midpoint rule: in the octant y <= x, x is the largest integer with
    (x - 1/2)^2 + y^2 <= r^2, i.e. (2x - 1)^2 <= 4 (r^2 - y^2)."""
    pts = set()
    y = 0
    while True:
        x = (math.isqrt(4 * (r * r - y * y)) + 1) // 2
        if x < y:
            break
        for a, b in ((x, y), (y, x)):
            pts.update({(a, b), (-a, b), (a, -b), (-a, -b)})
        y += 1
    return pts


def test_radius_one_is_axis_points():
    assert set(enumerate_ring(1)) == {(1, 0), (-1, 0), (0, 1), (0, -1)}


@pytest.mark.parametrize("r", list(range(1, 101)))
def test_matches_reference_rasterizer(r):
    assert set(enumerate_ring(r)) == reference_ring(r)


def test_radius_five_count():
    n = len(enumerate_ring(5))
    assert n == len(reference_ring(5))
    assert 25 <= n <= 30


def test_cardinality_band():
    for r in range(3, 101):
        assert 5 * r <= len(enumerate_ring(r)) <= 6 * r, r


@pytest.mark.parametrize("r", [1, 2, 5, 17, 60])
def test_dihedral_symmetry(r):
    pts = set(enumerate_ring(r))
    for di, dj in pts:
        for p in ((dj, di), (-di, dj), (di, -dj), (-di, -dj), (-dj, di), (dj, -di), (-dj, -di)):
            assert p in pts


@pytest.mark.parametrize("r", [1, 3, 10, 50])
def test_offsets_near_circle(r):
    for di, dj in enumerate_ring(r):
        assert abs(math.hypot(di, dj) - r) <= 1


def test_rejects_bad_radius():
    with pytest.raises(ValueError):
        enumerate_ring(0)


def test_ring_ordered_by_angle_and_deterministic():
    offs = enumerate_ring(7)
    angles = [math.atan2(di, dj) for di, dj in offs]
    assert angles == sorted(angles)
    assert len(set(offs)) == len(offs)
    enumerate_ring.cache_clear()
    assert enumerate_ring(7) == offs


def test_radius_conversion():
    assert radius_for(500) == 50
    assert radius_for(10) == 1
    assert radius_for(3) == 1
    assert radius_for(15) == 2
    assert radius_for(14) == 1


def test_ring_cells_corner_clipping():
    g = Grid.empty(10, 10)
    assert sorted(ring_cells(g, (0, 0), 1)) == [(0, 1), (1, 0)]


def test_ring_cells_open_space():
    g = Grid.empty(41, 41)
    cells = ring_cells(g, (20, 20), 5)
    assert cells == [(20 + di, 20 + dj) for di, dj in enumerate_ring(5)]


def test_ring_cells_walled():
    g = Grid.empty(21, 21)
    arr = g.to_array()
    for di, dj in enumerate_ring(5):
        arr[10 + di, 10 + dj] = True
    assert ring_cells(Grid.from_array(arr), (10, 10), 5) == []


def test_sample_clamps_to_ring():
    g = Grid.empty(41, 41)
    full = ring_cells(g, (20, 20), 3)
    assert sample_successors(g, (20, 20), 30, 1000, random.Random(0)) == full


def test_sample_three_of_28():
    g = Grid.empty(41, 41)
    ring = ring_cells(g, (20, 20), 5)
    assert len(ring) == 28
    out = sample_successors(g, (20, 20), 50, 3, random.Random(1))
    assert len(out) == 3 == len(set(out))
    assert set(out) <= set(ring)


def test_sample_deterministic_per_seed():
    g = Grid.empty(101, 101)
    a = sample_successors(g, (50, 50), 200, 10, random.Random(42))
    b = sample_successors(g, (50, 50), 200, 10, random.Random(42))
    assert a == b


@given(
    seed=st.integers(0, 2**32),
    r=st.integers(1, 30),
    k=st.integers(1, 60),
    ci=st.integers(0, 60),
    cj=st.integers(0, 60),
    density=st.floats(0, 0.6),
)
@settings(max_examples=150, deadline=None)
def test_sample_properties(seed, r, k, ci, cj, density):
    rng = random.Random(seed)
    arr = [[rng.random() < density for _ in range(61)] for _ in range(61)]
    g = Grid.from_array(arr)
    ring = ring_cells(g, (ci, cj), r)
    out = sample_successors(g, (ci, cj), r * C_HV, k, random.Random(seed))
    assert len(out) == min(k, len(ring))
    assert len(set(out)) == len(out)
    assert set(out) <= set(ring)
    for b in out:
        assert not g.is_blocked(b)
        assert C_HV * (r - 1) <= octile_dist((ci, cj), b) <= C_D * r
