"""Corpus manifests, the three parameter-sweep series, sweep execution and aggregation."""

from __future__ import annotations

import csv
import hashlib
import io
import logging
import math
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, Sequence

from .grid import C_HV, Grid, octile_dist, read_map, write_map
from .mapgen import GenConfig, PlacementError, default_spec, generate, place_task
from .rstar import RStarParams, k_upper_bound, m_lower_bound, round_half_up, rstar_plan, validate_params

log = logging.getLogger(__name__)

REFERENCE_DIST = 5000
M_VALUES = (50, 75, 100, 200, 300, 500, 750, 1000)
K_VALUES = (3, 5, 7, 10, 25, 50, 70, 100)
DELTA_VALUES = (50, 100, 200, 300, 500, 750, 1000, 1500, 2500)
SERIES_NAMES = ("m_series", "k_series", "delta_series")


# ---------------------------------------------------------------- manifest

@dataclass(frozen=True)
class ManifestEntry:
    map_id: str
    family: str
    seed: int
    rows: int
    cols: int
    blocked_fraction: float
    s_i: int
    s_j: int
    g_i: int
    g_j: int
    file: str

    @property
    def start(self) -> tuple[int, int]:
        return (self.s_i, self.s_j)

    @property
    def goal(self) -> tuple[int, int]:
        return (self.g_i, self.g_j)

    def line(self) -> str:
        return (f"{self.map_id} {self.family} {self.seed} {self.rows} {self.cols} "
                f"{self.blocked_fraction:.6f} {self.s_i} {self.s_j} {self.g_i} {self.g_j} {self.file}")


def parse_manifest(text: str) -> list[ManifestEntry]:
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        ln = raw.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if len(parts) != 11:
            raise ValueError(f"manifest line {n}: expected 11 fields, got {len(parts)}")
        mid, fam, seed, rows, cols, frac, si, sj, gi, gj, fname = parts
        out.append(ManifestEntry(mid, fam, int(seed), int(rows), int(cols), float(frac),
                                 int(si), int(sj), int(gi), int(gj), fname))
    return out


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    return parse_manifest(Path(path).read_text(encoding="utf-8"))


def write_manifest(path: str | Path, entries: Iterable[ManifestEntry]) -> None:
    text = "".join(e.line() + "\n" for e in entries)
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def derive_seed(*parts) -> int:
    """64-bit seed from a named hash of the parts; stable across runs and platforms."""
    h = hashlib.blake2b(":".join(str(p) for p in parts).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


def build_corpus(out_dir: str | Path, family: str, rows: int, cols: int, threshold: float,
                 count: int, seed: int, max_regen: int = 100) -> list[ManifestEntry]:
    """Generate ``count`` maps with solvable edge-to-edge tasks and merge them into
    ``out_dir/manifest.txt`` (entries of the same family are replaced)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    spec = default_spec(family, rows, cols)
    target = C_HV * (cols - 1)
    new = []
    for idx in range(count):
        map_id = f"{family}-{idx:03d}"
        for attempt in range(max_regen):
            map_seed = derive_seed(seed, family, idx, attempt)
            rng = random.Random(map_seed)
            grid = generate(GenConfig(rows, cols, threshold, spec, map_seed), rng)
            try:
                task = place_task(grid, target, rng)
            except PlacementError:
                continue
            break
        else:
            raise PlacementError(f"{map_id}: no solvable map after {max_regen} attempts")
        fname = f"{map_id}.map"
        write_map(out / fname, grid)
        new.append(ManifestEntry(map_id, family, map_seed, rows, cols, grid.blocked_fraction,
                                 task.s[0], task.s[1], task.g[0], task.g[1], fname))
    manifest = out / "manifest.txt"
    kept = [e for e in read_manifest(manifest) if e.family != family] if manifest.exists() else []
    entries = sorted(kept + new, key=lambda e: e.map_id)
    write_manifest(manifest, entries)
    return new


# ---------------------------------------------------------------- series

@dataclass(frozen=True)
class SweepConfig:
    series: str
    value: int  # nominal (scaled, unclamped) value of the varied parameter
    params: RStarParams


@dataclass(frozen=True)
class SweepSeries:
    name: str
    varying: str
    values: tuple[int, ...]
    configs: tuple[SweepConfig, ...]


def _scaled(v: float, sigma: float) -> int:
    return max(0, math.floor(v * sigma + 0.5))


def _point(series: str, value: int, delta: int, k: int, m: int, w) -> SweepConfig:
    delta = max(C_HV, delta)
    k = min(max(3, k), k_upper_bound(delta))
    m = max(m, m_lower_bound(delta), 1)
    return SweepConfig(series, value, RStarParams(delta, k, m, w))


def default_series(reference_dist: int = REFERENCE_DIST, w=3) -> list[SweepSeries]:
    """The m, K and Δ sweeps, scaled by reference_dist / 5000 and clamped to the parameter bounds.

    Clamping may map several nominal points onto the same parameters; a series
    that collapses to a single distinct configuration is an error.
    """
    if reference_dist <= 0:
        raise ValueError("reference_dist must be positive")
    sigma = reference_dist / REFERENCE_DIST
    delta0 = _scaled(500, sigma)
    series = []

    m_pts = tuple(_scaled(v, sigma) for v in M_VALUES)
    k0 = round_half_up(delta0, 10)
    series.append(SweepSeries("m_series", "m_budget", m_pts, tuple(
        _point("m_series", m, delta0, k0, m, w) for m in m_pts)))

    k_pts = tuple(_scaled(v, sigma) for v in K_VALUES)
    m0 = round_half_up(delta0, 5)
    series.append(SweepSeries("k_series", "k_succ", k_pts, tuple(
        _point("k_series", k, delta0, k, m0, w) for k in k_pts)))

    d_pts = tuple(_scaled(v, sigma) for v in DELTA_VALUES)
    series.append(SweepSeries("delta_series", "delta", d_pts, tuple(
        _point("delta_series", d, d, round_half_up(d, 20), round_half_up(d, 5), w) for d in d_pts)))

    collapsed = [s.name for s in series if len({c.params for c in s.configs}) < 2]
    if collapsed:
        raise ValueError(f"scale {sigma:g} collapses series {collapsed}: "
                         + "; ".join(f"{s.name}={s.values}" for s in series if s.name in collapsed))
    for s in series:
        for c in s.configs:
            problems = validate_params(c.params)
            if problems:
                raise ValueError(f"{s.name} point {c.value}: {problems}")
    return series


def flatten(series: Sequence[SweepSeries]) -> list[SweepConfig]:
    return [c for s in series for c in s.configs]


# ---------------------------------------------------------------- runs

@dataclass
class RunRecord:
    map_id: str
    family: str
    seed: int
    algo: str
    series: str
    value: int
    delta: int
    k_succ: int
    m_budget: int
    w: str
    solved: int
    length: int
    cells: int
    time_ms: float
    sparse_states: int
    local_searches: int
    failed_local: int


CSV_FIELDS = tuple(f.name for f in fields(RunRecord))
_INT_FIELDS = {"seed", "value", "delta", "k_succ", "m_budget", "solved", "length", "cells",
               "sparse_states", "local_searches", "failed_local"}


def _run_one(job) -> RunRecord:
    entry, grid, cfg, run_seed = job
    p = cfg.params
    res = rstar_plan(grid, entry.start, entry.goal, p, random.Random(run_seed))
    st = res.stats
    return RunRecord(entry.map_id, entry.family, run_seed, "rstar", cfg.series, cfg.value,
                     p.delta, p.k_succ, p.m_budget, str(p.w), int(res.found),
                     st.length if res.found else 0, st.cells, round(st.wall_time_ms, 3),
                     st.sparse_states, st.local_searches, st.failed_local)


_WORKER_GRIDS: dict[str, Grid] = {}


def _run_in_worker(job) -> RunRecord:
    entry, path, cfg, run_seed = job
    grid = _WORKER_GRIDS.get(path)
    if grid is None:
        grid = _WORKER_GRIDS[path] = read_map(path)
    return _run_one((entry, grid, cfg, run_seed))


def run_sweep(manifest: str | Path | Sequence[ManifestEntry], configs: Sequence[SweepConfig],
              reps: int = 3, base_seed: int = 0, workers: int = 1,
              base_dir: str | Path | None = None) -> list[RunRecord]:
    """One RunRecord per (map, config, repetition), in that canonical order."""
    if isinstance(manifest, (str, Path)):
        base_dir = Path(manifest).parent if base_dir is None else Path(base_dir)
        entries = read_manifest(manifest)
    else:
        entries = list(manifest)
        base_dir = Path(base_dir or ".")
    for i, c in enumerate(configs):
        problems = validate_params(c.params)
        if problems:
            log.warning("skipping %s point %s: %s", c.series, c.value, "; ".join(problems))
    valid = [(i, c) for i, c in enumerate(configs) if not validate_params(c.params)]
    jobs = []
    for e in entries:
        path = str(base_dir / e.file)
        for ci, cfg in valid:
            for rep in range(reps):
                jobs.append((e, path, cfg, derive_seed(base_seed, e.map_id, ci, rep)))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_run_in_worker, jobs, chunksize=8))
    grids: dict[str, Grid] = {}
    records = []
    for e, path, cfg, seed in jobs:
        if path not in grids:
            grids = {path: read_map(path)}
        records.append(_run_one((e, grids[path], cfg, seed)))
    return records


def records_to_csv(records: Iterable[RunRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in records:
        writer.writerow([getattr(r, f) for f in CSV_FIELDS])
    return buf.getvalue()


def records_from_csv(text: str) -> list[RunRecord]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_FIELDS:
        raise ValueError(f"unexpected CSV columns {reader.fieldnames}")
    out = []
    for row in reader:
        kw = {}
        for k, v in row.items():
            if k in _INT_FIELDS:
                kw[k] = int(v)
            elif k == "time_ms":
                kw[k] = float(v)
            else:
                kw[k] = v
        out.append(RunRecord(**kw))
    return out


def write_csv(path: str | Path, records: Iterable[RunRecord]) -> None:
    Path(path).write_text(records_to_csv(records), encoding="utf-8", newline="\n")


def read_csv(path: str | Path) -> list[RunRecord]:
    return records_from_csv(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------- aggregation

@dataclass
class SummaryRow:
    series: str
    value: int
    runs: int
    solve_rate: float
    mean_cells: float
    median_cells: float
    mean_time_ms: float
    median_time_ms: float
    mean_length: float
    median_length: float
    # mean over the series' best (smallest) mean for the same metric
    cells_ratio: float = 1.0
    time_ratio: float = 1.0
    length_ratio: float = 1.0


def _mean(xs: list[float]) -> float:
    # fsum is exactly rounded, so the mean does not depend on record order
    return math.fsum(xs) / len(xs) if xs else math.nan


def _median(xs: list[float]) -> float:
    return statistics.median(xs) if xs else math.nan


def aggregate(records: Iterable[RunRecord]) -> list[SummaryRow]:
    groups: dict[tuple[str, int], list[RunRecord]] = {}
    for r in records:
        groups.setdefault((r.series, r.value), []).append(r)
    if not groups:
        raise ValueError("no records to aggregate")
    order = {name: i for i, name in enumerate(SERIES_NAMES)}
    rows = []
    for (series, value), rs in sorted(groups.items(), key=lambda kv: (order.get(kv[0][0], 99), kv[0][0], kv[0][1])):
        ok = [r for r in rs if r.solved]
        cells = [r.cells for r in ok]
        times = [r.time_ms for r in ok]
        lengths = [r.length for r in ok]
        rows.append(SummaryRow(series, value, len(rs), len(ok) / len(rs),
                               _mean(cells), _median(cells), _mean(times), _median(times),
                               _mean(lengths), _median(lengths)))
    for series in {r.series for r in rows}:
        members = [r for r in rows if r.series == series]
        for metric, ratio in (("mean_cells", "cells_ratio"), ("mean_time_ms", "time_ratio"),
                              ("mean_length", "length_ratio")):
            vals = [getattr(r, metric) for r in members if not math.isnan(getattr(r, metric))]
            best = min(vals) if vals else math.nan
            for r in members:
                setattr(r, ratio, getattr(r, metric) / best if best else math.nan)
    return rows


def format_summary(rows: Sequence[SummaryRow], series: str | None = None) -> str:
    cols = ("series", "value", "runs", "solve_rate", "mean_cells", "median_cells", "mean_time_ms",
            "median_time_ms", "mean_length", "median_length", "cells_ratio", "time_ratio", "length_ratio")
    table = [cols]
    for r in rows:
        if series is not None and r.series != series:
            continue
        d = asdict(r)
        table.append(tuple(f"{d[c]:.3f}" if isinstance(d[c], float) else str(d[c]) for c in cols))
    widths = [max(len(row[i]) for row in table) for i in range(len(cols))]
    return "\n".join("  ".join(cell.rjust(wd) for cell, wd in zip(row, widths)) for row in table) + "\n"


def task_distance(entries: Sequence[ManifestEntry]) -> int:
    return octile_dist(entries[0].start, entries[0].goal)
