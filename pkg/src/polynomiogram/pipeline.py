"""End-to-end sweep: sample -> instantiate -> solve -> bin -> merge.

Bounds come from a pilot pass over a prefix of the sample indices unless
the run config pins them explicitly.  The main sweep splits the index
range into fixed-size chunks processed by a worker pool; each worker
owns a private density grid, and the merged counts are bit-identical
for any worker count because every chunk's contribution depends only on
(seed, index) and the merge is integer addition in chunk order.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from . import density, family, sampling
from .config import RunConfig
from .solver import PrecisionConfig, SolverError, roots_aberth, roots_companion

__all__ = ["RunResult", "PipelineError", "CHUNK_SIZE", "PILOT_CAP", "compute_run_bounds", "run"]

CHUNK_SIZE = 2048  # fixed so chunk boundaries never depend on worker count
PILOT_CAP = 100_000


class PipelineError(RuntimeError):
    pass


@dataclass
class RunResult:
    grid: density.DensityGrid
    samples: int
    rejected: int
    failed: int  # samples whose solve raised
    wall_time: float
    roots_rows: Optional[List[Tuple[float, float, int]]] = None  # (re, im, index)

    @property
    def roots_binned(self) -> int:
        return self.grid.total_in

    @property
    def roots_dropped(self) -> int:
        return self.grid.total_dropped


def _solve(p: family.Polynomial, engine: str, precision: PrecisionConfig):
    if engine == "aberth":
        return roots_aberth(p, precision)
    return roots_companion(p)


def _sweep_chunk(args):
    """Process sample indices [start, stop): returns a private grid's
    counts plus bookkeeping.  Must stay a module-level function so the
    process pool can pickle it."""
    (fam, plan, engine, precision, width, height, bounds, collect_roots, start, stop) = args
    grid = density.DensityGrid(width, height, bounds)
    idx = np.arange(start, stop, dtype=np.uint64)
    t1s, t2s = sampling.draw_pairs(plan, idx)
    rejected = 0
    failed = 0
    rows = [] if collect_roots else None
    for k, t1, t2 in zip(range(start, stop), t1s, t2s):
        p = family.instantiate(fam, t1, t2, k)
        if p is family.REJECTED:
            rejected += 1
            continue
        try:
            rs = _solve(p, engine, precision)
        except SolverError:
            failed += 1
            continue
        density.accumulate(grid, rs.roots)
        if rows is not None:
            rows.extend((float(z.real), float(z.imag), k) for z in rs.roots)
    return grid.counts, grid.total_in, grid.total_dropped, rejected, failed, rows


def compute_run_bounds(cfg: RunConfig) -> density.Bounds:
    """Explicit bounds if pinned, else square-aspect bounds around the
    central 95% of the roots from a pilot prefix of the samples."""
    if cfg.explicit_bounds is not None:
        return cfg.explicit_bounds
    pilot = min(cfg.plan.count, PILOT_CAP)
    idx = np.arange(pilot, dtype=np.uint64)
    t1s, t2s = sampling.draw_pairs(cfg.plan, idx)
    clouds = []
    for k, t1, t2 in zip(range(pilot), t1s, t2s):
        p = family.instantiate(cfg.family, t1, t2, k)
        if p is family.REJECTED:
            continue
        try:
            rs = _solve(p, cfg.engine, cfg.precision)
        except SolverError:
            continue
        clouds.append(rs.roots)
    if not clouds:
        raise PipelineError("no sample in the pilot pass produced roots")
    allroots = np.concatenate(clouds)
    if allroots.size < 2:
        raise PipelineError("too few roots in the pilot pass to frame bounds")
    return density.compute_bounds(allroots, cfg.margin_fraction)


def run(cfg: RunConfig) -> RunResult:
    """Execute the full sweep described by ``cfg``; outputs are left to
    the caller (the grid and optional CSV rows come back in the result)."""
    t0 = time.perf_counter()
    bounds = compute_run_bounds(cfg)
    count = cfg.plan.count
    collect_roots = cfg.roots_csv_path is not None
    chunks = [
        (cfg.family, cfg.plan, cfg.engine, cfg.precision, cfg.width, cfg.height,
         bounds, collect_roots, start, min(start + CHUNK_SIZE, count))
        for start in range(0, count, CHUNK_SIZE)
    ]
    workers = cfg.workers or os.cpu_count() or 1
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_chunk, chunks))
    else:
        results = [_sweep_chunk(c) for c in chunks]

    grid = density.DensityGrid(cfg.width, cfg.height, bounds)
    rejected = 0
    failed = 0
    rows: Optional[List[Tuple[float, float, int]]] = [] if collect_roots else None
    for counts, n_in, n_drop, rej, fail, chunk_rows in results:
        grid.counts += counts
        grid.total_in += n_in
        grid.total_dropped += n_drop
        rejected += rej
        failed += fail
        if rows is not None and chunk_rows:
            rows.extend(chunk_rows)
    if rows is not None and len(rows) > cfg.roots_csv_cap:
        rows = rows[: cfg.roots_csv_cap]
    return RunResult(
        grid=grid,
        samples=count,
        rejected=rejected,
        failed=failed,
        wall_time=time.perf_counter() - t0,
        roots_rows=rows,
    )
