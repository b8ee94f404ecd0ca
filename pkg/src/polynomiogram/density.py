"""Aggregation of root clouds into a bounded, binned 2D density field.

Grids accumulate integer counts per worker and merge by element-wise
addition, so the final field is bit-identical regardless of how samples
were split across workers.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Bounds",
    "DensityGrid",
    "DegenerateCloud",
    "GeometryMismatch",
    "compute_bounds",
    "accumulate",
    "merge",
    "normalize",
    "dump_polygrid",
    "load_polygrid",
]


class DegenerateCloud(UserWarning):
    """Warned (not raised) when a percentile axis collapses to a point."""


class GeometryMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Bounds:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    degenerate: bool = False  # set when the zero-span fallback fired

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("bounds must have positive span on both axes")
        spans = (self.re_max - self.re_min, self.im_max - self.im_min)
        if abs(spans[0] - spans[1]) > 1e-9 * max(spans):
            raise ValueError("bounds must be square-aspect")


def _percentile_pair(values: np.ndarray) -> tuple:
    """2.5th / 97.5th percentiles, linear interpolation between order
    statistics at position q*(m+1)-1 (clamped), so a two-point cloud
    keeps its extremes as the percentile box."""
    srt = np.sort(values)
    m = srt.size
    out = []
    for q in (0.025, 0.975):
        pos = min(max(q * (m + 1) - 1.0, 0.0), float(m - 1))
        lo = int(np.floor(pos))
        hi = min(lo + 1, m - 1)
        frac = pos - lo
        out.append(float(srt[lo] * (1.0 - frac) + srt[hi] * frac))
    return out[0], out[1]


def compute_bounds(points, margin_fraction: float = 0.05) -> Bounds:
    """Square-aspect bounds around the central 95% of the cloud.

    Each axis spans its [2.5, 97.5] percentile range, expanded by
    ``margin_fraction`` of the span on both sides; the shorter axis is
    then widened symmetrically to match the longer one.
    """
    pts = np.asarray(points, dtype=complex).ravel()
    finite = pts[np.isfinite(pts.real) & np.isfinite(pts.imag)]
    if finite.size < 2:
        raise ValueError("need at least 2 finite points")
    degenerate = False
    axes = []
    for vals in (finite.real, finite.imag):
        lo, hi = _percentile_pair(vals)
        if hi <= lo:
            warnings.warn("axis collapsed to a point; widening by 1.0", DegenerateCloud)
            lo, hi = lo - 1.0, hi + 1.0
            degenerate = True
        span = hi - lo
        axes.append((lo - margin_fraction * span, hi + margin_fraction * span))
    (re_lo, re_hi), (im_lo, im_hi) = axes
    re_span, im_span = re_hi - re_lo, im_hi - im_lo
    if re_span < im_span:
        pad = 0.5 * (im_span - re_span)
        re_lo, re_hi = re_lo - pad, re_lo - pad + im_span
    elif im_span < re_span:
        pad = 0.5 * (re_span - im_span)
        im_lo, im_hi = im_lo - pad, im_lo - pad + re_span
    return Bounds(re_lo, re_hi, im_lo, im_hi, degenerate)


class DensityGrid:
    """Binned root counts over square-aspect bounds.

    counts[iy, ix] covers the cell starting at
    (re_min + ix*dx, im_min + iy*dy); points exactly on the max edge go
    to the last bin.
    """

    def __init__(self, width: int, height: int, bounds: Bounds):
        if width < 1 or height < 1:
            raise ValueError("grid dimensions must be positive")
        self.width = width
        self.height = height
        self.bounds = bounds
        self.counts = np.zeros((height, width), dtype=np.int64)
        self.total_in = 0
        self.total_dropped = 0

    def same_geometry(self, other: "DensityGrid") -> bool:
        return (
            self.width == other.width
            and self.height == other.height
            and self.bounds == other.bounds
        )


def accumulate(grid: DensityGrid, points) -> DensityGrid:
    """Bin a batch of complex points into the grid (in place).

    Non-finite points and points outside the bounds are counted in
    ``total_dropped``.
    """
    pts = np.asarray(points, dtype=complex).ravel()
    if pts.size == 0:
        return grid
    b = grid.bounds
    re, im = pts.real, pts.imag
    finite = np.isfinite(re) & np.isfinite(im)
    inside = finite & (re >= b.re_min) & (re <= b.re_max) & (im >= b.im_min) & (im <= b.im_max)
    re, im = re[inside], im[inside]
    dx = (b.re_max - b.re_min) / grid.width
    dy = (b.im_max - b.im_min) / grid.height
    ix = np.floor((re - b.re_min) / dx).astype(np.int64)
    iy = np.floor((im - b.im_min) / dy).astype(np.int64)
    # max-edge rule (also guards fp rounding up to the edge bin)
    np.clip(ix, 0, grid.width - 1, out=ix)
    np.clip(iy, 0, grid.height - 1, out=iy)
    np.add.at(grid.counts, (iy, ix), 1)
    n_in = int(inside.sum())
    grid.total_in += n_in
    grid.total_dropped += pts.size - n_in
    return grid


def merge(g1: DensityGrid, g2: DensityGrid) -> DensityGrid:
    """Element-wise sum of two grids with identical geometry."""
    if not g1.same_geometry(g2):
        raise GeometryMismatch("grids differ in size or bounds")
    out = DensityGrid(g1.width, g1.height, g1.bounds)
    out.counts = g1.counts + g2.counts
    out.total_in = g1.total_in + g2.total_in
    out.total_dropped = g1.total_dropped + g2.total_dropped
    return out


def normalize(grid: DensityGrid, log_scale: bool = True) -> np.ndarray:
    """Counts mapped to [0, 1]; log1p compression by default."""
    field = np.log1p(grid.counts) if log_scale else grid.counts.astype(float)
    peak = field.max()
    if peak > 0:
        field = field / peak
    return field.astype(float)


def dump_polygrid(grid: DensityGrid) -> str:
    """Portable text dump: header line then row-major counts."""
    b = grid.bounds
    header = (
        f"POLYGRID 1 {grid.width} {grid.height} "
        f"{b.re_min!r} {b.re_max!r} {b.im_min!r} {b.im_max!r} "
        f"{grid.total_in} {grid.total_dropped}"
    )
    rows = [" ".join(str(v) for v in row) for row in grid.counts]
    return "\n".join([header] + rows) + "\n"


def load_polygrid(text: str) -> DensityGrid:
    lines = text.strip().splitlines()
    parts = lines[0].split()
    if parts[0] != "POLYGRID" or parts[1] != "1":
        raise ValueError("not a POLYGRID v1 dump")
    width, height = int(parts[2]), int(parts[3])
    bounds = Bounds(*(float(x) for x in parts[4:8]))
    grid = DensityGrid(width, height, bounds)
    grid.total_in = int(parts[8])
    grid.total_dropped = int(parts[9])
    grid.counts = np.array(
        [[int(v) for v in line.split()] for line in lines[1 : 1 + height]],
        dtype=np.int64,
    )
    if grid.counts.shape != (height, width):
        raise ValueError("count block does not match header dimensions")
    return grid
