"""Density aggregation tests: bounds, binning, merging and the text
dump format, with sorting/percentile oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polynomiogram.density import (
    Bounds,
    DegenerateCloud,
    DensityGrid,
    GeometryMismatch,
    accumulate,
    compute_bounds,
    dump_polygrid,
    load_polygrid,
    merge,
    normalize,
)


class TestBounds:
    def test_two_point_example(self):
        b = compute_bounds([-1 - 1j, 1 + 1j])
        assert b.re_min == pytest.approx(-1.1) and b.re_max == pytest.approx(1.1)
        assert b.im_min == pytest.approx(-1.1) and b.im_max == pytest.approx(1.1)

    def test_uniform_square_percentile_oracle(self):
        rng = np.random.default_rng(1)
        pts = rng.uniform(size=100_000) + 1j * rng.uniform(size=100_000)
        b = compute_bounds(pts)
        # oracle: numpy's linear-interpolation percentiles plus margin
        lo, hi = np.percentile(pts.real, [2.5, 97.5])
        span = hi - lo
        assert b.re_min == pytest.approx(lo - 0.05 * span, abs=0.01)
        assert b.re_max == pytest.approx(hi + 0.05 * span, abs=0.01)
        assert b.re_min == pytest.approx(-0.0225, abs=0.01)
        assert b.re_max == pytest.approx(1.0225, abs=0.01)

    def test_square_aspect_always(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            pts = rng.normal(scale=3.0, size=200) + 1j * rng.normal(size=200)
            b = compute_bounds(pts)
            assert (b.re_max - b.re_min) == pytest.approx(
                b.im_max - b.im_min, rel=1e-12
            )

    def test_degenerate_axis_warns_and_widens(self):
        with pytest.warns(DegenerateCloud):
            b = compute_bounds([2.0 + 1j, 2.0 + 3j, 2.0 + 2j])
        assert b.degenerate
        assert b.re_min < 2.0 < b.re_max

    def test_nonfinite_points_ignored(self):
        b = compute_bounds([0j, 1 + 1j, complex(np.nan, 0), complex(np.inf, 1)])
        assert b.re_max < 2.0

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            compute_bounds([1 + 1j])

    def test_retention_at_least_90_percent(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            n = int(rng.integers(100, 2000))
            pts = rng.standard_cauchy(n) + 1j * rng.standard_cauchy(n)  # heavy tails
            b = compute_bounds(pts)
            inside = (
                (pts.real >= b.re_min)
                & (pts.real <= b.re_max)
                & (pts.imag >= b.im_min)
                & (pts.imag <= b.im_max)
            )
            assert inside.mean() >= 0.90

    def test_invalid_bounds_rejected(self):
        with pytest.raises(ValueError):
            Bounds(0.0, 1.0, 0.0, 2.0)  # not square
        with pytest.raises(ValueError):
            Bounds(1.0, 0.0, 0.0, 1.0)  # inverted


UNIT = Bounds(0.0, 3.0, 0.0, 3.0)


class TestAccumulate:
    def test_center_point(self):
        g = DensityGrid(3, 3, UNIT)
        accumulate(g, [1.5 + 1.5j])
        want = np.zeros((3, 3), dtype=np.int64)
        want[1, 1] = 1
        assert np.array_equal(g.counts, want)
        assert g.total_in == 1 and g.total_dropped == 0

    def test_max_edge_goes_to_last_bin(self):
        g = DensityGrid(3, 3, UNIT)
        accumulate(g, [3.0 + 3.0j])
        assert g.counts[2, 2] == 1 and g.total_in == 1

    def test_nan_dropped(self):
        g = DensityGrid(3, 3, UNIT)
        accumulate(g, [complex(np.nan, 1.0)])
        assert g.total_dropped == 1 and g.counts.sum() == 0

    def test_outside_dropped(self):
        g = DensityGrid(3, 3, UNIT)
        accumulate(g, [5 + 1j, -1 + 1j, 1 + 1j])
        assert g.total_in == 1 and g.total_dropped == 2

    def test_conservation(self):
        rng = np.random.default_rng(4)
        g = DensityGrid(8, 8, UNIT)
        pts = rng.uniform(-1, 4, 500) + 1j * rng.uniform(-1, 4, 500)
        accumulate(g, pts)
        assert g.counts.sum() == g.total_in
        assert g.total_in + g.total_dropped == 500

    def test_floor_binning(self):
        g = DensityGrid(3, 3, UNIT)
        accumulate(g, [0.999 + 0j, 1.0 + 0j])
        assert g.counts[0, 0] == 1 and g.counts[0, 1] == 1


class TestMerge:
    def test_identity(self):
        g = DensityGrid(4, 4, UNIT)
        accumulate(g, [1 + 1j, 2 + 2j])
        empty = DensityGrid(4, 4, UNIT)
        out = merge(g, empty)
        assert np.array_equal(out.counts, g.counts)
        assert out.total_in == g.total_in

    def test_commutative(self):
        a, b = DensityGrid(4, 4, UNIT), DensityGrid(4, 4, UNIT)
        accumulate(a, [0.5 + 0.5j])
        accumulate(b, [2.5 + 2.5j, 1 + 1j])
        ab, ba = merge(a, b), merge(b, a)
        assert np.array_equal(ab.counts, ba.counts)
        assert ab.total_dropped == ba.total_dropped

    def test_any_split_matches_sequential(self):
        rng = np.random.default_rng(5)
        pts = rng.uniform(0, 3, 100) + 1j * rng.uniform(0, 3, 100)
        whole = DensityGrid(5, 5, UNIT)
        accumulate(whole, pts)
        for cut in (0, 1, 37, 50, 99, 100):
            g1, g2 = DensityGrid(5, 5, UNIT), DensityGrid(5, 5, UNIT)
            accumulate(g1, pts[:cut])
            accumulate(g2, pts[cut:])
            got = merge(g1, g2)
            assert np.array_equal(got.counts, whole.counts)
            assert got.total_in == whole.total_in

    def test_geometry_mismatch(self):
        with pytest.raises(GeometryMismatch):
            merge(DensityGrid(4, 4, UNIT), DensityGrid(5, 4, UNIT))
        other = Bounds(0.0, 2.0, 0.0, 2.0)
        with pytest.raises(GeometryMismatch):
            merge(DensityGrid(4, 4, UNIT), DensityGrid(4, 4, other))


class TestNormalize:
    def test_single_bin(self):
        g = DensityGrid(3, 3, UNIT)
        accumulate(g, [1.5 + 1.5j])
        f = normalize(g)
        assert f[1, 1] == 1.0 and f.sum() == 1.0

    def test_log_values_hand_computed(self):
        g = DensityGrid(3, 3, UNIT)
        accumulate(g, [0.5 + 0.5j])
        accumulate(g, [2.5 + 2.5j, 2.5 + 2.5j])
        f = normalize(g)
        assert f[0, 0] == pytest.approx(math.log(2) / math.log(3))
        assert f[2, 2] == 1.0

    def test_linear_mode(self):
        g = DensityGrid(3, 3, UNIT)
        accumulate(g, [0.5 + 0.5j, 2.5 + 2.5j, 2.5 + 2.5j])
        f = normalize(g, log_scale=False)
        assert f[0, 0] == 0.5 and f[2, 2] == 1.0

    def test_monotone(self):
        g = DensityGrid(2, 2, Bounds(0, 2, 0, 2))
        g.counts[:] = [[0, 1], [5, 9]]
        f = normalize(g)
        flat = f.ravel()
        order = np.argsort(g.counts.ravel())
        assert np.all(np.diff(flat[order]) >= 0)

    def test_empty_grid_all_zero(self):
        f = normalize(DensityGrid(3, 3, UNIT))
        assert np.all(f == 0.0)


class TestPolygrid:
    def test_round_trip(self):
        rng = np.random.default_rng(6)
        b = Bounds(-1.2345678901234, 2.7654321098766, -3.0, 1.0)
        g = DensityGrid(7, 5, b)
        accumulate(g, rng.uniform(-1, 2, 200) + 1j * rng.uniform(-3, 1, 200))
        loaded = load_polygrid(dump_polygrid(g))
        assert loaded.bounds == g.bounds  # repr round-trips doubles exactly
        assert np.array_equal(loaded.counts, g.counts)
        assert loaded.total_in == g.total_in
        assert loaded.total_dropped == g.total_dropped

    def test_header_format(self):
        g = DensityGrid(2, 2, Bounds(0.0, 1.0, 0.0, 1.0))
        first = dump_polygrid(g).splitlines()[0].split()
        assert first[:4] == ["POLYGRID", "1", "2", "2"]

    def test_reject_foreign_text(self):
        with pytest.raises(ValueError):
            load_polygrid("PGM 1 2 2\n0 0\n0 0\n")


@settings(max_examples=30)
@given(
    st.lists(
        st.tuples(
            st.floats(-50, 50, allow_nan=False), st.floats(-50, 50, allow_nan=False)
        ),
        min_size=2,
        max_size=200,
    )
)
def test_bounds_conservation_property(pairs):
    pts = np.array([complex(r, i) for r, i in pairs])
    if np.unique(pts.real).size < 2 or np.unique(pts.imag).size < 2:
        return
    b = compute_bounds(pts)
    g = DensityGrid(16, 16, b)
    accumulate(g, pts)
    assert g.counts.sum() == g.total_in
    assert g.total_in + g.total_dropped == pts.size
