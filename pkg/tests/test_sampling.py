"""Deterministic sampling tests: domain geometry, draw reproducibility,
and distributional checks against independent Monte Carlo oracles."""

import numpy as np
import pytest
from scipy import stats

from polynomiogram.sampling import (
    Annulus,
    Circle,
    Disk,
    SamplingPlan,
    Segment,
    draw_pair,
    draw_pairs,
    normal_pair,
    sample_domain,
    uniform_pair,
)


class TestDomains:
    def test_circle_angle_zero(self):
        assert sample_domain(Circle(1.0), 0.0, 0.7) == 1 + 0j

    def test_circle_quarter_turn(self):
        assert abs(sample_domain(Circle(1.0), 0.25, 0.0) - 1j) < 1e-15

    def test_circle_radius_exact(self):
        u = np.linspace(0, 0.999, 500)
        z = sample_domain(Circle(2.5), u, u)
        assert np.all(np.abs(np.abs(z) - 2.5) <= 1e-12)

    def test_disk_radial_bound(self):
        rng = np.random.default_rng(3)
        z = sample_domain(Disk(1.0), rng.uniform(size=2000), rng.uniform(size=2000))
        assert np.all(np.abs(z) <= 1.0)

    def test_disk_area_uniform_second_moment(self):
        # analytic E|t|^2 = R^2/2 for an area-uniform unit disk; the
        # oracle below is an independent rejection-sampling Monte Carlo
        rng = np.random.default_rng(11)
        pts = rng.uniform(-1, 1, size=(400_000, 2))
        pts = pts[(pts**2).sum(axis=1) <= 1.0]
        oracle = float((pts**2).sum(axis=1).mean())
        u1, u2 = uniform_pair(5, 0, np.arange(100_000))
        z = sample_domain(Disk(1.0), u1, u2)
        ours = float(np.mean(np.abs(z) ** 2))
        assert ours == pytest.approx(0.5, abs=0.01)
        assert ours == pytest.approx(oracle, abs=0.01)

    def test_annulus_band(self):
        u1, u2 = uniform_pair(7, 0, np.arange(10_000))
        z = sample_domain(Annulus(0.5, 1.0), u1, u2)
        r = np.abs(z)
        assert np.all((r >= 0.5) & (r <= 1.0))

    def test_segment_interpolation(self):
        z = sample_domain(Segment(-3 + 0j, 3 + 0j), 0.5, 0.0)
        assert z == 0 + 0j
        z = sample_domain(Segment(1j, 3j), np.array([0.0, 1.0]), 0.0)
        assert np.allclose(z, [1j, 3j])

    def test_domain_validation(self):
        with pytest.raises(ValueError):
            Circle(0.0)
        with pytest.raises(ValueError):
            Disk(-1.0)
        with pytest.raises(ValueError):
            Annulus(1.0, 0.5)
        with pytest.raises(ValueError):
            Segment(1j, 1j)


class TestDraws:
    def _plan(self, **kw):
        defaults = dict(
            domain1=Annulus(0.5, 1.0), domain2=Disk(1.0), count=10_000, seed=7
        )
        defaults.update(kw)
        return SamplingPlan(**defaults)

    def test_repeat_call_identical(self):
        plan = self._plan()
        assert draw_pair(plan, 42) == draw_pair(plan, 42)

    def test_order_independence(self):
        plan = self._plan(count=500)
        idx = np.arange(500)
        fwd = draw_pairs(plan, idx)
        rng = np.random.default_rng(0)
        perm = rng.permutation(idx)
        shuf = draw_pairs(plan, perm)
        assert np.array_equal(fwd[0][perm], shuf[0])
        assert np.array_equal(fwd[1][perm], shuf[1])

    def test_containment_over_many_indices(self):
        plan = self._plan()
        t1, t2 = draw_pairs(plan, np.arange(10_000))
        assert np.all((np.abs(t1) >= 0.5) & (np.abs(t1) <= 1.0))
        assert np.all(np.abs(t2) <= 1.0)

    def test_circle_plan_modulus(self):
        plan = self._plan(domain1=Circle(1.0), domain2=Circle(1.0))
        t1, t2 = draw_pairs(plan, np.arange(1000))
        assert np.all(np.abs(np.abs(t1) - 1.0) <= 1e-12)
        assert np.all(np.abs(np.abs(t2) - 1.0) <= 1e-12)

    def test_streams_uncorrelated(self):
        plan = self._plan(domain1=Disk(1.0))
        t1, t2 = draw_pairs(plan, np.arange(5000))
        corr = np.corrcoef(t1.real, t2.real)[0, 1]
        assert abs(corr) < 0.05

    def test_index_out_of_range(self):
        plan = self._plan(count=10)
        with pytest.raises(IndexError):
            draw_pair(plan, 10)

    def test_seed_changes_values(self):
        a = draw_pair(self._plan(seed=1), 0)
        b = draw_pair(self._plan(seed=2), 0)
        assert a != b

    def test_plan_validation(self):
        with pytest.raises(ValueError):
            self._plan(count=0)
        with pytest.raises(ValueError):
            self._plan(seed=2**64)


class TestDistributions:
    def test_circle_angle_chi_square(self):
        u1, _ = uniform_pair(123, 0, np.arange(100_000))
        hist, _ = np.histogram(u1, bins=64, range=(0.0, 1.0))
        _, p = stats.chisquare(hist)
        assert p > 0.001

    def test_uniforms_in_unit_interval(self):
        u1, u2 = uniform_pair(9, 3, np.arange(50_000))
        for u in (u1, u2):
            assert np.all((u >= 0.0) & (u < 1.0))

    def test_normal_pair_moments(self):
        z0, z1 = normal_pair(77, 2, np.arange(100_000))
        for z in (z0, z1):
            assert abs(z.mean()) < 0.02
            assert abs(z.var() - 1.0) < 0.03
        # Box-Muller pairs are independent
        assert abs(np.corrcoef(z0, z1)[0, 1]) < 0.02

    def test_normal_pair_normality(self):
        z0, _ = normal_pair(4, 2, np.arange(50_000))
        _, p = stats.kstest(z0, "norm")
        assert p > 0.001

    def test_normals_always_finite(self):
        z0, z1 = normal_pair(0, 5, np.arange(200_000))
        assert np.all(np.isfinite(z0)) and np.all(np.isfinite(z1))
