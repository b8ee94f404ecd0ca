"""Validation suites: quantitative checks with machine-readable reports.

Three suites mirror the benchmark families: ``kac`` (unit-circle root
concentration and real-zero growth), ``lucas`` (high-precision zeros
against the closed form) and ``cubic`` (landmark roots, regime grid,
boundary curve and the forbidden real-axis interval).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from . import analysis, family, sampling
from .solver import PrecisionConfig, roots_aberth, roots_companion

__all__ = ["Check", "SuiteReport", "kac_suite", "lucas_suite", "cubic_suite", "SUITES"]

LANDMARK_ROOTS = {
    "P1": [3.85, -0.42 + 0.28j, -0.42 - 0.28j],
    "P3": [-3.73, -0.27, 1.00],
    "P4": [0.26, -1.63 + 1.09j, -1.63 - 1.09j],
    "P5": [-0.60, 2.81],
    "P6": [-1.68, 0.36],
}
# listed values carry 2 decimals; allow their rounding plus fp slack
LANDMARK_TOL = 0.0051


@dataclass
class Check:
    name: str
    value: float
    threshold: str
    passed: bool


@dataclass
class SuiteReport:
    suite: str
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, value: float, threshold: str, passed: bool):
        self.checks.append(Check(name, float(value), threshold, bool(passed)))

    def lines(self) -> List[str]:
        out = [f"suite={self.suite}"]
        for c in self.checks:
            out.append(
                f"check={c.name} value={c.value:.6g} "
                f"threshold={c.threshold} pass={str(c.passed).lower()}"
            )
        out.append(f"result={'pass' if self.passed else 'fail'}")
        return out

    def to_json(self) -> str:
        return json.dumps(
            {
                "suite": self.suite,
                "passed": self.passed,
                "checks": [
                    {
                        "name": c.name,
                        "value": c.value,
                        "threshold": c.threshold,
                        "passed": c.passed,
                    }
                    for c in self.checks
                ],
            },
            indent=2,
        )


def _kac_rootsets(degree: int, samples: int, seed: int):
    fam = family.KacFamily(degree, seed)
    plan = sampling.SamplingPlan(sampling.Disk(1.0), sampling.Disk(1.0), samples, seed)
    idx = np.arange(samples, dtype=np.uint64)
    t1s, t2s = sampling.draw_pairs(plan, idx)
    out = []
    for k in range(samples):
        p = family.instantiate(fam, t1s[k], t2s[k], k)
        if p is family.REJECTED:
            continue
        out.append(roots_companion(p))
    return out


def kac_suite(degree: int = 50, samples: int = 10_000, seed: int = 1,
              slope_low_degree: int = 10) -> SuiteReport:
    """Unit-circle concentration for random-coefficient polynomials plus
    the logarithmic growth of the mean real-zero count."""
    rep = SuiteReport("kac")
    stats_hi = analysis.kac_stats(_kac_rootsets(degree, samples, seed))
    rep.add("peak_radius", stats_hi.peak_radius, "[0.95, 1.05]",
            0.95 <= stats_hi.peak_radius <= 1.05)
    rep.add("annulus_fraction", stats_hi.annulus_fraction, ">= 0.90",
            stats_hi.annulus_fraction >= 0.90)
    rep.add("interior_fraction", stats_hi.interior_fraction, "<= 0.05",
            stats_hi.interior_fraction <= 0.05)
    stats_lo = analysis.kac_stats(_kac_rootsets(slope_low_degree, samples, seed))
    observed, predicted = analysis.real_root_slope(stats_lo, slope_low_degree,
                                                   stats_hi, degree)
    rep.add("real_zero_growth", observed,
            f"{predicted:.4f} +- 0.35", abs(observed - predicted) <= 0.35)
    return rep


def lucas_suite(n: int = 32, bits: int = 53) -> SuiteReport:
    """Solved zeros of the degree-n Lucas polynomial against the exact
    closed form 2i*cos((2k+1)pi/(2n))."""
    rep = SuiteReport("lucas")
    tol = 1e-6 if bits == 53 else 1e-12
    p = family.Polynomial.from_exact(family.lucas_coefficients(n))
    rs = roots_aberth(p, PrecisionConfig(significand_bits=bits))
    max_err, max_re = analysis.lucas_max_error(n, rs)
    max_im = float(np.abs(rs.roots.imag).max())
    rep.add(f"max_matched_error_n{n}_b{bits}", max_err, f"< {tol:g}", max_err < tol)
    rep.add("max_abs_real_part", max_re, f"< {tol:g}", max_re < tol)
    rep.add("max_abs_imag_part", max_im, "<= 2 + 1e-06", max_im <= 2.0 + 1e-6)
    return rep


def cubic_suite(grid_points: int = 101, boundary_samples: int = 1000,
                gap_samples: int = 50, seed: int = 1) -> SuiteReport:
    """Bifurcation checks for x^3 + a*x^2 + b*x - 1 over [-3,3]^2."""
    rep = SuiteReport("cubic")

    # labeled landmark points, matched to the 2-dp reference roots
    worst_landmark = 0.0
    cusp_radius = math.nan
    for pt in analysis.landmark_report():
        if pt.label == "P2":
            cusp_radius = float(np.abs(pt.roots - 1.0).max())
            continue
        for listed in LANDMARK_ROOTS[pt.label]:
            d = pt.roots - listed
            j = int(np.argmin(np.abs(d)))
            worst_landmark = max(worst_landmark, abs(d[j].real), abs(d[j].imag))
    rep.add("landmark_match_2dp", worst_landmark, f"<= {LANDMARK_TOL}",
            worst_landmark <= LANDMARK_TOL)
    rep.add("cusp_cluster_radius", cusp_radius, "< 1e-04", cusp_radius < 1e-4)

    # regime grid: discriminant sign vs actual real-root count
    vals = np.linspace(-3.0, 3.0, grid_points)
    mismatches = 0
    tested = 0
    for a in vals:
        for b in vals:
            regime = analysis.classify_regime(a, b)
            if regime == "boundary":
                continue
            tested += 1
            n_real = int(np.sum(analysis.is_real_root(analysis.cubic_roots(a, b))))
            if n_real != (3 if regime == "three_real" else 1):
                mismatches += 1
    rep.add("regime_grid_mismatches", mismatches, f"== 0 (of {tested})", mismatches == 0)

    # parametrized boundary curve stays on the discriminant zero set
    rng = np.random.default_rng(seed)
    mags = rng.uniform(0.25, 3.0, boundary_samples)
    signs = np.where(rng.uniform(size=boundary_samples) < 0.5, -1.0, 1.0)
    worst_rel = 0.0
    for r in mags * signs:
        a, b = analysis.discriminant_boundary(r)
        rel = abs(analysis.cubic_discriminant(a, b)) / (1.0 + abs(a) ** 3 + abs(b) ** 3)
        worst_rel = max(worst_rel, rel)
    rep.add("boundary_curve_residual", worst_rel, "<= 1e-08", worst_rel <= 1e-8)

    # forbidden real-axis interval: infeasible strictly inside, feasible outside
    xs = rng.uniform(-0.25, 0.24, gap_samples)
    xs = np.where(np.abs(xs) < 1e-3, 1e-2, xs)  # keep clear of the pole at 0
    gap_ok = not any(analysis.real_axis_feasibility(float(x)) for x in xs)
    rep.add("gap_infeasible_inside", int(gap_ok), "all infeasible", gap_ok)
    outside_ok = all(
        analysis.real_axis_feasibility(x) for x in (-0.30, 0.30, 1.0, 3.8)
    )
    rep.add("gap_feasible_outside", int(outside_ok), "all feasible", outside_ok)
    return rep


SUITES = {"kac": kac_suite, "lucas": lucas_suite, "cubic": cubic_suite}
