"""Validation mathematics: Kac ring statistics, Lucas reference zeros,
and the bifurcation structure of the cubic x^3 + a*x^2 + b*x - 1."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Tuple

import numpy as np

from .family import Polynomial
from .solver import RootSet, match_roots, roots_companion

__all__ = [
    "KacStats",
    "CubicPoint",
    "REAL_TOL_SCALE",
    "kac_stats",
    "real_root_slope",
    "lucas_reference_zeros",
    "lucas_max_error",
    "cubic_discriminant",
    "discriminant_boundary",
    "classify_regime",
    "real_axis_feasibility",
    "refine_boundary_point",
    "LANDMARK_POINTS",
    "landmark_report",
    "cubic_roots",
]

# scale-aware band for deciding a computed root is real
REAL_TOL_SCALE = 1e-8

RADIAL_BINS = 64
RADIAL_RANGE = (0.0, 2.0)


@dataclass
class KacStats:
    radial_histogram: np.ndarray  # 64 bins over |z| in [0, 2]
    peak_radius: float
    annulus_fraction: float  # |z| in [0.8, 1.2]
    interior_fraction: float  # |z| < 0.8
    mean_real_roots: float
    real_tolerance: float
    total_roots: int


@dataclass
class CubicPoint:
    label: str
    a: float
    b: float
    roots: np.ndarray
    regime: str  # "one_real" | "three_real" | "boundary"


def is_real_root(z, tol_scale: float = REAL_TOL_SCALE):
    z = np.asarray(z, dtype=complex)
    return np.abs(z.imag) <= tol_scale * (1.0 + np.abs(z))


def kac_stats(rootsets: Iterable[RootSet], real_tol_scale: float = REAL_TOL_SCALE) -> KacStats:
    """Radial and real-axis statistics over a collection of root sets."""
    rootsets = list(rootsets)
    if not rootsets:
        raise ValueError("at least one root set required")
    allroots = np.concatenate([rs.roots for rs in rootsets])
    radii = np.abs(allroots)
    hist, edges = np.histogram(radii, bins=RADIAL_BINS, range=RADIAL_RANGE)
    peak = int(np.argmax(hist))
    peak_radius = 0.5 * (edges[peak] + edges[peak + 1])
    annulus = float(np.mean((radii >= 0.8) & (radii <= 1.2)))
    interior = float(np.mean(radii < 0.8))
    real_counts = [int(np.sum(is_real_root(rs.roots, real_tol_scale))) for rs in rootsets]
    return KacStats(
        radial_histogram=hist,
        peak_radius=peak_radius,
        annulus_fraction=annulus,
        interior_fraction=interior,
        mean_real_roots=float(np.mean(real_counts)),
        real_tolerance=real_tol_scale,
        total_roots=int(allroots.size),
    )


def real_root_slope(
    stats_n1: KacStats, n1: int, stats_n2: KacStats, n2: int
) -> Tuple[float, float]:
    """Observed vs predicted growth of the mean real-root count between
    two degrees; the non-universal additive constant cancels in the
    difference, leaving (2/pi) * ln(n2/n1)."""
    if not 2 <= n1 <= n2:
        raise ValueError("need n2 >= n1 >= 2")
    observed = stats_n2.mean_real_roots - stats_n1.mean_real_roots
    predicted = (2.0 / math.pi) * math.log(n2 / n1)
    return observed, predicted


def lucas_reference_zeros(n: int) -> np.ndarray:
    """Zeros of the degree-n Lucas polynomial:
    2i*cos((2k+1)pi/(2n)), k = 0..n-1; purely imaginary in (-2i, 2i).

    The upper half is computed and the lower half mirrored so the set
    equals its own negation exactly (and odd n gets an exact zero)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = np.arange(n // 2)
    upper = 2.0 * np.cos((2 * k + 1) * np.pi / (2 * n))
    parts = [upper, -upper]
    if n % 2:
        parts.append(np.zeros(1))
    return 1j * np.concatenate(parts)


def lucas_max_error(n: int, computed: RootSet) -> Tuple[float, float]:
    """(max matched distance to the reference zeros, max |Re z|)."""
    if computed.roots.size != n:
        raise ValueError(
            f"cardinality mismatch: expected {n} roots, got {computed.roots.size}"
        )
    dists = match_roots(computed.roots, lucas_reference_zeros(n))
    return float(dists.max()), float(np.abs(computed.roots.real).max())


def cubic_discriminant(a: float, b: float) -> float:
    """Discriminant of x^3 + a*x^2 + b*x - 1."""
    return a * a * b * b - 4.0 * b**3 + 4.0 * a**3 - 27.0 - 18.0 * a * b


def discriminant_boundary(r: float) -> Tuple[float, float]:
    """Parameters (a, b) for which x = r is a double root; traces the
    discriminant-zero curve."""
    if r == 0:
        raise ValueError("r must be nonzero")
    return -2.0 * r - 1.0 / r**2, r * r + 2.0 / r


def classify_regime(a: float, b: float, tol: float = 1e-9) -> str:
    """"three_real" / "one_real" by discriminant sign; "boundary" inside
    a band that scales with the parameter magnitudes."""
    disc = cubic_discriminant(a, b)
    if abs(disc) <= tol * (1.0 + abs(a) ** 3 + abs(b) ** 3):
        return "boundary"
    return "three_real" if disc > 0 else "one_real"


def real_axis_feasibility(x: float, a_range=(-3.0, 3.0), b_range=(-3.0, 3.0)) -> bool:
    """Whether some (a, b) in the box puts a real root at x.

    b(x, a) = (1 - x^3)/x - x*a is affine in a, so the attainable b values
    form the interval spanned by the endpoints of a_range.
    """
    if x == 0:
        raise ValueError("x must be nonzero")
    b0 = (1.0 - x**3) / x - x * a_range[0]
    b1 = (1.0 - x**3) / x - x * a_range[1]
    lo, hi = min(b0, b1), max(b0, b1)
    return hi >= b_range[0] and lo <= b_range[1]


def cubic_roots(a: float, b: float) -> np.ndarray:
    """Roots of x^3 + a*x^2 + b*x - 1 via the companion engine."""
    return roots_companion(Polynomial([-1.0, b, a, 1.0])).roots


# corner and boundary-curve points of the [-3,3]^2 box (P2 is the cusp).
# P5/P6 sit on the discriminant-zero curve; the coordinate in the tuple
# is rounded to 2 dp and gets refined onto the curve before solving,
# since a double root moves like the square root of a parameter nudge.
LANDMARK_POINTS = [
    ("P1", -3.0, -3.0, None),
    ("P2", -3.0, 3.0, None),
    ("P3", 3.0, -3.0, None),
    ("P4", 3.0, 3.0, None),
    ("P5", -1.62, -3.0, "a"),
    ("P6", 3.0, 1.62, "b"),
]


def refine_boundary_point(a: float, b: float, free: str) -> Tuple[float, float]:
    """Move the ``free`` coordinate ("a" or "b") onto the nearest zero of
    the discriminant by bisection around the given value."""
    if free not in ("a", "b"):
        raise ValueError("free must be 'a' or 'b'")

    def f(v):
        return cubic_discriminant(v, b) if free == "a" else cubic_discriminant(a, v)

    x0 = a if free == "a" else b
    h = 1e-3
    while f(x0 - h) * f(x0 + h) > 0:
        h *= 2.0
        if h > 1.0:
            raise ValueError("no discriminant sign change near the given point")
    lo, hi = x0 - h, x0 + h
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(lo) * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
    v = 0.5 * (lo + hi)
    return (v, b) if free == "a" else (a, v)


def landmark_report() -> List[CubicPoint]:
    """All roots and regimes at the labeled boundary points; every point
    reports its full root triple even where the reference values list two."""
    out = []
    for label, a, b, free in LANDMARK_POINTS:
        if free is not None:
            a, b = refine_boundary_point(a, b, free)
        out.append(CubicPoint(label, a, b, cubic_roots(a, b), classify_regime(a, b)))
    return out
