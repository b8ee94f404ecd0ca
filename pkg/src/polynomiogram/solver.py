"""Root solvers: companion-matrix QR and Aberth-Ehrlich iteration.

The companion engine targets throughput and delegates the balanced,
shifted-QR Hessenberg eigenvalue computation to LAPACK.  The Aberth
engine is self-contained, refines all roots simultaneously, and can run
in double (53-bit) or compensated double-double (106-bit) precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dd
from .family import Polynomial

__all__ = [
    "RootSet",
    "PrecisionConfig",
    "SolverError",
    "DegenerateInput",
    "DegreeCapExceeded",
    "NoConvergence",
    "DerivativeBreakdown",
    "companion_matrix",
    "roots_companion",
    "roots_aberth",
    "polish",
    "scaled_residual",
    "match_roots",
    "DEGREE_CAP",
]

DEGREE_CAP = 512


class SolverError(RuntimeError):
    pass


class DegenerateInput(SolverError):
    pass


class DegreeCapExceeded(SolverError):
    pass


class NoConvergence(SolverError):
    def __init__(self, message: str, unconverged: int = 0):
        super().__init__(message)
        self.unconverged = unconverged


class DerivativeBreakdown(SolverError):
    pass


@dataclass
class RootSet:
    roots: np.ndarray
    residuals: np.ndarray
    engine: str  # "companion" | "aberth"
    iterations: int = 0


@dataclass(frozen=True)
class PrecisionConfig:
    significand_bits: int = 53
    max_iterations: int = 200
    tolerance_factor: float = 4.0

    def __post_init__(self):
        if self.significand_bits not in (53, 106):
            raise ValueError("significand_bits must be 53 or 106")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.tolerance_factor <= 0:
            raise ValueError("tolerance_factor must be positive")


def _horner(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.full_like(z, coeffs[-1])
    for a in coeffs[-2::-1]:
        acc = acc * z + a
    return acc


def _coeff_scale(abs_coeffs: np.ndarray, abs_z: np.ndarray) -> np.ndarray:
    """Sum_j |a_j| |z|^j, evaluated by Horner."""
    acc = np.full_like(abs_z, abs_coeffs[-1])
    for a in abs_coeffs[-2::-1]:
        acc = acc * abs_z + a
    return acc


def scaled_residual(p: Polynomial, z) -> np.ndarray:
    """|p(z)| / sum_j |a_j||z|^j; scale-invariant backward-error proxy.

    Vectorized over z; scalar in, scalar out.
    """
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    num = np.abs(_horner(p.coeffs, zs))
    den = _coeff_scale(np.abs(p.coeffs), np.abs(zs))
    out = np.where(den > 0, num / np.where(den > 0, den, 1.0), num)
    if np.isscalar(z) or np.asarray(z).ndim == 0:
        return float(out[0])
    return out


def companion_matrix(p: Polynomial) -> np.ndarray:
    """Frobenius companion of the monic normalization: ones on the
    subdiagonal, last column -a_k/a_n."""
    n = p.degree
    if n < 1:
        raise DegenerateInput("degree-0 polynomial has no companion matrix")
    b = p.coeffs[:-1] / p.coeffs[-1]
    real_input = np.all(p.coeffs.imag == 0.0)
    m = np.zeros((n, n), dtype=float if real_input else complex)
    if n > 1:
        m[np.arange(1, n), np.arange(n - 1)] = 1.0
    m[:, -1] = -b.real if real_input else -b
    return m


def roots_companion(p: Polynomial, degree_cap: int = DEGREE_CAP) -> RootSet:
    """All roots via eigenvalues of the balanced companion matrix.

    Real-coefficient inputs go through the real eigensolver so conjugate
    symmetry of the output is exact.
    """
    n = p.degree
    if n < 1:
        raise DegenerateInput("constant polynomial has no roots")
    if n > degree_cap:
        raise DegreeCapExceeded(f"degree {n} exceeds cap {degree_cap}")
    if n == 1:
        roots = np.array([-p.coeffs[0] / p.coeffs[1]])
    else:
        m = companion_matrix(p)
        try:
            roots = np.linalg.eigvals(m)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence(f"QR iteration failed: {exc}", n) from exc
        roots = np.asarray(roots, dtype=complex)
    if not np.all(np.isfinite(roots.view(float))):
        raise NoConvergence("non-finite eigenvalue from QR", n)
    return RootSet(roots, scaled_residual(p, roots), "companion")


def _initial_guesses(coeffs: np.ndarray) -> np.ndarray:
    """Starting points on circles with symmetry-breaking angular offsets.

    Per-root moduli come from the upper convex hull of (k, log|a_k|)
    (the Newton polygon), which tracks the actual root magnitudes; a
    single circle at the Cauchy bound 1 + max|a_k/a_n| stalls and
    overflows once coefficients span many orders of magnitude.
    """
    n = coeffs.size - 1
    mags = np.abs(coeffs)
    ks = np.flatnonzero(mags > 0)
    logs = np.log(mags[ks])
    # upper hull, monotone chain over exponent index
    hull = []
    for k, l in zip(ks, logs):
        while len(hull) >= 2:
            (k1, l1), (k2, l2) = hull[-2], hull[-1]
            if (l2 - l1) * (k - k1) <= (l - l1) * (k2 - k1):
                hull.pop()
            else:
                break
        hull.append((int(k), float(l)))
    radii = np.empty(n)
    pos = ks[0]  # a zero constant block means ks[0] roots at the origin
    first_r = 1.0
    for seg, ((k1, l1), (k2, l2)) in enumerate(zip(hull, hull[1:])):
        r = np.exp((l1 - l2) / (k2 - k1))
        if seg == 0:
            first_r = r
        radii[pos : pos + (k2 - k1)] = r
        pos += k2 - k1
    if ks[0] > 0:
        radii[: ks[0]] = 1e-3 * first_r
    k = np.arange(n)
    ang = 2.0 * np.pi * (k + 0.25) / n + 0.5 / n
    return radii * np.exp(1j * ang)


def _repulsion(z: np.ndarray) -> np.ndarray:
    """S_k = sum_{j != k} 1/(z_k - z_j), including frozen roots."""
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)  # masked below
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / diff
    np.fill_diagonal(inv, 0.0)
    inv[~np.isfinite(inv)] = 0.0  # coincident iterates repel elsewhere
    return inv.sum(axis=1)


def _aberth_double(coeffs, z, frozen, max_iterations, tolerance_factor):
    """Shared double-precision Aberth sweep; mutates z/frozen in place.

    Returns (iterations, stagnated mask).  Roots freeze when the scaled
    residual drops under tolerance_factor * 2^-53, or when the update no
    longer changes the iterate at working precision (stagnation).
    """
    n = z.size
    abs_coeffs = np.abs(coeffs)
    dcoeffs = coeffs[1:] * np.arange(1, n + 1)
    unit = 2.0**-53
    restarts = np.zeros(n, dtype=int)
    stagnant = np.zeros(n, dtype=bool)
    iterations = 0
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for _ in range(max_iterations):
            iterations += 1
            pz = _horner(coeffs, z)
            thresh = tolerance_factor * unit * _coeff_scale(abs_coeffs, np.abs(z))
            frozen |= np.abs(pz) <= thresh  # nan/inf never freeze here
            active = ~frozen
            if not active.any():
                break
            dpz = _horner(dcoeffs, z)
            bad = active & (dpz == 0)
            if bad.any():
                restarts[bad] += 1
                if np.any(restarts > 3):
                    raise DerivativeBreakdown(
                        "p'(z) vanished at an iterate after 3 restarts"
                    )
                z[bad] = z[bad] * (1.0 + 1e-6) + 1e-6
                continue
            w = np.zeros_like(z)
            w[active] = pz[active] / dpz[active]
            s = _repulsion(z)
            denom = 1.0 - w * s
            denom = np.where(denom == 0, 1.0, denom)  # fall back to Newton step
            delta = w / denom
            # overflowed evaluations: pull the iterate halfway in instead
            wild = active & ~(np.isfinite(delta.real) & np.isfinite(delta.imag))
            delta[wild] = 0.5 * z[wild]
            znew = z[active] - delta[active]
            moved = znew != z[active]
            # stagnation at working precision counts as converged
            idx = np.flatnonzero(active)
            stalled = idx[~moved]
            frozen[stalled] = True
            stagnant[stalled] = True
            z[idx[moved]] = znew[moved]
            if frozen.all():
                break
    return iterations, stagnant


def _dd_coeffs(p: Polynomial):
    hi = p.coeffs
    lo = p.coeffs_lo if p.coeffs_lo is not None else np.zeros_like(hi)
    out = []
    for h, l in zip(hi, lo):
        out.append(
            (
                (np.float64(h.real), np.float64(l.real)),
                (np.float64(h.imag), np.float64(l.imag)),
            )
        )
    return out


def _dd_horner_pair(cdd_coeffs, z):
    """Evaluate p and p' at the complex double-double iterates z."""
    n = len(cdd_coeffs) - 1
    shape = z[0][0].shape
    zero = np.zeros(shape)

    def const(c):
        return (
            (np.full(shape, c[0][0]), np.full(shape, c[0][1])),
            (np.full(shape, c[1][0]), np.full(shape, c[1][1])),
        )

    b = const(cdd_coeffs[n])
    d = ((zero.copy(), zero.copy()), (zero.copy(), zero.copy()))
    for j in range(n - 1, -1, -1):
        d = dd.cadd(dd.cmul(d, z), b)
        b = dd.cadd(dd.cmul(b, z), const(cdd_coeffs[j]))
    return b, d


def _make_eval_dd(p):
    """Newton ratio w = p/p' and |p| via compensated (double-double)
    Horner on the coefficient data; vectorized over iterates."""
    cdd_coeffs = _dd_coeffs(p)

    def ev(z):
        pz_dd, dpz_dd = _dd_horner_pair(cdd_coeffs, z)
        pz = dd.chi(pz_dd)
        dpz = dd.chi(dpz_dd)
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            w = pz / dpz
        w[~(np.isfinite(w.real) & np.isfinite(w.imag))] = 0.0
        return w, np.abs(pz)

    return ev


def _make_eval_mp(p):
    """Same contract as _make_eval_dd but through mpmath Horner at a
    precision scaled to the coefficient magnitudes, for the 106-bit path
    (double-double evaluation is not enough once Sum|a_j||z|^j dwarfs
    |p'| by ~30 digits, as with Lucas degrees beyond ~64)."""
    import mpmath

    lo = p.coeffs_lo if p.coeffs_lo is not None else np.zeros_like(p.coeffs)
    n = p.degree
    prec = max(260, 154 + int(1.3 * n))

    def to_mpc(hi, low):
        return mpmath.mpc(mpmath.mpf(hi.real) + mpmath.mpf(low.real),
                          mpmath.mpf(hi.imag) + mpmath.mpf(low.imag))

    with mpmath.workprec(prec):
        cs = [to_mpc(h, l) for h, l in zip(p.coeffs, lo)]
        dcs = [j * c for j, c in enumerate(cs)][1:]

    def ev(z):
        (zr_hi, zr_lo), (zi_hi, zi_lo) = z
        m = zr_hi.size
        w = np.empty(m, dtype=complex)
        absp = np.empty(m)
        with mpmath.workprec(prec):
            for k in range(m):
                zk = mpmath.mpc(
                    mpmath.mpf(float(zr_hi[k])) + mpmath.mpf(float(zr_lo[k])),
                    mpmath.mpf(float(zi_hi[k])) + mpmath.mpf(float(zi_lo[k])),
                )
                b = cs[-1]
                for c in cs[-2::-1]:
                    b = b * zk + c
                d = dcs[-1]
                for c in dcs[-2::-1]:
                    d = d * zk + c
                absp[k] = float(abs(b))
                w[k] = complex(b / d) if d != 0 else 0.0
        return w, absp

    return ev


def _aberth_refine(p, z0, max_iterations, bits):
    """Coupled refinement warm-started from the plain double sweep.

    Iterates are stored at the working precision (plain doubles for 53
    bits, double-double words for 106) while p/p' is evaluated at higher
    precision, which rescues polynomials whose coefficients make plain
    Horner evaluation ill-conditioned.  A root freezes when its update
    is below one ulp of the working precision, when it stops changing,
    or when the updates plateau at the evaluation noise floor.
    """
    n = z0.size
    lo = p.coeffs_lo if p.coeffs_lo is not None else np.zeros_like(p.coeffs)
    abs_coeffs = np.abs(p.coeffs + lo)
    unit = 2.0**-bits
    ev = _make_eval_dd(p) if bits == 53 else _make_eval_mp(p)
    z = ((z0.real.copy(), np.zeros(n)), (z0.imag.copy(), np.zeros(n)))
    frozen = np.zeros(n, dtype=bool)
    prev_step = np.full(n, np.inf)
    iterations = 0
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for _ in range(max_iterations):
            iterations += 1
            w, _ = ev(z)
            zhi = dd.chi(z)
            s = _repulsion(zhi)
            denom = 1.0 - w * s
            denom = np.where(denom == 0, 1.0, denom)
            delta = np.where(~frozen, w / denom, 0.0)
            bad = ~(np.isfinite(delta.real) & np.isfinite(delta.imag))
            delta[bad] = 0.0
            step = np.abs(delta)
            scale_z = 1.0 + np.abs(zhi)
            tiny = step <= 4.0 * unit * scale_z
            # non-shrinking small steps: the evaluation noise floor
            plateau = (step >= 0.5 * prev_step) & (step <= 1e-5 * scale_z)
            if bits == 53:
                znew = ((z[0][0] - delta.real, z[0][1]), (z[1][0] - delta.imag, z[1][1]))
            else:
                znew = dd.csub_complex(z, delta)
            moved = (
                (znew[0][0] != z[0][0])
                | (znew[0][1] != z[0][1])
                | (znew[1][0] != z[1][0])
                | (znew[1][1] != z[1][1])
            )
            active = ~frozen
            keep = active & moved
            for comp in range(2):
                for word in range(2):
                    z[comp][word][keep] = znew[comp][word][keep]
            frozen |= active & (tiny | plateau | ~moved)
            prev_step = step
            if frozen.all():
                break
    _, absp = ev(z)
    zhi = dd.chi(z)
    scale = _coeff_scale(abs_coeffs, np.abs(zhi))
    residuals = np.where(scale > 0, absp / np.where(scale > 0, scale, 1.0), absp)
    return zhi, residuals, frozen, iterations


def roots_aberth(p: Polynomial, cfg: PrecisionConfig = PrecisionConfig()) -> RootSet:
    """All roots by Aberth-Ehrlich simultaneous iteration.

    Initial guesses take their moduli from the Newton polygon of the
    coefficient magnitudes with a symmetry-breaking angular offset.
    Converged roots freeze but stay in the coupling sum.  The plain
    double sweep warm-starts a refinement stage that re-evaluates p/p'
    at higher precision than the iterates.
    """
    n = p.degree
    if n < 1:
        raise DegenerateInput("constant polynomial has no roots")
    if n == 1:
        roots = np.array([-p.coeffs[0] / p.coeffs[1]])
        return RootSet(roots, scaled_residual(p, roots), "aberth", 0)
    z = _initial_guesses(p.coeffs)
    frozen = np.zeros(n, dtype=bool)
    iters, _ = _aberth_double(
        p.coeffs, z, frozen, cfg.max_iterations, cfg.tolerance_factor
    )
    roots, residuals, frozen, refine_iters = _aberth_refine(
        p, z, cfg.max_iterations, cfg.significand_bits
    )
    total = iters + refine_iters
    if not frozen.all():
        raise NoConvergence(
            f"{int((~frozen).sum())} roots unconverged after {total} iterations",
            int((~frozen).sum()),
        )
    return RootSet(roots, residuals, "aberth", total)


def polish(roots: RootSet, p: Polynomial) -> RootSet:
    """Up to three Newton steps per root; a step is kept only when it
    reduces |p(z)|."""
    dcoeffs = p.coeffs[1:] * np.arange(1, p.degree + 1)
    z = roots.roots.copy()
    for _ in range(3):
        pz = _horner(p.coeffs, z)
        dpz = _horner(dcoeffs, z)
        ok = dpz != 0
        step = np.where(ok, pz / np.where(ok, dpz, 1.0), 0.0)
        cand = z - step
        better = np.abs(_horner(p.coeffs, cand)) < np.abs(pz)
        z = np.where(better, cand, z)
    return RootSet(z, scaled_residual(p, z), roots.engine, roots.iterations)


def match_roots(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Greedy nearest-neighbor matching; returns matched distances.

    Approximate above ~32 roots but adequate for well-separated sets.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.size != b.size:
        raise ValueError(f"cardinality mismatch: {a.size} vs {b.size}")
    dist = np.abs(a[:, None] - b[None, :])
    out = np.empty(a.size)
    for k in range(a.size):
        i, j = np.unravel_index(np.argmin(dist), dist.shape)
        out[k] = dist[i, j]
        dist[i, :] = np.inf
        dist[:, j] = np.inf
    return out
