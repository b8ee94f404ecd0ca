"""Polynomial families: turn a sampled (t1, t2) pair into coefficients.

Supported families: expression-defined sparse terms, random Gaussian
(Kac) coefficients, Lucas polynomials, the fixed bifurcation cubic
x^3 + a*x^2 + b*x - 1, and explicit user-supplied coefficient vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from . import expr as expr_mod
from . import sampling
from .expr import CoefficientExpr

__all__ = [
    "Polynomial",
    "Rejected",
    "REJECTED",
    "ExprFamily",
    "KacFamily",
    "LucasFamily",
    "CubicFamily",
    "ExplicitFamily",
    "FamilySpec",
    "LEADING_EPS",
    "instantiate",
    "lucas_coefficients",
    "preset",
    "PRESET_NAMES",
    "UnknownPreset",
]

# relative threshold below which the leading coefficient counts as vanished
LEADING_EPS = 1e-12


class Polynomial:
    """Dense complex coefficient vector [a_0, ..., a_n] with a_n != 0.

    ``coeffs_lo`` optionally carries the low words of a double-double
    representation of the coefficients, for the 106-bit solver path
    (exact Lucas integers above 2^53 need it).
    """

    __slots__ = ("coeffs", "coeffs_lo")

    def __init__(self, coeffs, coeffs_lo=None):
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim != 1 or c.size < 1:
            raise ValueError("coefficients must be a non-empty 1-D vector")
        if c[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        if not np.all(np.isfinite(c.view(float))):
            raise ValueError("coefficients must be finite")
        self.coeffs = c
        self.coeffs_lo = None if coeffs_lo is None else np.asarray(coeffs_lo, dtype=complex)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def from_exact(cls, ints: Sequence[int]) -> "Polynomial":
        """Build from exact integers, keeping a double-double split so
        values above 2^53 stay exact for the high-precision solver."""
        hi = np.array([float(v) for v in ints], dtype=float)
        lo = np.array([float(v - int(h)) for v, h in zip(ints, hi)], dtype=float)
        return cls(hi.astype(complex), lo.astype(complex))

    def __repr__(self):
        return f"Polynomial(degree={self.degree})"

    def __eq__(self, other):
        return isinstance(other, Polynomial) and np.array_equal(self.coeffs, other.coeffs)


class Rejected:
    """Marker for samples whose leading coefficient vanished."""

    __slots__ = ()

    def __repr__(self):
        return "REJECTED"


REJECTED = Rejected()


@dataclass(frozen=True)
class ExprFamily:
    degree: int
    terms: Dict[int, CoefficientExpr] = field(default_factory=dict)

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be positive")
        parsed = {}
        for k, e in self.terms.items():
            if not 0 <= k <= self.degree:
                raise ValueError(f"term exponent {k} outside [0, {self.degree}]")
            parsed[int(k)] = expr_mod.parse(e) if isinstance(e, str) else e
        if self.degree not in parsed:
            raise ValueError("an expression for the leading exponent is required")
        object.__setattr__(self, "terms", parsed)


@dataclass(frozen=True)
class KacFamily:
    degree: int
    seed: int = 0

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be positive")


@dataclass(frozen=True)
class LucasFamily:
    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be positive")


@dataclass(frozen=True)
class CubicFamily:
    pass


class ExplicitFamily:
    """A fixed list of coefficient vectors; sample index k uses vector
    k mod len(vectors)."""

    def __init__(self, vectors: Sequence[Sequence[complex]]):
        if not vectors:
            raise ValueError("at least one coefficient vector required")
        self.vectors = [np.asarray(v, dtype=complex) for v in vectors]
        for v in self.vectors:
            if v.size < 2 or v[-1] == 0:
                raise ValueError("each vector needs degree >= 1 and nonzero leader")


FamilySpec = Union[ExprFamily, KacFamily, LucasFamily, CubicFamily, ExplicitFamily]


def lucas_coefficients(n: int) -> List[int]:
    """Exact integer coefficients [a_0..a_n] of the Lucas polynomial L_n,
    from L_0 = 2, L_1 = x, L_{n+1} = x*L_n + L_{n-1}."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return [2]
    prev, cur = [2], [0, 1]
    for _ in range(n - 1):
        nxt = [0] + cur  # multiply by x
        for j, c in enumerate(prev):
            nxt[j] += c
        prev, cur = cur, nxt
    return cur


def _reject(coeffs: np.ndarray) -> bool:
    return abs(coeffs[-1]) <= LEADING_EPS * np.max(np.abs(coeffs))


def instantiate(
    spec: FamilySpec, t1: complex, t2: complex, rng_index: int
) -> Union[Polynomial, Rejected]:
    """Build the concrete polynomial for one sample.

    Deterministic in (spec, t1, t2, rng_index).  Returns REJECTED when the
    leading coefficient is (relatively) vanishing or a coefficient
    expression fails to evaluate (overflow, singular point).
    """
    if isinstance(spec, ExprFamily):
        coeffs = np.zeros(spec.degree + 1, dtype=complex)
        try:
            for k, e in spec.terms.items():
                coeffs[k] = expr_mod.evaluate(e, t1, t2)
        except expr_mod.EvalError:
            return REJECTED
        if not np.all(np.isfinite(coeffs.view(float))) or _reject(coeffs):
            return REJECTED
        return Polynomial(coeffs)
    if isinstance(spec, KacFamily):
        # coefficient k draws from stream 2+k, keyed by the family seed
        n = spec.degree
        streams = np.arange(2, n + 3, dtype=np.uint64)
        z0, _ = sampling.normal_pair(spec.seed, streams, rng_index)
        coeffs = z0.astype(complex)
        if _reject(coeffs):
            return REJECTED
        return Polynomial(coeffs)
    if isinstance(spec, LucasFamily):
        return Polynomial.from_exact(lucas_coefficients(spec.degree))
    if isinstance(spec, CubicFamily):
        a, b = complex(t1).real, complex(t2).real
        return Polynomial([-1.0, b, a, 1.0])
    if isinstance(spec, ExplicitFamily):
        v = spec.vectors[rng_index % len(spec.vectors)]
        if _reject(v):
            return REJECTED
        return Polynomial(v)
    raise TypeError(f"not a family spec: {spec!r}")


class UnknownPreset(KeyError):
    pass


PRESET_NAMES = ("kac10", "kac50", "lucas", "cubic", "hibiscus", "fusion")

_HIBISCUS_TERMS = {
    0: "-1",
    1: "1",
    8: "100*exp(i*5*t2)-100*exp(i*4*t1)",
    22: "100*exp(i*5*t1)-100*exp(i*4*t2)",
    28: "1",
}

_FUSION_COEFFS = [0, 0, 0, 0, 0, 0, 0, 2.909, 3.939, 0, 0, 0.606, 1.000]


def preset(name: str) -> Tuple[FamilySpec, sampling.SamplingPlan]:
    """Built-in (family, plan) configurations for the benchmark figures."""
    unit_disk = sampling.Disk(1.0)
    if name == "kac10":
        return KacFamily(10, seed=1), sampling.SamplingPlan(unit_disk, unit_disk, 100_000, 1)
    if name == "kac50":
        return KacFamily(50, seed=1), sampling.SamplingPlan(unit_disk, unit_disk, 100_000, 1)
    if name == "lucas":
        return LucasFamily(64), sampling.SamplingPlan(unit_disk, unit_disk, 1, 1)
    if name == "cubic":
        seg = sampling.Segment(-3 + 0j, 3 + 0j)
        return CubicFamily(), sampling.SamplingPlan(seg, seg, 100_000, 1)
    if name == "hibiscus":
        return (
            ExprFamily(28, dict(_HIBISCUS_TERMS)),
            sampling.SamplingPlan(sampling.Annulus(0.5, 1.0), unit_disk, 100_000, 1),
        )
    if name == "fusion":
        return (
            ExplicitFamily([_FUSION_COEFFS]),
            sampling.SamplingPlan(unit_disk, unit_disk, 1, 1),
        )
    raise UnknownPreset(name)
