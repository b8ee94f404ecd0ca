"""Geometric sampling domains and deterministic, order-independent draws.

Every random quantity is a pure function of ``(seed, stream, index)``
through a counter-based generator, so results never depend on call order
or on how samples are distributed across workers.

Generator contract (part of the documented grid-dump format):

* ``state = seed XOR (stream * 0x9E3779B97F4A7C15)
  XOR (counter * 0xBF58476D1CE4E5B9)`` (mod 2^64),
* the state is passed through the SplitMix64 finalizer
  (``z ^= z>>30; z *= 0xBF58476D1CE4E5B9; z ^= z>>27;
  z *= 0x94D049BB133111EB; z ^= z>>31``),
* a uniform in [0, 1) is the top 53 bits scaled by 2^-53,
* the two uniforms for sample ``index`` on a stream use the consecutive
  counters ``2*index`` and ``2*index + 1``,
* Gaussian variates are Box-Muller on the two uniforms of a stream
  (cosine branch first), with u1 == 0 remapped to the smallest positive
  subnormal double.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

__all__ = [
    "Circle",
    "Disk",
    "Annulus",
    "Segment",
    "SamplingDomain",
    "SamplingPlan",
    "uniform_pair",
    "normal_pair",
    "sample_domain",
    "draw_pair",
    "draw_pairs",
]

_STREAM_MULT = np.uint64(0x9E3779B97F4A7C15)
_COUNTER_MULT = np.uint64(0xBF58476D1CE4E5B9)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_TINY = 5e-324  # smallest positive subnormal; keeps log() finite in Box-Muller


def _finalize(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * _MIX1
    z = z ^ (z >> np.uint64(27))
    z = z * _MIX2
    z = z ^ (z >> np.uint64(31))
    return z


def _uniforms(seed: int, stream, counters) -> np.ndarray:
    # 1-d arrays throughout: numpy wraps array uint64 arithmetic silently
    # but warns on scalar overflow
    s = np.atleast_1d(np.asarray(stream, dtype=np.uint64))
    c = np.atleast_1d(np.asarray(counters, dtype=np.uint64))
    state = np.uint64(seed) ^ (s * _STREAM_MULT) ^ (c * _COUNTER_MULT)
    bits = _finalize(state) >> np.uint64(11)
    return bits.astype(np.float64) * 2.0**-53


def uniform_pair(
    seed: int, stream: Union[int, np.ndarray], index: Union[int, np.ndarray]
) -> Tuple[np.ndarray, np.ndarray]:
    """The two uniforms in [0,1) assigned to ``index`` on ``stream``.

    Vectorized over either the index or the stream argument.
    """
    idx = np.atleast_1d(np.asarray(index, dtype=np.uint64))
    two = np.uint64(2)
    u1 = _uniforms(seed, stream, idx * two)
    u2 = _uniforms(seed, stream, idx * two + np.uint64(1))
    return u1, u2


def normal_pair(
    seed: int, stream: int, index: Union[int, np.ndarray]
) -> Tuple[np.ndarray, np.ndarray]:
    """Box-Muller pair of standard normals for ``index`` on ``stream``."""
    u1, u2 = uniform_pair(seed, stream, index)
    u1 = np.maximum(u1, _TINY)
    r = np.sqrt(-2.0 * np.log(u1))
    ang = 2.0 * np.pi * u2
    return r * np.cos(ang), r * np.sin(ang)


@dataclass(frozen=True)
class Circle:
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("circle radius must be positive")


@dataclass(frozen=True)
class Disk:
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")


@dataclass(frozen=True)
class Annulus:
    r_in: float
    r_out: float

    def __post_init__(self):
        if self.r_in < 0:
            raise ValueError("annulus inner radius must be nonnegative")
        if not self.r_out > self.r_in:
            raise ValueError("annulus requires r_in < r_out")


@dataclass(frozen=True)
class Segment:
    z0: complex
    z1: complex

    def __post_init__(self):
        if self.z0 == self.z1:
            raise ValueError("segment endpoints must differ")


SamplingDomain = Union[Circle, Disk, Annulus, Segment]


@dataclass(frozen=True)
class SamplingPlan:
    domain1: SamplingDomain
    domain2: SamplingDomain
    count: int
    seed: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("plan count must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def sample_domain(domain: SamplingDomain, u1, u2):
    """Map uniforms (u1, u2) in [0,1) into the domain.

    Disk and annulus draws are area-uniform; the circle and segment use
    only u1.  Vectorized over numpy arrays.
    """
    if isinstance(domain, Circle):
        ang = 2.0 * np.pi * np.asarray(u1)
        return domain.radius * (np.cos(ang) + 1j * np.sin(ang))
    if isinstance(domain, Disk):
        r = domain.radius * np.sqrt(np.asarray(u1))
        ang = 2.0 * np.pi * np.asarray(u2)
        return r * (np.cos(ang) + 1j * np.sin(ang))
    if isinstance(domain, Annulus):
        r = np.sqrt(
            domain.r_in**2 + np.asarray(u1) * (domain.r_out**2 - domain.r_in**2)
        )
        ang = 2.0 * np.pi * np.asarray(u2)
        return r * (np.cos(ang) + 1j * np.sin(ang))
    if isinstance(domain, Segment):
        return domain.z0 + np.asarray(u1) * (domain.z1 - domain.z0)
    raise TypeError(f"not a sampling domain: {domain!r}")


def draw_pairs(plan: SamplingPlan, indices) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized draw of (t1, t2) for an array of sample indices.

    Stream 0 feeds t1 and stream 1 feeds t2; streams 2+ are reserved for
    per-coefficient variates (see the family module).
    """
    idx = np.asarray(indices, dtype=np.uint64)
    u1a, u2a = uniform_pair(plan.seed, 0, idx)
    u1b, u2b = uniform_pair(plan.seed, 1, idx)
    t1 = sample_domain(plan.domain1, u1a, u2a)
    t2 = sample_domain(plan.domain2, u1b, u2b)
    return np.asarray(t1, dtype=complex), np.asarray(t2, dtype=complex)


def draw_pair(plan: SamplingPlan, index: int) -> Tuple[complex, complex]:
    """The (t1, t2) pair for one sample index; depends only on
    (plan.seed, index)."""
    if not 0 <= index < plan.count:
        raise IndexError(f"index {index} outside [0, {plan.count})")
    t1, t2 = draw_pairs(plan, np.array([index], dtype=np.uint64))
    return complex(t1[0]), complex(t2[0])
