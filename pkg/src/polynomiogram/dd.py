"""Vectorized double-double (compensated 106-bit) building blocks.

Values are (hi, lo) pairs of float64 ndarrays with hi + lo the intended
value and |lo| <= 0.5 ulp(hi).  Products use Dekker splitting so no FMA
is required; everything maps to plain numpy elementwise ops and is safe
to run on whole arrays of iterates at once.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np

_SPLITTER = 134217729.0  # 2^27 + 1

Pair = Tuple[np.ndarray, np.ndarray]


def two_sum(a, b) -> Pair:
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a, b) -> Pair:
    # requires |a| >= |b|
    s = a + b
    err = b - (s - a)
    return s, err


def two_prod(a, b) -> Pair:
    p = a * b
    ahi = _SPLITTER * a
    ahi = ahi - (ahi - a)
    alo = a - ahi
    bhi = _SPLITTER * b
    bhi = bhi - (bhi - b)
    blo = b - bhi
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


def add(x: Pair, y: Pair) -> Pair:
    s1, s2 = two_sum(x[0], y[0])
    t1, t2 = two_sum(x[1], y[1])
    s2 = s2 + t1
    s1, s2 = quick_two_sum(s1, s2)
    s2 = s2 + t2
    return quick_two_sum(s1, s2)


def add_d(x: Pair, d) -> Pair:
    s, e = two_sum(x[0], d)
    e = e + x[1]
    return quick_two_sum(s, e)


def sub(x: Pair, y: Pair) -> Pair:
    return add(x, (-y[0], -y[1]))


def mul(x: Pair, y: Pair) -> Pair:
    p, e = two_prod(x[0], y[0])
    e = e + (x[0] * y[1] + x[1] * y[0])
    return quick_two_sum(p, e)


# complex double-double values are (re_pair, im_pair)

CPair = Tuple[Pair, Pair]


def cadd(a: CPair, b: CPair) -> CPair:
    return add(a[0], b[0]), add(a[1], b[1])


def cmul(a: CPair, b: CPair) -> CPair:
    ar, ai = a
    br, bi = b
    re = sub(mul(ar, br), mul(ai, bi))
    im = add(mul(ar, bi), mul(ai, br))
    return re, im


def csub_complex(a: CPair, w: np.ndarray) -> CPair:
    """Subtract an ordinary complex array from a complex double-double."""
    return add_d(a[0], -w.real), add_d(a[1], -w.imag)


def chi(a: CPair) -> np.ndarray:
    """Collapse to ordinary complex (hi words)."""
    return a[0][0] + 1j * a[1][0]
