"""Tone mapping, palette lookup and compositing of density fields.

Three modes: "pure_pixel" (no blurring), "smooth_glow" (one additive
Gaussian layer) and "smoky_bloom" (three additive octaves).  Compositing
happens before tone mapping so gamma applies uniformly.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .density import DensityGrid, normalize

__all__ = [
    "RenderSpec",
    "Image",
    "PALETTES",
    "MODES",
    "tone_map",
    "colorize",
    "glow",
    "bloom",
    "render",
    "write_png",
    "pixel_hash",
]

MODES = ("pure_pixel", "smooth_glow", "smoky_bloom")

# documented constants; golden tests hash images produced from these
PALETTES = {
    "ember": [
        (0.0, (0, 0, 0)),
        (0.25, (60, 8, 110)),
        (0.55, (200, 50, 40)),
        (0.8, (250, 170, 30)),
        (1.0, (255, 255, 230)),
    ],
    "ocean": [
        (0.0, (2, 4, 20)),
        (0.4, (10, 60, 130)),
        (0.75, (60, 180, 200)),
        (1.0, (235, 250, 255)),
    ],
}

GLOW_WEIGHT = 0.6
BLOOM_LAYERS = ((2.0, 0.5), (4.0, 0.25), (8.0, 0.125))


@dataclass(frozen=True)
class RenderSpec:
    mode: str = "pure_pixel"
    palette: Sequence[Tuple[float, Tuple[int, int, int]]] = field(
        default_factory=lambda: PALETTES["ember"]
    )
    gamma: float = 0.8
    floor: float = 0.02
    glow_sigma: float = 1.5

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        pal = list(self.palette)
        if len(pal) < 2:
            raise ValueError("palette needs at least 2 control points")
        pos = [p for p, _ in pal]
        if pos[0] != 0.0 or pos[-1] != 1.0 or any(b <= a for a, b in zip(pos, pos[1:])):
            raise ValueError("palette positions must rise strictly from 0 to 1")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if not 0.0 <= self.floor < 1.0:
            raise ValueError("floor must be in [0, 1)")
        if self.glow_sigma <= 0:
            raise ValueError("glow_sigma must be positive")
        object.__setattr__(self, "palette", tuple((float(p), tuple(c)) for p, c in pal))


@dataclass
class Image:
    width: int
    height: int
    pixels: np.ndarray  # (height, width, 4) uint8, alpha always 255


def tone_map(field: np.ndarray, gamma: float, floor: float) -> np.ndarray:
    """Suppress values below ``floor`` and apply a gamma curve to the rest."""
    f = np.asarray(field, dtype=float)
    out = np.zeros_like(f)
    above = f >= floor
    out[above] = ((f[above] - floor) / (1.0 - floor)) ** gamma
    return out


def colorize(field: np.ndarray, palette) -> Image:
    """Linear palette interpolation, rounded half-up to 8-bit channels."""
    f = np.asarray(field, dtype=float)
    pos = np.array([p for p, _ in palette])
    chans = []
    for c in range(3):
        vals = np.array([rgb[c] for _, rgb in palette], dtype=float)
        chan = np.interp(f, pos, vals)
        chans.append(np.floor(chan + 0.5).astype(np.uint8))
    h, w = f.shape
    pixels = np.empty((h, w, 4), dtype=np.uint8)
    for c in range(3):
        pixels[:, :, c] = chans[c]
    pixels[:, :, 3] = 255
    return Image(w, h, pixels)


def _kernel(sigma: float) -> np.ndarray:
    radius = math.ceil(3.0 * sigma)
    x = np.arange(-radius, radius + 1, dtype=float)
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def glow(field: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur; kernel truncated at ceil(3*sigma) and
    renormalized, zero padding at the border."""
    k = _kernel(sigma)
    radius = k.size // 2
    f = np.asarray(field, dtype=float)

    def blur_1d(v):
        # explicit zero padding keeps the output length right even when
        # the kernel is wider than the field
        padded = np.concatenate([np.zeros(radius), v, np.zeros(radius)])
        return np.convolve(padded, k, mode="valid")

    out = np.empty_like(f)
    for i in range(f.shape[0]):
        out[i, :] = blur_1d(f[i, :])
    for j in range(f.shape[1]):
        out[:, j] = blur_1d(out[:, j])
    return out


def bloom(field: np.ndarray) -> np.ndarray:
    """Three additive blur octaves, clamped to [0, 1]."""
    out = np.asarray(field, dtype=float).copy()
    for sigma, weight in BLOOM_LAYERS:
        out += weight * glow(field, sigma)
    return np.clip(out, 0.0, 1.0)


def render(grid: DensityGrid, spec: RenderSpec, log_scale: bool = True) -> Image:
    """normalize -> mode compositing -> tone map -> palette lookup."""
    base = normalize(grid, log_scale=log_scale)
    if spec.mode == "smooth_glow":
        base = np.clip(base + GLOW_WEIGHT * glow(base, spec.glow_sigma), 0.0, 1.0)
    elif spec.mode == "smoky_bloom":
        base = bloom(base)
    toned = tone_map(base, spec.gamma, spec.floor)
    return colorize(toned, spec.palette)


def write_png(image: Image, path) -> None:
    from PIL import Image as PILImage

    PILImage.fromarray(image.pixels, mode="RGBA").save(path, format="PNG")


def pixel_hash(image: Image) -> str:
    """SHA-256 of the raw pixel bytes (encoder-independent)."""
    return hashlib.sha256(image.pixels.tobytes()).hexdigest()
