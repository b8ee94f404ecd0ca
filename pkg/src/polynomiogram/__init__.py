"""Polynomiogram: root-density maps of parameterized polynomial families.

Samples two latent complex parameters from geometric domains, maps them
through coefficient expressions into polynomials, solves for all roots,
and aggregates the root cloud into a rendered density image.
"""

from .density import Bounds, DensityGrid, accumulate, compute_bounds, merge, normalize
from .expr import EvalError, ParseError, evaluate, parse, serialize
from .family import (
    CubicFamily,
    ExplicitFamily,
    ExprFamily,
    KacFamily,
    LucasFamily,
    Polynomial,
    REJECTED,
    instantiate,
    lucas_coefficients,
    preset,
)
from .render import Image, RenderSpec, render, tone_map
from .sampling import (
    Annulus,
    Circle,
    Disk,
    SamplingPlan,
    Segment,
    draw_pair,
    sample_domain,
)
from .solver import (
    PrecisionConfig,
    RootSet,
    companion_matrix,
    polish,
    roots_aberth,
    roots_companion,
    scaled_residual,
)

__version__ = "0.1.0"
