"""Run configuration: INI files mapped onto a validated RunConfig.

The schema mirrors the pipeline's field names section by section
(``[family]``, ``[plan]``, ``[grid]``, ``[solver]``, ``[bounds]``,
``[render]``, ``[output]``, ``[run]``).  Unknown sections or keys are
errors, not warnings, and every error message names the offending key
as ``section.key``.
"""

from __future__ import annotations

import configparser
import io
import re
from dataclasses import dataclass, field
from typing import Optional

from . import family as family_mod
from . import sampling
from .density import Bounds
from .render import PALETTES, RenderSpec
from .solver import PrecisionConfig

__all__ = ["ConfigError", "RunConfig", "parse_config", "load_config", "preset_config_text"]

DEFAULT_GRID = 1024
MIN_GRID = 16
DEFAULT_CSV_CAP = 1_000_000


class ConfigError(ValueError):
    """Invalid or unknown configuration data; ``key`` is 'section.key'."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass
class RunConfig:
    family: family_mod.FamilySpec
    plan: sampling.SamplingPlan
    width: int = DEFAULT_GRID
    height: int = DEFAULT_GRID
    engine: str = "companion"
    precision: PrecisionConfig = field(default_factory=PrecisionConfig)
    margin_fraction: float = 0.05
    explicit_bounds: Optional[Bounds] = None
    render: RenderSpec = field(default_factory=RenderSpec)
    image_path: Optional[str] = None
    grid_dump_path: Optional[str] = None
    roots_csv_path: Optional[str] = None
    roots_csv_cap: int = DEFAULT_CSV_CAP
    workers: int = 0  # 0 = one per CPU

    def __post_init__(self):
        if self.width < MIN_GRID or self.height < MIN_GRID:
            raise ValueError(f"grid dimensions must be >= {MIN_GRID}")
        if self.engine not in ("companion", "aberth"):
            raise ValueError("engine must be 'companion' or 'aberth'")
        if self.workers < 0:
            raise ValueError("workers must be >= 0")
        if self.roots_csv_cap < 0:
            raise ValueError("roots_csv_cap must be >= 0")


class _Section:
    """One config section with consumed-key tracking and typed getters."""

    def __init__(self, name: str, items: dict):
        self.name = name
        self.items = dict(items)
        self.used = set()

    def get(self, key, default=None):
        self.used.add(key)
        return self.items.get(key, default)

    def get_int(self, key, default=None):
        raw = self.get(key)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{self.name}.{key}", f"expected an integer, got {raw!r}")

    def get_float(self, key, default=None):
        raw = self.get(key)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{self.name}.{key}", f"expected a number, got {raw!r}")

    def require(self, key):
        raw = self.get(key)
        if raw is None:
            raise ConfigError(f"{self.name}.{key}", "required key is missing")
        return raw

    def check_unknown(self, patterns=()):
        for key in self.items:
            if key in self.used:
                continue
            if any(re.fullmatch(pat, key) for pat in patterns):
                continue
            raise ConfigError(f"{self.name}.{key}", "unknown key")


def _parse_domain(sec: _Section, key: str, default=None):
    raw = sec.get(key)
    if raw is None:
        return default
    full = f"{sec.name}.{key}"
    parts = raw.split()
    try:
        kind = parts[0].lower()
        args = [float(x) for x in parts[1:]]
        if kind == "circle" and len(args) == 1:
            return sampling.Circle(args[0])
        if kind == "disk" and len(args) == 1:
            return sampling.Disk(args[0])
        if kind == "annulus" and len(args) == 2:
            return sampling.Annulus(args[0], args[1])
        if kind == "segment" and len(args) == 4:
            return sampling.Segment(complex(args[0], args[1]), complex(args[2], args[3]))
    except (ValueError, IndexError) as exc:
        raise ConfigError(full, f"bad domain spec {raw!r}: {exc}")
    raise ConfigError(
        full,
        f"bad domain spec {raw!r}; expected 'circle R', 'disk R', "
        "'annulus R_IN R_OUT' or 'segment RE0 IM0 RE1 IM1'",
    )


def _parse_vector(raw: str, key: str):
    try:
        return [complex(tok) for tok in raw.split()]
    except ValueError as exc:
        raise ConfigError(key, f"bad coefficient vector {raw!r}: {exc}")


def _build_family(sec: _Section):
    kind = sec.require("kind").lower()
    try:
        if kind == "expr":
            degree = sec.get_int("degree")
            if degree is None:
                raise ConfigError("family.degree", "required for expr families")
            terms = {}
            for key, raw in sec.items.items():
                m = re.fullmatch(r"term\.(\d+)", key)
                if m:
                    terms[int(m.group(1))] = raw
            sec.check_unknown([r"term\.\d+"])
            return family_mod.ExprFamily(degree, terms)
        if kind == "kac":
            degree = sec.get_int("degree")
            if degree is None:
                raise ConfigError("family.degree", "required for kac families")
            fam = family_mod.KacFamily(degree, sec.get_int("seed", 0))
            sec.check_unknown()
            return fam
        if kind == "lucas":
            degree = sec.get_int("degree")
            if degree is None:
                raise ConfigError("family.degree", "required for lucas families")
            sec.check_unknown()
            return family_mod.LucasFamily(degree)
        if kind == "cubic":
            sec.check_unknown()
            return family_mod.CubicFamily()
        if kind == "explicit":
            vectors = []
            for key in sorted(sec.items):
                m = re.fullmatch(r"vector\.(\d+)", key)
                if m:
                    vectors.append(_parse_vector(sec.items[key], f"family.{key}"))
            sec.check_unknown([r"vector\.\d+"])
            if not vectors:
                raise ConfigError("family.vector.0", "at least one vector required")
            return family_mod.ExplicitFamily(vectors)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError("family.kind", str(exc))
    raise ConfigError("family.kind", f"unknown family kind {kind!r}")


def parse_config(text: str) -> RunConfig:
    """Build a RunConfig from INI text; raises ConfigError on any problem."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keys are case-sensitive
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("(file)", f"unparseable config: {exc}")

    known = {"family", "plan", "grid", "solver", "bounds", "render", "output", "run"}
    for name in parser.sections():
        if name not in known:
            raise ConfigError(name, "unknown section")
    secs = {name: _Section(name, dict(parser[name]) if parser.has_section(name) else {})
            for name in known}

    # family: a preset name or an inline spec
    fam_sec = secs["family"]
    preset_name = fam_sec.get("preset")
    preset_plan = None
    if preset_name is not None:
        try:
            fam, preset_plan = family_mod.preset(preset_name)
        except family_mod.UnknownPreset:
            raise ConfigError("family.preset", f"unknown preset {preset_name!r}")
        fam_sec.check_unknown()
    else:
        fam = _build_family(fam_sec)

    # plan: preset values act as defaults; explicit keys override
    plan_sec = secs["plan"]
    count = plan_sec.get_int("count", preset_plan.count if preset_plan else None)
    if count is None:
        raise ConfigError("plan.count", "required key is missing")
    if count < 1:
        raise ConfigError("plan.count", "must be >= 1")
    seed = plan_sec.get_int("seed", preset_plan.seed if preset_plan else 0)
    if not 0 <= seed < 2**64:
        raise ConfigError("plan.seed", "must be a 64-bit unsigned integer")
    d1 = _parse_domain(plan_sec, "domain1", preset_plan.domain1 if preset_plan else None)
    d2 = _parse_domain(plan_sec, "domain2", preset_plan.domain2 if preset_plan else None)
    if d1 is None or d2 is None:
        missing = "domain1" if d1 is None else "domain2"
        raise ConfigError(f"plan.{missing}", "required key is missing")
    plan_sec.check_unknown()
    plan = sampling.SamplingPlan(d1, d2, count, seed)

    grid_sec = secs["grid"]
    width = grid_sec.get_int("width", DEFAULT_GRID)
    height = grid_sec.get_int("height", DEFAULT_GRID)
    if width < MIN_GRID:
        raise ConfigError("grid.width", f"must be >= {MIN_GRID}")
    if height < MIN_GRID:
        raise ConfigError("grid.height", f"must be >= {MIN_GRID}")
    grid_sec.check_unknown()

    solver_sec = secs["solver"]
    engine = solver_sec.get("engine", "companion")
    if engine not in ("companion", "aberth"):
        raise ConfigError("solver.engine", f"must be 'companion' or 'aberth', got {engine!r}")
    try:
        precision = PrecisionConfig(
            significand_bits=solver_sec.get_int("significand_bits", 53),
            max_iterations=solver_sec.get_int("max_iterations", 200),
            tolerance_factor=solver_sec.get_float("tolerance_factor", 4.0),
        )
    except ValueError as exc:
        raise ConfigError("solver.significand_bits", str(exc))
    solver_sec.check_unknown()

    bounds_sec = secs["bounds"]
    margin = bounds_sec.get_float("margin_fraction", 0.05)
    if not 0 <= margin < 1:
        raise ConfigError("bounds.margin_fraction", "must be in [0, 1)")
    edge_keys = ("re_min", "re_max", "im_min", "im_max")
    edges = [bounds_sec.get_float(k) for k in edge_keys]
    explicit_bounds = None
    if any(e is not None for e in edges):
        for k, e in zip(edge_keys, edges):
            if e is None:
                raise ConfigError(f"bounds.{k}", "all four explicit bounds are required")
        try:
            explicit_bounds = Bounds(*edges)
        except ValueError as exc:
            raise ConfigError("bounds.re_min", str(exc))
    bounds_sec.check_unknown()

    render_sec = secs["render"]
    palette_name = render_sec.get("palette", "ember")
    if palette_name not in PALETTES:
        raise ConfigError(
            "render.palette", f"unknown palette {palette_name!r}; choose from {sorted(PALETTES)}"
        )
    try:
        render_spec = RenderSpec(
            mode=render_sec.get("mode", "pure_pixel"),
            palette=PALETTES[palette_name],
            gamma=render_sec.get_float("gamma", 0.8),
            floor=render_sec.get_float("floor", 0.02),
            glow_sigma=render_sec.get_float("glow_sigma", 1.5),
        )
    except ValueError as exc:
        raise ConfigError("render.mode", str(exc))
    render_sec.check_unknown()

    out_sec = secs["output"]
    image_path = out_sec.get("image")
    grid_dump_path = out_sec.get("grid_dump")
    roots_csv_path = out_sec.get("roots_csv")
    csv_cap = out_sec.get_int("roots_csv_cap", DEFAULT_CSV_CAP)
    if csv_cap < 0:
        raise ConfigError("output.roots_csv_cap", "must be >= 0")
    out_sec.check_unknown()

    run_sec = secs["run"]
    workers = run_sec.get_int("workers", 0)
    if workers < 0:
        raise ConfigError("run.workers", "must be >= 0 (0 = one per CPU)")
    run_sec.check_unknown()

    return RunConfig(
        family=fam,
        plan=plan,
        width=width,
        height=height,
        engine=engine,
        precision=precision,
        margin_fraction=margin,
        explicit_bounds=explicit_bounds,
        render=render_spec,
        image_path=image_path,
        grid_dump_path=grid_dump_path,
        roots_csv_path=roots_csv_path,
        roots_csv_cap=csv_cap,
        workers=workers,
    )


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def _domain_text(d) -> str:
    if isinstance(d, sampling.Circle):
        return f"circle {float(d.radius)!r}"
    if isinstance(d, sampling.Disk):
        return f"disk {float(d.radius)!r}"
    if isinstance(d, sampling.Annulus):
        return f"annulus {float(d.r_in)!r} {float(d.r_out)!r}"
    if isinstance(d, sampling.Segment):
        z0, z1 = complex(d.z0), complex(d.z1)
        return f"segment {z0.real!r} {z0.imag!r} {z1.real!r} {z1.imag!r}"
    raise TypeError(f"not a sampling domain: {d!r}")


def _family_lines(fam) -> list:
    if isinstance(fam, family_mod.ExprFamily):
        lines = ["kind = expr", f"degree = {fam.degree}"]
        from .expr import serialize

        for k in sorted(fam.terms):
            lines.append(f"term.{k} = {serialize(fam.terms[k])}")
        return lines
    if isinstance(fam, family_mod.KacFamily):
        return ["kind = kac", f"degree = {fam.degree}", f"seed = {fam.seed}"]
    if isinstance(fam, family_mod.LucasFamily):
        return ["kind = lucas", f"degree = {fam.degree}"]
    if isinstance(fam, family_mod.CubicFamily):
        return ["kind = cubic"]
    if isinstance(fam, family_mod.ExplicitFamily):
        lines = ["kind = explicit"]
        for i, v in enumerate(fam.vectors):
            toks = " ".join(
                repr(float(c.real)) if c.imag == 0 else str(complex(c)).strip("()")
                for c in v
            )
            lines.append(f"vector.{i} = {toks}")
        return lines
    raise TypeError(f"not a family spec: {fam!r}")


def preset_config_text(name: str) -> str:
    """The full INI config equivalent to a named preset."""
    fam, plan = family_mod.preset(name)
    buf = io.StringIO()
    buf.write("[family]\n")
    buf.write("\n".join(_family_lines(fam)) + "\n\n")
    buf.write("[plan]\n")
    buf.write(f"count = {plan.count}\n")
    buf.write(f"seed = {plan.seed}\n")
    buf.write(f"domain1 = {_domain_text(plan.domain1)}\n")
    buf.write(f"domain2 = {_domain_text(plan.domain2)}\n\n")
    buf.write("[grid]\n")
    buf.write(f"width = {DEFAULT_GRID}\nheight = {DEFAULT_GRID}\n\n")
    buf.write("[solver]\nengine = companion\nsignificand_bits = 53\n\n")
    buf.write("[render]\nmode = pure_pixel\npalette = ember\n\n")
    buf.write("[output]\n")
    buf.write(f"image = {name}.png\n")
    return buf.getvalue()
