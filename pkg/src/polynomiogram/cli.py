"""Command-line entry point.

Subcommands: ``render`` (config-driven density image), ``validate``
(quantitative suites), ``roots`` (solve one polynomial), ``preset``
(inspect built-in configurations).  Exit codes: 0 success, 1 I/O
failure, 2 configuration/input error, 3 excessive solver failures,
4 failed validation metric.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__, family, pipeline, validate
from .config import ConfigError, load_config, preset_config_text
from .density import dump_polygrid
from .render import render as render_image
from .render import write_png
from .solver import (
    DegenerateInput,
    PrecisionConfig,
    roots_aberth,
    roots_companion,
    scaled_residual,
)

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_METRIC = 4

MAX_FAILED_FRACTION = 0.001


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polynomiogram",
        description="Root-density maps of parameterized polynomial families.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_render = sub.add_parser("render", help="run a config file end to end")
    p_render.add_argument("config", help="path to an INI run config")
    p_render.add_argument("--seed", type=int, default=None,
                          help="override the plan seed")
    p_render.add_argument("--workers", type=int, default=None,
                          help="override the worker count (0 = one per CPU)")

    p_val = sub.add_parser("validate", help="run a validation suite")
    p_val.add_argument("suite", choices=sorted(validate.SUITES))
    p_val.add_argument("--degree", type=int, default=50, help="kac: polynomial degree")
    p_val.add_argument("--samples", type=int, default=10_000, help="kac: sample count")
    p_val.add_argument("--n", type=int, default=32, help="lucas: polynomial degree")
    p_val.add_argument("--bits", type=int, default=53, choices=(53, 106),
                       help="lucas: solver significand bits")
    p_val.add_argument("--seed", type=int, default=1)
    p_val.add_argument("--json", dest="json_path", default=None,
                       help="report path (default: validate_<suite>.json)")

    p_roots = sub.add_parser("roots", help="solve one polynomial a0 a1 ... an")
    p_roots.add_argument("--engine", choices=("companion", "aberth"), default="companion")
    p_roots.add_argument("--bits", type=int, default=53, choices=(53, 106))
    p_roots.add_argument("coeffs", nargs="+",
                         help="coefficients from constant to leading; complex like 1+2j ok")

    p_preset = sub.add_parser("preset", help="inspect a built-in configuration")
    p_preset.add_argument("name")
    p_preset.add_argument("--print-config", action="store_true",
                          help="print the full equivalent config file")
    return parser


def cmd_render(args) -> int:
    try:
        cfg = load_config(args.config)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.seed is not None or args.workers is not None:
        from dataclasses import replace

        plan = cfg.plan
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                print("config error: plan.seed: must be a 64-bit unsigned integer",
                      file=sys.stderr)
                return EXIT_CONFIG
            plan = replace(plan, seed=args.seed)
        cfg = replace(cfg, plan=plan,
                      workers=cfg.workers if args.workers is None else args.workers)

    try:
        result = pipeline.run(cfg)
    except pipeline.PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    try:
        if cfg.image_path:
            img = render_image(result.grid, cfg.render)
            write_png(img, cfg.image_path)
            print(f"image={cfg.image_path}")
        if cfg.grid_dump_path:
            with open(cfg.grid_dump_path, "w", encoding="utf-8") as fh:
                fh.write(dump_polygrid(result.grid))
            print(f"grid_dump={cfg.grid_dump_path}")
        if cfg.roots_csv_path:
            with open(cfg.roots_csv_path, "w", encoding="utf-8") as fh:
                fh.write("re,im,sample_index\n")
                for re_part, im_part, k in result.roots_rows or []:
                    fh.write(f"{re_part!r},{im_part!r},{k}\n")
            print(f"roots_csv={cfg.roots_csv_path}")
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO

    print(f"samples={result.samples}")
    print(f"rejected={result.rejected}")
    print(f"failed={result.failed}")
    print(f"roots_binned={result.roots_binned}")
    print(f"roots_dropped={result.roots_dropped}")
    print(f"wall_time={result.wall_time:.3f}")
    if result.failed > MAX_FAILED_FRACTION * result.samples:
        print("error: solver failure fraction exceeds 0.1%", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def cmd_validate(args) -> int:
    if args.suite == "kac":
        report = validate.kac_suite(degree=args.degree, samples=args.samples,
                                    seed=args.seed)
    elif args.suite == "lucas":
        report = validate.lucas_suite(n=args.n, bits=args.bits)
    else:
        report = validate.cubic_suite(seed=args.seed)
    for line in report.lines():
        print(line)
    json_path = args.json_path or f"validate_{args.suite}.json"
    try:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(report.to_json() + "\n")
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"report={json_path}")
    return EXIT_OK if report.passed else EXIT_METRIC


def cmd_roots(args) -> int:
    try:
        coeffs = [complex(tok) for tok in args.coeffs]
    except ValueError as exc:
        print(f"error: bad coefficient: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        p = family.Polynomial(coeffs)
        if p.degree < 1:
            raise ValueError("need degree >= 1")
        if args.engine == "aberth":
            rs = roots_aberth(p, PrecisionConfig(significand_bits=args.bits))
        else:
            rs = roots_companion(p)
    except (ValueError, DegenerateInput) as exc:
        print(f"error: degenerate input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    order = np.lexsort((rs.roots.imag, rs.roots.real))
    for z in rs.roots[order]:
        print(
            f"re={float(z.real)!r} im={float(z.imag)!r} "
            f"residual={scaled_residual(p, complex(z)):.3e}"
        )
    return EXIT_OK


def cmd_preset(args) -> int:
    try:
        fam, plan = family.preset(args.name)
    except family.UnknownPreset:
        print(f"error: unknown preset {args.name!r}; choose from "
              f"{', '.join(family.PRESET_NAMES)}", file=sys.stderr)
        return EXIT_CONFIG
    if args.print_config:
        sys.stdout.write(preset_config_text(args.name))
        return EXIT_OK
    print(f"preset={args.name}")
    print(f"family={type(fam).__name__}")
    degree = getattr(fam, "degree", None)
    if degree is not None:
        print(f"degree={degree}")
    print(f"count={plan.count}")
    print(f"seed={plan.seed}")
    print(f"domain1={type(plan.domain1).__name__.lower()}")
    print(f"domain2={type(plan.domain2).__name__.lower()}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "render": cmd_render,
        "validate": cmd_validate,
        "roots": cmd_roots,
        "preset": cmd_preset,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
