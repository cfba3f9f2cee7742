"""Command-line interface: pole scans, degeneracy location, sections, traces, loops.

Exit codes: 0 success, 2 config error, 3 nothing found, 4 range/validity
error, 5 numerical failure.  Every output set is accompanied by a
``manifest.json`` recording the command, flags, and tool version; re-running
with the same manifest arguments reproduces byte-identical outputs (modulo
the timestamp field).
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from pathlib import Path

from . import __version__
from .crossing import section
from .errors import (
    ConfigError,
    EpdoubletError,
    EvaluationDomainError,
    EvaluationRangeError,
    InvalidParameterError,
    ValidityRangeError,
)
from .exceptional import RESIDUAL_TOL, ParamGrid, locate, scan_seeds
from .potential import ParamPoint, load_config
from .tracer import PathSpec, loop, trace
from .unfolding import OffsetVector, UnfoldingModel, extract, validity_radius
from .zeros import SearchRegion, find_zeros

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NOTHING_FOUND = 3
EXIT_RANGE = 4
EXIT_NUMERICAL = 5


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _parse_floats(text: str, n: int, what: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != n:
        raise ConfigError(f"{what} needs {n} comma-separated values, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"bad number in {what}: {text!r}") from exc


def _parse_region(text: str) -> SearchRegion:
    re0, re1, im0, im1 = _parse_floats(text, 4, "--region")
    return SearchRegion(re0, re1, im0, im1)


def _parse_grid(text: str) -> ParamGrid:
    parts = text.split(",")
    if len(parts) != 6:
        raise ConfigError(f"--grid needs n1,n2,x1lo,x1hi,x2lo,x2hi, got {text!r}")
    try:
        return ParamGrid(
            int(parts[0]), int(parts[1]),
            float(parts[2]), float(parts[3]), float(parts[4]), float(parts[5]),
        )
    except ValueError as exc:
        raise ConfigError(f"bad number in --grid: {text!r}") from exc


def _workers(args) -> int:
    env = os.environ.get("EPOINT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(f"EPOINT_THREADS must be an integer, got {env!r}") from exc
    if getattr(args, "workers", None):
        return max(1, args.workers)
    return os.cpu_count() or 1


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, args, command: str) -> None:
    skip = {"func"}
    params = {
        k: (str(v) if isinstance(v, Path) else v)
        for k, v in sorted(vars(args).items())
        if k not in skip
    }
    manifest = {
        "command": command,
        "config": str(args.config),
        "parameters": params,
        "output_dir": str(out),
        "tool_version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def _load_model(path: str) -> UnfoldingModel:
    try:
        return UnfoldingModel.from_json(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read model file {path}: {exc}") from exc
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"malformed model file {path}: {exc}") from exc


def cmd_poles(args) -> int:
    spec = load_config(args.config)
    p = ParamPoint(args.x1, args.x2)
    region = _parse_region(args.region)
    ps = find_zeros(spec, p, region, args.tol_refine)
    report = {
        "potential": spec.name,
        "parameters": [p.x1, p.x2],
        "region": [region.re_min, region.re_max, region.im_min, region.im_max],
        "winding": ps.winding,
        "zeros": [[z.real, z.imag] for z in ps.zeros],
        "double_zeros": [[z.real, z.imag] for z in ps.double_zeros],
        "count": ps.count,
    }
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        out = _out_dir(args)
        (out / "poles.json").write_text(text)
        _write_manifest(out, args, "poles")
    sys.stdout.write(text)
    return EXIT_OK


def cmd_find_ep(args) -> int:
    spec = load_config(args.config)
    grid = _parse_grid(args.grid)
    region = _parse_region(args.region)
    seeds = scan_seeds(spec, grid, region, workers=_workers(args))
    if not seeds:
        sys.stderr.write("no seeds: no near-degenerate doublet on the grid\n")
        return EXIT_NOTHING_FOUND
    last_err: Exception | None = None
    for seed_k, seed_p in seeds[: args.max_seeds]:
        try:
            ep = locate(spec, seed_k, seed_p, tol=args.tol_residual)
        except EpdoubletError as exc:
            last_err = exc
            continue
        model = extract(spec, ep)
        if not args.skip_validity:
            validity_radius(spec, model)
        text = model.to_json(indent=2) + "\n"
        if args.out:
            out = _out_dir(args)
            (out / "ep.json").write_text(text)
            _write_manifest(out, args, "find-ep")
        sys.stdout.write(text)
        return EXIT_OK
    sys.stderr.write(f"no seed converged to a degeneracy point: {last_err}\n")
    return EXIT_NOTHING_FOUND


def cmd_section(args) -> int:
    spec = load_config(args.config)
    model = _load_model(args.ep)
    lo, hi = _parse_floats(args.range, 2, "--range")
    result = section(spec, model, args.xi2, lo, hi, steps=args.steps,
                     refine_tol=args.tol_refine)
    lines = ["xi1,dE,dGamma,dotR,dotI,class"]
    cls = result.crossing_class.value
    for s in result.samples:
        lines.append(
            f"{_fmt(s.xi1)},{_fmt(s.delta_e)},{_fmt(s.delta_gamma)},"
            f"{_fmt(s.dot_r)},{_fmt(s.dot_i)},{cls}"
        )
    csv_text = "\n".join(lines) + "\n"
    summary = {
        "class": cls,
        "xi2_bar": args.xi2,
        "xi1_range": [lo, hi],
        "xi1_c": result.xi1_c,
        "dot_r_c": result.dot_r_c,
    }
    if args.out:
        out = _out_dir(args)
        (out / "section.csv").write_text(csv_text)
        (out / "section.json").write_text(json.dumps(summary, indent=2) + "\n")
        _write_manifest(out, args, "section")
    sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    return EXIT_OK


def _trajectory_csv(tr) -> str:
    lines = [
        "xi1,reKn,imKn,reKn1,imKn1,reEn,imEn,reEn1,imEn1,"
        "reEhatN,imEhatN,reEhatN1,imEhatN1,model_valid"
    ]
    for r in tr.records:
        en, em = r.energy_n, r.energy_m
        if r.model_valid:
            model_cols = [r.model_e_n.real, r.model_e_n.imag,
                          r.model_e_m.real, r.model_e_m.imag]
            model_txt = ",".join(_fmt(v) for v in model_cols)
        else:
            model_txt = ",,,"
        lines.append(
            f"{_fmt(r.xi1)},{_fmt(r.k_n.real)},{_fmt(r.k_n.imag)},"
            f"{_fmt(r.k_m.real)},{_fmt(r.k_m.imag)},"
            f"{_fmt(en.real)},{_fmt(en.imag)},{_fmt(em.real)},{_fmt(em.imag)},"
            f"{model_txt},{1 if r.model_valid else 0}"
        )
    return "\n".join(lines) + "\n"


def cmd_trace(args) -> int:
    spec = load_config(args.config)
    model = _load_model(args.ep)
    lo, hi = _parse_floats(args.range, 2, "--range")
    tr = trace(spec, model, PathSpec(args.xi2, lo, hi, args.steps),
               refine_tol=args.tol_refine)
    csv_text = _trajectory_csv(tr)
    if args.out:
        out = _out_dir(args)
        (out / "trajectory.csv").write_text(csv_text)
        _write_manifest(out, args, "trace")
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def cmd_loop(args) -> int:
    spec = load_config(args.config)
    model = _load_model(args.ep)
    center = None
    if args.center:
        c1, c2 = _parse_floats(args.center, 2, "--center")
        center = OffsetVector(c1, c2)
    tr = loop(spec, model, args.radius, steps=args.steps, center=center,
              turns=args.turns, refine_tol=args.tol_refine)
    report = {
        "radius": args.radius,
        "steps": args.steps,
        "turns": args.turns,
        "center": [center.xi1, center.xi2] if center else [0.0, 0.0],
        "permutation": "swap" if tr.swapped else "identity",
    }
    if args.out:
        out = _out_dir(args)
        (out / "loop.json").write_text(json.dumps(report, indent=2) + "\n")
        (out / "loop_trajectory.csv").write_text(_trajectory_csv(tr))
        _write_manifest(out, args, "loop")
    sys.stdout.write(json.dumps(report, indent=2) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epdoublet",
        description="Degeneracy points and crossing phenomenology of resonance doublets.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", required=True, help="potential config file")
        p.add_argument("--out", default=None, help="output directory (with manifest.json)")
        p.add_argument(
            "--tol-refine", type=float, default=1e-12,
            help="zero refinement tolerance (default 1e-12)",
        )

    p = sub.add_parser("poles", help="find and certify all doublet zeros in a rectangle")
    add_common(p)
    p.add_argument("--x1", type=float, default=0.0, help="control parameter x1 (default 0)")
    p.add_argument("--x2", type=float, default=0.0, help="control parameter x2 (default 0)")
    p.add_argument("--region", required=True, help="re0,re1,im0,im1 search rectangle")
    p.set_defaults(func=cmd_poles)

    p = sub.add_parser("find-ep", help="scan a parameter grid and locate a degeneracy point")
    add_common(p)
    p.add_argument("--grid", required=True, help="n1,n2,x1lo,x1hi,x2lo,x2hi scan grid")
    p.add_argument("--region", required=True, help="re0,re1,im0,im1 doublet window")
    p.add_argument(
        "--tol-residual", type=float, default=RESIDUAL_TOL,
        help=f"degeneracy residual tolerance (default {RESIDUAL_TOL})",
    )
    p.add_argument("--max-seeds", type=int, default=5, help="seeds to try (default 5)")
    p.add_argument(
        "--workers", type=int, default=None,
        help="scan worker pool size (default: cores; EPOINT_THREADS overrides)",
    )
    p.add_argument(
        "--skip-validity", action="store_true",
        help="skip the validity-radius certification",
    )
    p.set_defaults(func=cmd_find_ep)

    p = sub.add_parser("section", help="observables along a fixed-xi2 section")
    add_common(p)
    p.add_argument("--ep", required=True, help="model JSON from find-ep")
    p.add_argument("--xi2", type=float, required=True, help="fixed xi2 offset")
    p.add_argument("--range", required=True, help="lo,hi range of xi1")
    p.add_argument("--steps", type=int, default=41, help="samples (default 41)")
    p.set_defaults(func=cmd_section)

    p = sub.add_parser("trace", help="continue the doublet poles along a section path")
    add_common(p)
    p.add_argument("--ep", required=True, help="model JSON from find-ep")
    p.add_argument("--xi2", type=float, required=True, help="fixed xi2 offset")
    p.add_argument("--range", required=True, help="lo,hi range of xi1")
    p.add_argument("--steps", type=int, default=64, help="samples (default 64)")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("loop", help="monodromy of the doublet around a parameter circle")
    add_common(p)
    p.add_argument("--ep", required=True, help="model JSON from find-ep")
    p.add_argument("--radius", type=float, required=True, help="loop radius in (xi1, xi2)")
    p.add_argument("--steps", type=int, default=128, help="steps per turn (default 128)")
    p.add_argument("--center", default=None, help="loop center c1,c2 (default: the EP)")
    p.add_argument("--turns", type=int, default=1, help="number of circuits (default 1)")
    p.set_defaults(func=cmd_loop)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors, which matches the config-error code
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ConfigError, InvalidParameterError) as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except (ValidityRangeError, EvaluationRangeError, EvaluationDomainError) as exc:
        extra = ""
        if isinstance(exc, ValidityRangeError) and exc.indices:
            extra = f" (offending endpoint indices: {exc.indices})"
        sys.stderr.write(f"range error: {exc}{extra}\n")
        return EXIT_RANGE
    except (EpdoubletError, ValueError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
