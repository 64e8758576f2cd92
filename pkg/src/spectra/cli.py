"""Configuration-driven command line front end.

One JSON file describes the experiment; subcommands choose what to run:

    spectra validate|sweep|verify|schrodinger|torsion|oracle --config c.json --out dir

Exit codes: 0 all checks pass, 1 invalid input, 2 a verdict failed,
3 numerical failure (mesh or solver).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import jsonschema

from .eigensolve import ConvergenceError
from .experiments import (
    TheoremReport,
    TheoryViolationError,
    schrodinger_sweep,
    sweep,
    torsion_sweep,
    verify_theorems,
    monotonicity_checks,
    derivative_sign_checks,
    endpoint_derivative_checks,
    critical_point_check,
    constancy_check,
)
from .geometry import DomainPair, RadialProfile, check_free_rotation, validate_profile
from .mesh import MeshError, MeshParams
from .oracle import first_j0_zero, oracle_annulus
from .reporting import write_report_json, write_sweep_csv, write_sweep_svg

MODES = ("validate", "sweep", "verify", "schrodinger", "torsion", "oracle")

_PROFILE_SCHEMA = {
    "type": "object",
    "required": ["series"],
    "properties": {
        "n": {"type": "integer", "minimum": 2},
        "series": {
            "type": "array",
            "minItems": 1,
            "maxItems": 33,
            "items": {"type": "number"},
        },
    },
    "additionalProperties": False,
}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["n", "outer", "inner"],
    "properties": {
        "n": {"type": "integer", "minimum": 2},
        "outer": _PROFILE_SCHEMA,
        "inner": _PROFILE_SCHEMA,
        "t_samples": {"type": "integer", "minimum": 5},
        "mesh": {
            "type": "object",
            "properties": {
                "target_h": {"type": "number", "exclusiveMinimum": 0},
                "refinement_levels": {"type": "integer", "minimum": 0},
                "boundary_samples_outer": {"type": "integer", "minimum": 32},
                "boundary_samples_inner": {"type": "integer", "minimum": 32},
            },
            "additionalProperties": False,
        },
        "alpha": {"type": "number"},
        "probe_t": {"type": "number", "exclusiveMinimum": 0},
        "reflection_samples": {"type": "integer", "minimum": 10},
        "fd": {"type": "boolean"},
    },
    "additionalProperties": False,
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    pair: DomainPair
    t_samples: int
    mesh: MeshParams
    alpha: float | None
    probe_t: float | None
    reflection_samples: int
    with_fd: bool


def load_config(path: Path | str) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    try:
        jsonschema.validate(raw, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config rejected by schema: {exc.message}") from exc

    n = raw["n"]
    for key in ("outer", "inner"):
        if "n" in raw[key] and raw[key]["n"] != n:
            raise ConfigError(f"profile {key!r} declares n={raw[key]['n']} but the run uses n={n}")
    pair = DomainPair(
        outer=RadialProfile(n, tuple(raw["outer"]["series"])),
        inner=RadialProfile(n, tuple(raw["inner"]["series"])),
    )
    mesh_raw = raw.get("mesh", {})
    mesh = MeshParams(
        target_h=mesh_raw.get("target_h", 0.02),
        boundary_samples_outer=mesh_raw.get("boundary_samples_outer"),
        boundary_samples_inner=mesh_raw.get("boundary_samples_inner"),
        refinement_levels=mesh_raw.get("refinement_levels", 1),
    )
    return RunConfig(
        pair=pair,
        t_samples=raw.get("t_samples", 9),
        mesh=mesh,
        alpha=raw.get("alpha"),
        probe_t=raw.get("probe_t"),
        reflection_samples=raw.get("reflection_samples", 500),
        with_fd=raw.get("fd", False),
    )


def input_problems(config: RunConfig) -> list[str]:
    """Geometric validation failures, named for the exit-1 diagnostics."""
    problems = []
    for label, profile in (("outer", config.pair.outer), ("inner", config.pair.inner)):
        report = validate_profile(profile)
        if not report.positive:
            problems.append(
                f"{label} profile is not positive (first offending theta "
                f"{report.bad_positivity[0]:.6g})"
            )
        if not report.nondecreasing:
            hint = (
                " (valid after a phase shift of pi/n)"
                if report.phase_shift is not None
                else ""
            )
            problems.append(
                f"{label} profile is not nondecreasing on (0, pi/n)" + hint
            )
    rotation = check_free_rotation(config.pair)
    if not rotation.ok:
        problems.append(
            "free-rotation violation: the obstacle maximum radius must stay "
            f"strictly below the outer minimum (margin {rotation.margin:.6g})"
        )
    return problems


def _write_common(out: Path, records, report: TheoremReport, mode: str, ylabel: str):
    write_sweep_csv(out / "sweep.csv", records)
    write_sweep_svg(out / "lambda_vs_t.svg", records, ylabel)
    write_report_json(out / "report.json", {"mode": mode, **report.to_dict()})


def run(mode: str, config_path: str, out_dir: str) -> int:
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}")
    try:
        config = load_config(config_path)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    problems = input_problems(config)
    if mode == "validate":
        write_report_json(
            out / "report.json",
            {"mode": mode, "passed": not problems, "problems": problems},
        )
        for p in problems:
            print(f"invalid input: {p}", file=sys.stderr)
        return 0 if not problems else 1
    if problems:
        for p in problems:
            print(f"invalid input: {p}", file=sys.stderr)
        return 1

    try:
        if mode == "oracle":
            outer, inner = config.pair.outer, config.pair.inner
            if not (outer.is_disk and inner.is_disk):
                print(
                    "error: the oracle mode needs constant (disk) profiles",
                    file=sys.stderr,
                )
                return 1
            ref = oracle_annulus(inner.series[0], outer.series[0])
            write_report_json(
                out / "report.json",
                {
                    "mode": mode,
                    "passed": True,
                    "inner_radius": ref.inner_radius,
                    "outer_radius": ref.outer_radius,
                    "k1": ref.k1,
                    "lambda1": ref.lambda1,
                    "j0_first_zero": first_j0_zero(),
                },
            )
            return 0

        if mode == "sweep":
            records = sweep(
                config.pair, config.mesh, config.t_samples, with_fd=config.with_fd
            )
            report = TheoremReport()
            degenerate = config.pair.outer.is_disk or config.pair.inner.is_disk
            if degenerate:
                report.extend([constancy_check(records)])
            else:
                report.extend(monotonicity_checks(records))
                report.extend(derivative_sign_checks(records))
                report.extend(endpoint_derivative_checks(records))
                report.extend([critical_point_check(records)])
            _write_common(out, records, report, mode, "lambda")
        elif mode == "verify":
            report, records = verify_theorems(
                config.pair,
                config.mesh,
                t_samples=config.t_samples,
                probe_t=config.probe_t,
                reflection_samples=config.reflection_samples,
                with_fd=config.with_fd,
            )
            _write_common(out, records, report, mode, "lambda")
        elif mode == "schrodinger":
            if config.alpha is None or config.alpha == 0.0:
                print(
                    "error: schrodinger mode needs a nonzero 'alpha' in the config",
                    file=sys.stderr,
                )
                return 1
            records, report = schrodinger_sweep(
                config.pair, config.alpha, config.mesh, config.t_samples
            )
            _write_common(out, records, report, mode, "mu")
        elif mode == "torsion":
            records, report = torsion_sweep(config.pair, config.mesh, config.t_samples)
            _write_common(out, records, report, mode, "torsion energy")
        else:  # pragma: no cover - guarded above
            raise AssertionError(mode)
    except (MeshError, ConvergenceError, TheoryViolationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3

    if not report.passed:
        failed = [c.name for c in report.checks if not c.passed]
        print(f"checks failed: {', '.join(failed)}", file=sys.stderr)
        return 2
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="spectra",
        description=(
            "Fundamental Dirichlet eigenvalue of a domain with a rotating "
            "obstacle: sweeps, boundary-integral derivatives, and extremality "
            "verdicts."
        ),
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        p = sub.add_parser(mode)
        p.add_argument("--config", required=True, help="path to the JSON run configuration")
        p.add_argument("--out", required=True, help="output directory for artifacts")
    args = parser.parse_args(argv)
    try:
        return run(args.mode, args.config, args.out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
