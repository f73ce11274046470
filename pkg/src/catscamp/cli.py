"""Command-line front end: run, sweep, wigner, validate.

Configuration precedence is flag > config file > default.  The config file
is flat ``key = value`` text with ``#`` comments; keys mirror the long
flags.  Exit codes: 0 success, 1 engine/runtime error, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import audit, sweeps
from .fock import TruncationError
from .optimize import BracketError
from .phasespace import PhaseSpaceError
from .pipeline import PipelineConfig, run_parity_swap, wigner_report
from .sweeps import SweepSpec, format_number

CONFIG_KEYS = {
    "engine": str,
    "alpha": float,
    "parity": str,
    "squeezing": str,
    "t1": float,
    "t2": float,
    "eta1": float,
    "eta2": float,
    "truncation": int,
    "figure": str,
    "grid": str,
    "out": str,
}


class ConfigError(Exception):
    pass


def _parse_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return values


def _parse_grid(text: str):
    """MIN:MAX:STEP -> inclusive ascending grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be MIN:MAX:STEP, got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"grid must be numeric MIN:MAX:STEP: {exc}") from exc
    if step <= 0:
        raise ConfigError(f"grid step must be positive, got {step}")
    if hi < lo:
        raise ConfigError(f"grid MAX {hi} below MIN {lo}")
    n = int(round((hi - lo) / step))
    grid = lo + step * np.arange(n + 1)
    return grid[grid <= hi + 1e-12 * max(1.0, abs(hi))]

def _squeezing_value(text):
    if text is None or text == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"squeezing must be 'auto' or a number, got {text!r}") from exc


def _merged(args, file_cfg: dict, key: str, default=None):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in file_cfg:
        return file_cfg[key]
    return default


def _build_pipeline_config(args, file_cfg) -> PipelineConfig:
    try:
        return PipelineConfig(
            alpha=float(_merged(args, file_cfg, "alpha", 1.0)),
            parity=_merged(args, file_cfg, "parity", "even"),
            squeezing=_squeezing_value(_merged(args, file_cfg, "squeezing", "auto")),
            t1=float(_merged(args, file_cfg, "t1", np.sqrt(0.5))),
            t2=float(_merged(args, file_cfg, "t2", np.sqrt(0.95))),
            eta1=float(_merged(args, file_cfg, "eta1", 1.0)),
            eta2=float(_merged(args, file_cfg, "eta2", 1.0)),
            engine=_merged(args, file_cfg, "engine", "chi"),
            truncation=_merged(args, file_cfg, "truncation", None),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def _add_common_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--engine", choices=("chi", "fock", "both"))
    parser.add_argument("--alpha", type=float, help="input cat size")
    parser.add_argument("--parity", choices=("even", "odd"))
    parser.add_argument("--squeezing", help="'auto' or a signed squeezing value")
    parser.add_argument("--t1", type=float, help="comparison-splitter transmission")
    parser.add_argument("--t2", type=float, help="subtraction-splitter transmission")
    parser.add_argument("--eta1", type=float, help="comparison detector efficiency")
    parser.add_argument("--eta2", type=float, help="subtraction detector efficiency")
    parser.add_argument("--truncation", type=int, help="fock-engine dimension override")


def _cmd_run(args) -> int:
    file_cfg = _parse_config_file(args.config) if args.config else {}
    cfg = _build_pipeline_config(args, file_cfg)
    result = run_parity_swap(cfg)
    for key, value in result.to_record().items():
        print(f"{key}={format_number(value)}")
    return 0


def _cmd_sweep(args) -> int:
    file_cfg = _parse_config_file(args.config) if args.config else {}
    figure = _merged(args, file_cfg, "figure")
    if figure is None:
        raise ConfigError("sweep needs --figure (or a 'figure' config key)")
    grid_text = _merged(args, file_cfg, "grid")
    if grid_text is None:
        raise ConfigError("sweep needs --grid MIN:MAX:STEP")
    alphas = _parse_grid(grid_text)
    if alphas.size == 0:
        raise ConfigError("sweep grid is empty")
    out = _merged(args, file_cfg, "out")
    if out is None:
        raise ConfigError("sweep needs --out PATH")
    try:
        spec = SweepSpec(
            figure=figure,
            alphas=alphas,
            parity=_merged(args, file_cfg, "parity", "even"),
            t2=float(_merged(args, file_cfg, "t2", np.sqrt(0.95))),
            eta1=float(_merged(args, file_cfg, "eta1", 1.0)),
            eta2=float(_merged(args, file_cfg, "eta2", 1.0)),
            t1=float(_merged(args, file_cfg, "t1", np.sqrt(0.5))),
            squeezing=_squeezing_value(_merged(args, file_cfg, "squeezing", "auto")),
            engine=_merged(args, file_cfg, "engine", "chi"),
            truncation=_merged(args, file_cfg, "truncation", None),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    sweeps.run_sweep_to_path(spec, out)
    print(f"wrote {out}")
    return 0


def _cmd_wigner(args) -> int:
    file_cfg = _parse_config_file(args.config) if args.config else {}
    cfg = _build_pipeline_config(args, file_cfg)
    grid_text = _merged(args, file_cfg, "grid", "-6:6:0.05")
    axis = _parse_grid(grid_text)
    if axis.size < 2:
        raise ConfigError("wigner grid needs at least two points")
    out = _merged(args, file_cfg, "out")
    if out is None:
        raise ConfigError("wigner needs --out BASEPATH")
    report = wigner_report(cfg, axis, axis)
    for suffix, field in (("output", report.w_output), ("ideal", report.w_ideal)):
        path = f"{out}_{suffix}.csv"
        with open(path, "w", encoding="ascii", newline="") as handle:
            handle.write("q,p,w\n")
            for i, q in enumerate(report.q):
                for j, p in enumerate(report.p):
                    handle.write(
                        f"{format_number(q)},{format_number(p)},{format_number(field[i, j])}\n"
                    )
        print(f"wrote {path}")
    print(f"beta_star={format_number(report.beta_star)}")
    print(f"min_output={format_number(report.min_output)}")
    print(f"min_ideal={format_number(report.min_ideal)}")
    print(f"min_ratio={format_number(report.min_ratio)}")
    return 0


def _cmd_validate(args) -> int:
    checks = audit.run_audit()
    print(audit.format_report(checks))
    if args.out:
        payload = [
            {"name": c.name, "category": c.category, "status": c.status, "detail": c.detail}
            for c in checks
        ]
        with open(args.out, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=2)
            handle.write("\n")
        print(f"wrote {args.out}")
    return 0 if audit.audit_passed(checks) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catscamp",
        description="Two-engine simulator of a parity-swapping cat-state amplifier.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one amplifier configuration")
    _add_common_flags(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="write a figure sweep as CSV")
    _add_common_flags(p_sweep)
    p_sweep.add_argument("--figure", help="figure id (squeezing, squeeze_fidelity, "
                                          "gain, fidelity, probability, ideal_gain "
                                          "or 3a/3b/4a/4b/5a/5b/6a/6b/9)")
    p_sweep.add_argument("--grid", help="input-size grid MIN:MAX:STEP")
    p_sweep.add_argument("--out", help="output CSV path")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_wig = sub.add_parser("wigner", help="export Wigner maps of output and ideal cat")
    _add_common_flags(p_wig)
    p_wig.add_argument("--grid", help="phase-space lattice MIN:MAX:STEP, both axes "
                                       "(use --grid=-6:6:0.05 for negative bounds)")
    p_wig.add_argument("--out", help="output base path (writes _output.csv and _ideal.csv)")
    p_wig.set_defaults(func=_cmd_wigner)

    p_val = sub.add_parser("validate", help="run the invariant and closed-form audits")
    p_val.add_argument("--out", help="also write the report as JSON")
    p_val.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PhaseSpaceError, TruncationError, BracketError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
