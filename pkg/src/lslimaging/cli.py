"""Command-line interface: simulate, reconstruct, experiment."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .errors import ExperimentError, ImagingError
from .experiment import (
    PRESETS,
    load_config,
    preset_config,
    read_summary,
    run_experiment,
    write_table,
)
from .grid import Grid
from .imaging import DEFAULT_REL_THRESHOLD, DEFAULT_GRID_NODES, METHODS, reconstruct
from .rom import DEFAULT_TRUNCATION_TOL
from .transfer import generate_dataset, load_dataset, save_dataset
from .sampling import weyl_sample


def _parse_overrides(pairs):
    out = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise ValueError(f"--set expects key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _cmd_simulate(args) -> int:
    stage = "load-config"
    try:
        config = load_config(args.config, **_parse_overrides(args.set))
        stage = "sampling"
        plan = weyl_sample(config.N, config.f, config.L)
        stage = "simulate"
        grid = Grid(config.L, config.n)
        data = generate_dataset(config.potential, plan.lambdas, grid, label=config.label)
        stage = "write-output"
        save_dataset(data, args.out)
    except (ImagingError, ValueError, OSError) as exc:
        print(f"error in stage '{stage}': {exc}", file=sys.stderr)
        return 1
    print(f"wrote {data.m} samples for medium '{data.label}' to {args.out}")
    return 0


def _cmd_reconstruct(args) -> int:
    stage = "load-data"
    try:
        data = load_dataset(args.data)
        data0 = load_dataset(args.background)
        stage = "reconstruct"
        grid = Grid(data.L, args.nodes)
        result = reconstruct(
            data, data0, args.method, grid=grid,
            rel_threshold=args.threshold, truncation_tol=args.truncation_tol,
        )
        stage = "write-output"
        nan_col = np.full(grid.n, np.nan)
        columns = {
            "born": result.p_est if args.method == "born" else nan_col,
            "lsl": result.p_est if args.method == "lsl" else nan_col,
        }
        write_table(
            args.out,
            ("x", "p_true", "p_born", "p_lsl"),
            (grid.nodes, nan_col, columns["born"], columns["lsl"]),
        )
    except (ImagingError, ValueError, OSError) as exc:
        print(f"error in stage '{stage}': {exc}", file=sys.stderr)
        return 1
    print(
        f"method={result.method} rank={result.rank} "
        f"residual={result.residual_norm:.6e} -> {args.out}"
    )
    return 0


def _cmd_experiment(args) -> int:
    overrides = {
        "f": args.f,
        "n": args.nodes,
        "N": args.intervals,
        "rel_threshold": args.threshold,
        "truncation_tol": args.truncation_tol,
    }
    if args.internal_lambda is not None:
        overrides["internal_lambda"] = args.internal_lambda
    if args.methods is not None:
        overrides["methods"] = tuple(tok.strip() for tok in args.methods.split(","))
    try:
        config = preset_config(args.preset, outdir=Path(args.outdir), **overrides)
        paths = run_experiment(config)
    except ExperimentError as exc:
        print(f"error in stage '{exc.stage}': {exc.cause}", file=sys.stderr)
        return 1
    except (ImagingError, ValueError, OSError) as exc:
        print(f"error in stage 'configure': {exc}", file=sys.stderr)
        return 1
    summary = read_summary(paths["summary"])
    for key in ("label", "m", "internal_lambda", "err_internal_background",
                "err_internal_lsl", "err_born", "err_lsl"):
        print(f"{key} = {summary[key]}")
    for name, path in paths.items():
        print(f"wrote {name}: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lslimaging",
        description="1D potential imaging from boundary spectral data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="generate a transfer-function dataset")
    p_sim.add_argument("--config", required=True, help="key=value configuration file")
    p_sim.add_argument("--out", required=True, help="output dataset file")
    p_sim.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a configuration key (repeatable)")
    p_sim.set_defaults(func=_cmd_simulate)

    p_rec = sub.add_parser("reconstruct", help="reconstruct a potential from datasets")
    p_rec.add_argument("--data", required=True, help="dataset of the unknown medium")
    p_rec.add_argument("--background", required=True, help="dataset of the background medium")
    p_rec.add_argument("--method", required=True, choices=METHODS)
    p_rec.add_argument("--threshold", type=float, default=DEFAULT_REL_THRESHOLD,
                       help="relative singular-value cutoff (default %(default)g)")
    p_rec.add_argument("--out", required=True, help="output reconstruction table")
    p_rec.add_argument("--nodes", type=int, default=DEFAULT_GRID_NODES,
                       help="grid nodes for the reconstruction (default %(default)s)")
    p_rec.add_argument("--truncation-tol", type=float, default=DEFAULT_TRUNCATION_TOL,
                       help="reduced-model truncation tolerance (default %(default)g)")
    p_rec.set_defaults(func=_cmd_reconstruct)

    p_exp = sub.add_parser("experiment", help="run a full preset experiment")
    p_exp.add_argument("preset", choices=PRESETS)
    p_exp.add_argument("--f", type=int, default=4,
                       help="sample points per resonance interval (default %(default)s)")
    p_exp.add_argument("--outdir", required=True, help="directory for output files")
    p_exp.add_argument("--intervals", type=int, default=10, dest="intervals",
                       help="number of resonance intervals (default %(default)s)")
    p_exp.add_argument("--nodes", type=int, default=DEFAULT_GRID_NODES)
    p_exp.add_argument("--threshold", type=float, default=DEFAULT_REL_THRESHOLD)
    p_exp.add_argument("--truncation-tol", type=float, default=DEFAULT_TRUNCATION_TOL)
    p_exp.add_argument("--internal-lambda", type=float, default=None,
                       help="spectral parameter for the internal-solution table")
    p_exp.add_argument("--methods", default=None,
                       help="comma-separated subset of born,lsl (default both)")
    p_exp.set_defaults(func=_cmd_experiment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
