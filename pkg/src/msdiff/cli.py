"""Command-line front end.

Subcommands: run, compare, sweep-gamma, params.  Each takes --config <path>
or --preset <name> plus --out <dir>.  Exit codes: 0 success, 2 configuration
or validation error, 3 singular linear system, 4 positivity (instability)
abort, 1 anything else.
"""

import argparse
import json
import sys

from .config import PRESETS, load_config, parse_config
from .errors import (
    ComparisonError,
    ConfigurationError,
    InvalidParameterError,
    MsdiffError,
    PositivityError,
    SingularSystemError,
)
from .run import compare, params, run, sweep_gamma

EXIT_CONFIG = 2
EXIT_SINGULAR = 3
EXIT_POSITIVITY = 4


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="msdiff",
        description="1D multicomponent gas diffusion: classical and "
                    "higher-order Maxwell-Stefan models",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "integrate one model and write snapshot/diagnostic files"),
        ("compare", "run both models on the same setup and write differences"),
        ("sweep-gamma", "run the higher-order model across gamma values"),
        ("params", "print the derived dimensionless parameter table"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", help="path to a JSON config document")
        cmd.add_argument("--preset", choices=sorted(PRESETS),
                         help="use a built-in configuration")
        cmd.add_argument("--out", help="output directory (overrides config)")
        cmd.add_argument("--model", choices=["ms", "homs"],
                         help="model override (run only)")
        cmd.add_argument("--strict-cfl", action="store_true",
                         help="abort instead of warning when the CFL number "
                              "exceeds 0.5")
        if name == "sweep-gamma":
            cmd.add_argument("--gammas",
                             help="comma-separated gamma values, e.g. 0.1,0.2,0.3")
    return parser


def _load(args):
    if args.config and args.preset:
        raise ConfigurationError("give either --config or --preset, not both")
    if args.config:
        cfg = load_config(args.config)
    elif args.preset:
        cfg = parse_config(json.dumps({"preset": args.preset}))
    else:
        raise ConfigurationError("one of --config or --preset is required")
    if args.strict_cfl:
        cfg.strict_cfl = True
    if getattr(args, "model", None):
        cfg.model = args.model
    return cfg


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load(args)
        out = args.out or cfg.output_dir
        if args.command == "run":
            report = run(cfg, out_dir=out)
            print(f"run complete: model={report.model}, "
                  f"{len(report.snapshots)} snapshots, CFL={report.cfl:.5f}"
                  f"{' (flagged)' if report.cfl_flagged else ''}")
        elif args.command == "compare":
            result = compare(cfg, out_dir=out)
            last = result.metrics[-1]
            print(f"compare complete: {len(result.metrics)} snapshots; "
                  f"final n gap Linf={last.n_linf.max():.6g}")
        elif args.command == "sweep-gamma":
            gammas = None
            if getattr(args, "gammas", None):
                gammas = [float(g) for g in args.gammas.split(",")]
            result = sweep_gamma(cfg, gamma_list=gammas, out_dir=out)
            print("gamma sweep complete:")
            for g, metrics in zip(result.gammas, result.metrics):
                print(f"  gamma={g:g}: final n gap Linf={metrics[-1].n_linf.max():.6g}")
        elif args.command == "params":
            print(params(cfg))
    except (ConfigurationError, InvalidParameterError, ComparisonError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SingularSystemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except PositivityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_POSITIVITY
    except MsdiffError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
