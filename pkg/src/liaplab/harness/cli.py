"""Command-line entry point ``liaplab``.

Exit codes: 0 all checks pass, 1 some check fails, 2 only inconclusive
checks short of passing, 3 configuration or hypothesis error.
"""
from __future__ import annotations

import argparse
import sys

from ..errors import ConfigurationError, LiapLabError
from .config import load_config
from .experiment import (EXIT_ERROR, format_reports, reproduce_example, run_experiment,
                         run_sweep)


def _parser():
    p = argparse.ArgumentParser(prog="liaplab", description="Stability certificates and "
                                "envelope checks for a damped third-order wave equation.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, text in (("certify", "check hypotheses and print the certified statements"),
                       ("simulate", "certify and integrate, writing the trajectory"),
                       ("verify", "simulate and check every certified envelope")):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("config", help="TOML run configuration")
        sp.add_argument("--out", help="output directory (overrides the config and LIAPLAB_OUT)")
    sp = sub.add_parser("reproduce", help="run a pinned example")
    sp.add_argument("which", choices=("example1", "example2", "example3", "remark1"))
    sp.add_argument("--out", help="output directory")
    sp.add_argument("--plots", action="store_true", help="also write SVG plots")
    sp = sub.add_parser("sweep", help="verify a config over a list of parameter values")
    sp.add_argument("config")
    sp.add_argument("--param", required=True, help="section.key, e.g. forcing.b")
    sp.add_argument("--values", required=True, help="comma-separated TOML literals")
    sp.add_argument("--mode", default="verify", choices=("certify", "simulate", "verify"))
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--out", help="output directory")
    return p


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        if args.command == "reproduce":
            bundle = reproduce_example(args.which, args.out, plots=args.plots)
        elif args.command == "sweep":
            cfg = load_config(args.config)
            values = [v for v in args.values.split(",") if v.strip()]
            if not values:
                raise ConfigurationError("--values is empty")
            bundle = run_sweep(cfg, args.param, values, args.mode, args.out, args.workers)
            for run in bundle.info["runs"]:
                print(f"{args.param}={run['value']}: {run['verdict']}  ({run['outdir']})")
        else:
            cfg = load_config(args.config)
            bundle = run_experiment(cfg, args.command, args.out)
    except (LiapLabError, ValueError) as exc:
        print(f"liaplab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"liaplab: I/O error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.command != "sweep":
        print("\n".join(format_reports(bundle)))
    for key, path in sorted(bundle.paths.items()):
        print(f"wrote {key}: {path}")
    return bundle.exit_code


if __name__ == "__main__":
    sys.exit(main())
