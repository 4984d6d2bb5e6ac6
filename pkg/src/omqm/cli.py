"""Command-line entry point.

    omqm run --experiment wick-identity --preset unit
    omqm run --experiment all --preset unit --seed 7 --out runs/unit
    omqm run --config my_run.cfg --n_paths 20000
    omqm quanta --preset unit --N_quanta 3

Exit codes: 0 all assertions pass, 1 assertion failure, 2 configuration
error, 3 numeric error. Config files are flat `key = value` text; every key
is also a CLI flag (see `omqm run --help`). OM_QM_THREADS caps ensemble
parallelism.
"""

from __future__ import annotations

import argparse
import sys

from .config import EXPERIMENTS, KEY_REGISTRY, PRESETS, build_config
from .errors import ConfigError, OmqmError
from .experiments import run_experiment

EXIT_PASS = 0
EXIT_ASSERTION = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _add_common(p: argparse.ArgumentParser, default_experiment=None) -> None:
    p.add_argument("--experiment", "-e", choices=EXPERIMENTS, default=default_experiment,
                   help="named experiment to run")
    p.add_argument("--config", "-c", metavar="PATH",
                   help="flat key = value config file ('#' comments)")
    p.add_argument("--preset", choices=sorted(PRESETS),
                   help="named parameter preset (unit: R=s=k_B=hbar=1, derives m=0.5, omega=1)")
    p.add_argument("--seed", type=int, help="RNG seed (default 7)")
    p.add_argument("--out", metavar="DIR", help="output directory (default ./out)")
    p.add_argument("--no-figures", action="store_true",
                   help="skip PNG rendering; CSV/JSON outputs only")
    group = p.add_argument_group("config keys (override file and preset)")
    for key, (typ, default, doc) in KEY_REGISTRY.items():
        group.add_argument(f"--{key}", type=str, metavar=typ.__name__.upper(),
                           help=f"{doc} (default: {default})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omqm",
        description="Numerical laboratory for the map between linear irreversible "
                    "thermodynamics and the quantum harmonic oscillator.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a named experiment and write CSV + JSON reports")
    _add_common(run_p)

    quanta_p = sub.add_parser("quanta", help="quantization calculator (alias for "
                                             "`run --experiment quanta`)")
    _add_common(quanta_p, default_experiment="quanta")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {key: getattr(args, key) for key in KEY_REGISTRY if getattr(args, key) is not None}
    try:
        cfg = build_config(
            experiment=args.experiment, preset=args.preset, config_file=args.config,
            overrides=overrides, seed=args.seed, out=args.out,
            figures=False if args.no_figures else None)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        report = run_experiment(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OmqmError as exc:
        print(f"numeric error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_PASS if report.passed() else EXIT_ASSERTION


if __name__ == "__main__":
    sys.exit(main())
