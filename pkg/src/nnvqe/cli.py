"""Command-line entry point: ``nnvqe run|preset|presets|plot``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import config as cfgmod
from .errors import ConfigurationError, NumericalError

OUTPUT_ENV = "NNVQE_OUTPUT_DIR"
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _out_dir(cfg, override, name):
    if override:
        return Path(override)
    if cfg.get("output"):
        return Path(cfg["output"])
    return Path(os.environ.get(OUTPUT_ENV, "runs")) / name


def _execute(cfg, out, args):
    from .experiments import run

    if args.seed is not None:
        cfg = cfgmod.set_value(cfg, "seed", str(args.seed))
    if args.threads is not None:
        cfg = cfgmod.set_value(cfg, "threads", str(args.threads))
    for item in args.set or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigurationError(f"--set expects key=value, got {item!r}")
        cfg = cfgmod.set_value(cfg, key, value)
    manifest = run(cfg, out)
    print(f"wrote {manifest}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="nnvqe", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help=f"output directory (default ${OUTPUT_ENV}/<name> or ./runs/<name>)")
        p.add_argument("--seed", type=int)
        p.add_argument("--threads", type=int, help="cap on worker threads per training epoch")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config value, e.g. --set train.epochs=200")

    p_run = sub.add_parser("run", help="run an experiment from a YAML config file")
    p_run.add_argument("config")
    common(p_run)

    p_pre = sub.add_parser("preset", help="run a built-in preset")
    p_pre.add_argument("name")
    p_pre.add_argument("--show", action="store_true", help="print the resolved config and exit")
    common(p_pre)

    sub.add_parser("presets", help="list built-in presets")

    p_plot = sub.add_parser("plot", help="render a CSV artifact to an image")
    p_plot.add_argument("csv")
    p_plot.add_argument("--out")

    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(asctime)s %(name)s %(message)s")
    try:
        if args.command == "presets":
            print(cfgmod.list_presets())
            return 0
        if args.command == "plot":
            from .plotting import plot_csv

            print(f"wrote {plot_csv(args.csv, args.out)}")
            return 0
        if args.command == "run":
            cfg = cfgmod.load(args.config)
            return _execute(cfg, _out_dir(cfg, args.out, Path(args.config).stem), args)
        cfg = cfgmod.preset(args.name)
        if args.show:
            print(cfgmod.dump(cfg), end="")
            return 0
        return _execute(cfg, _out_dir(cfg, args.out, args.name), args)
    except ConfigurationError as exc:
        print(f"nnvqe: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        where = f" (epoch {exc.epoch})" if exc.epoch is not None else ""
        print(f"nnvqe: numerical failure{where}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
