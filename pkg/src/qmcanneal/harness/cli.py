"""Command line entry point: ``qmcanneal run`` and ``qmcanneal verify``."""
from __future__ import annotations

import argparse
import sys
import traceback

from .config import ConfigError, ExperimentConfig, load_config
from .experiment import run_experiment
from .verify import SUITES, conditions_suite

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qmcanneal", description="Quasi-Monte Carlo driven simulated annealing.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment from a JSON config")
    run.add_argument("--config", required=True, help="flat JSON config file")
    run.add_argument("--out", help="output directory (overrides the config's 'out')")
    run.add_argument("--workers", type=int, default=1, help="concurrent replications")
    run.add_argument("--stride", type=int, help="write every k-th trace row (overrides config)")
    run.add_argument("--quiet", action="store_true")

    ver = sub.add_parser("verify", help="run a verification suite")
    ver.add_argument("suite", choices=sorted(SUITES))
    ver.add_argument("--config", help="config supplying kernel/cooling for the conditions suite")
    ver.add_argument("--mode", choices=("thm1", "thm2", "thm3"), help="theorem to check (default from R)")
    ver.add_argument("--out", help="also write the report to this file")
    ver.add_argument("--workers", type=int, default=1, help="accepted for symmetry; suites run serially")
    ver.add_argument("--stride", type=int, help="unused by verify")
    ver.add_argument("--quiet", action="store_true", help="print only failing checks")
    return p


def _run(args) -> int:
    try:
        cfg = load_config(args.config)
        if args.stride is not None:
            cfg.stride = args.stride
            if cfg.stride < 1:
                raise ConfigError("stride must be >= 1")
        if args.workers < 1:
            raise ConfigError("--workers must be >= 1")
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    log = None if args.quiet else (lambda msg: print(msg, file=sys.stderr))
    try:
        run_experiment(cfg, out=args.out, workers=args.workers, log=log)
    except Exception as exc:  # noqa: BLE001 - any failure of the run maps to exit 1
        if not args.quiet:
            traceback.print_exc()
        print("run failed: %s" % exc, file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def _verify(args) -> int:
    try:
        if args.suite == "conditions":
            cfg = load_config(args.config) if args.config else ExperimentConfig()
            checks = conditions_suite(cfg, args.mode)
        else:
            checks = SUITES[args.suite]()
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    lines = ["suite=%s %s" % (args.suite, c.line()) for c in checks]
    ok = all(c.passed for c in checks)
    lines.append("suite=%s overall=%s" % (args.suite, "pass" if ok else "fail"))
    for line, chk in zip(lines, checks + [None]):
        if not args.quiet or chk is None or not chk.passed:
            print(line)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_RUNTIME


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "run":
        return _run(args)
    return _verify(args)


if __name__ == "__main__":
    sys.exit(main())
