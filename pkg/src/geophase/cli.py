"""
Geometric phase of a dephasing qubit: parameter sweeps, trajectories and
oracle checks.

    geophase sweep --config recipes/fig2a.ini [--set sweep.count=20] [--out f.csv]
    geophase trajectory --config recipes/fig2a.ini --set environment.s=0.5
    geophase oracle-check spin-small

Exit codes: 0 success, 1 oracle or validation failure, 2 invalid input.
"""

import argparse
import contextlib
import os
import sys
from dataclasses import replace

from geophase import validation
from geophase.sweep import (
    SWEEP_COLUMNS,
    TRAJECTORY_COLUMNS,
    ConfigError,
    load_spec,
    run_sweep,
    run_trajectory,
    sweep_header,
    trajectory_header,
    write_csv,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _common(p):
    p.add_argument("--config", metavar="PATH", help="INI configuration file")
    p.add_argument("--set", metavar="KEY=VALUE", action="append", default=[],
                   dest="overrides", help="override SECTION.KEY (repeatable)")
    p.add_argument("--out", metavar="PATH", help="output CSV (default: stdout)")
    p.add_argument("--grid", metavar="M", type=int, help="time grid intervals per cycle")
    p.add_argument("--no-header", action="store_true", help="omit '#' header comments")


def build_parser():
    parser = _Parser(prog="geophase", description=" ".join(__doc__.split("\n\n")[0].split()))
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("sweep", help="sweep one parameter and emit phase corrections")
    _common(p)
    p.add_argument("--jobs", metavar="N", type=int, default=1,
                   help="evaluate up to N sweep points concurrently")
    p = sub.add_parser("trajectory", help="dump gamma, chi, chi_dot for one point")
    _common(p)
    p.add_argument("--jobs", metavar="N", type=int, default=1, help="accepted, unused")
    p = sub.add_parser("oracle-check", help="validate the kernel against oracles")
    p.add_argument("selector", nargs="?", default="all",
                   choices=sorted(validation.MATRICES) + ["all"])
    p.add_argument("--out", metavar="PATH", help="write the report to PATH as well")
    return parser


def _spec(args):
    spec = load_spec(args.config, args.overrides)
    if args.grid is not None:
        spec = replace(spec, grid=args.grid)
    return spec


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _cmd_sweep(args):
    spec = _spec(args)
    if args.jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    rows = run_sweep(spec, jobs=args.jobs)
    header = () if args.no_header else sweep_header(spec)
    with _output(args.out or spec.out) as fh:
        write_csv(fh, (spec.variable,) + SWEEP_COLUMNS, rows, header)
    bad = sum(r[-1] != "ok" for r in rows)
    if bad:
        print(f"{bad} of {len(rows)} sweep points not ok", file=sys.stderr)
    return EXIT_OK


def _cmd_trajectory(args):
    spec = _spec(args)
    rows = run_trajectory(spec)
    header = () if args.no_header else trajectory_header(spec)
    with _output(args.out) as fh:
        write_csv(fh, TRAJECTORY_COLUMNS, rows, header)
    singular = [float(r[0]) for r in rows if r[-1] == "singular"]
    if singular:
        print(f"singular samples: coherence vanishes at t = {singular}", file=sys.stderr)
    return EXIT_OK


def _cmd_oracle(args):
    checks = validation.run_matrix(args.selector)
    width = max(len(c.name) for c in checks)
    lines = [f"{'case':<{width}}  {'max deviation':>13}  {'tolerance':>9}  result"]
    for c in checks:
        lines.append(f"{c.name:<{width}}  {c.deviation:>13.3e}  {c.tolerance:>9.1e}  "
                     f"{'PASS' if c.passed else 'FAIL'}")
    failed = [c for c in checks if not c.passed]
    lines.append(f"{len(checks) - len(failed)}/{len(checks)} passed")
    for c in failed:
        lines.append(f"FAILED: {c.name}")
    report = "\n".join(lines) + "\n"
    sys.stdout.write(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report)
    return EXIT_FAILED if failed else EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    handler = {"sweep": _cmd_sweep, "trajectory": _cmd_trajectory,
               "oracle-check": _cmd_oracle}[args.command]
    try:
        return handler(args)
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except ConfigError as exc:
        print(f"geophase: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"geophase: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
