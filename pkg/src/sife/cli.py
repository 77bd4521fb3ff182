"""Command-line interface: ``sife {sharpen,blur,morph,verify}``.

Exit codes: 0 success, 1 usage or parameter error, 2 I/O or parse error,
3 property-suite failure.  ``SIFE_WORKERS`` caps the number of worker
processes ``verify --suite all`` may use (default 1, i.e. in-process).
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import harness
from .flows import DEFAULT_TAU, FLOWS, FlowParams, gaussian_blur, run_flow
from .io import PgmError, decode_pgm, flow_report_csv, property_results_csv, write_pgm
from .morphology import StabilityError, StructuringRadius, dilate, erode

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_PROPERTY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path):
    pgm = decode_pgm(Path(path).read_bytes())
    return pgm, pgm.to_image()


def _write(path, img, like):
    Path(path).write_bytes(write_pgm(img, like.magic, like.maxval))


def cmd_sharpen(args) -> int:
    pgm, img = _read(args.input)
    tau = DEFAULT_TAU[args.flow] if args.tau is None else args.tau
    params = FlowParams(
        flow=args.flow,
        tau=tau,
        sr=StructuringRadius(args.r, args.rt_steps),
        iterations=args.iterations,
        converge_eps=args.converge_eps,
    )
    out, report = run_flow(img, params)
    _write(args.output, out, pgm)
    if args.report:
        Path(args.report).write_text(flow_report_csv(report, timing=args.timing))
    last = report.records[-1].max_update if report.records else 0.0
    print(f"{args.flow}: {report.iterations} iterations, tau={tau:g}, last max update {last:.3e}, "
          f"converged={'yes' if report.converged else 'no'}, wall-clock {report.elapsed:.3f} s")
    return EXIT_OK


def cmd_blur(args) -> int:
    pgm, img = _read(args.input)
    if args.sigma < 0:
        raise UsageError("--sigma must be nonnegative")
    _write(args.output, gaussian_blur(img, args.sigma), pgm)
    return EXIT_OK


def cmd_morph(args) -> int:
    pgm, img = _read(args.input)
    if args.steps is None:
        sr = StructuringRadius.auto(args.r, img.h, 2)
    else:
        sr = StructuringRadius(args.r, args.steps)
    op = dilate if args.op == "dilate" else erode
    _write(args.output, op(img, sr), pgm)
    return EXIT_OK


def _run_suite(name, seed, trials, iterations):
    return harness.suite(name, seed, trials, iterations)


def cmd_verify(args) -> int:
    names = ["theorem1", "maxmin2d", "equivalence", "binary"] if args.suite == "all" else [args.suite]
    workers = max(1, int(os.environ.get("SIFE_WORKERS", "1")))
    if workers > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(names))) as pool:
            futures = [pool.submit(_run_suite, n, args.seed, args.trials, args.iterations) for n in names]
            results = [r for f in futures for r in f.result()]
    else:
        results = [r for n in names for r in _run_suite(n, args.seed, args.trials, args.iterations)]
    print(harness.format_table(results))
    if args.csv:
        Path(args.csv).write_text(property_results_csv(results))
    failed = [r for r in results if r.guaranteed and not r.passed]
    return EXIT_PROPERTY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sife", description="Morphological sharpening flows on PGM images.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sharpen", help="run SIFE, SILD or the shock filter")
    s.add_argument("--flow", choices=FLOWS, default="sife")
    s.add_argument("--tau", type=float, default=None, help="time step (default 0.2, shock 0.5)")
    s.add_argument("--r", type=float, default=0.5, help="structuring element radius (SIFE)")
    s.add_argument("--rt-steps", type=int, default=1, help="Rouy-Tourin steps per radius r")
    s.add_argument("--iterations", type=int, default=100)
    s.add_argument("--converge-eps", type=float, default=None,
                   help="stop once the max update drops below this (off by default)")
    s.add_argument("--input", required=True)
    s.add_argument("--output", required=True)
    s.add_argument("--report", help="CSV file for per-iteration diagnostics")
    s.add_argument("--timing", action="store_true", help="add wall-clock column to the report")
    s.set_defaults(func=cmd_sharpen)

    b = sub.add_parser("blur", help="Gaussian degradation")
    b.add_argument("--sigma", type=float, default=3.0)
    b.add_argument("--input", required=True)
    b.add_argument("--output", required=True)
    b.set_defaults(func=cmd_blur)

    m = sub.add_parser("morph", help="Rouy-Tourin dilation or erosion")
    m.add_argument("--op", choices=("dilate", "erode"), required=True)
    m.add_argument("--r", type=float, required=True)
    m.add_argument("--steps", type=int, default=None, help="RT steps (default: fewest stable)")
    m.add_argument("--input", required=True)
    m.add_argument("--output", required=True)
    m.set_defaults(func=cmd_morph)

    v = sub.add_parser("verify", help="run property suites")
    v.add_argument("--suite", choices=harness.SUITES, default="all")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--iterations", type=int, default=100)
    v.add_argument("--csv", help="write results as CSV")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PgmError, OSError) as exc:
        print(f"sife: {exc}", file=sys.stderr)
        return EXIT_IO
    except (StabilityError, UsageError, ValueError) as exc:
        print(f"sife: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
