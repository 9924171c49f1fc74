"""Command-line front end: ``generate``, ``eval``, ``entropy`` and ``bench``."""

from __future__ import annotations

import argparse
import logging
import sys

from .bench import run_bench
from .criteria import DegenerateDesignError, evaluate_all
from .design import DesignFormatError, SeededRng, design_to_csv, read_design, write_design
from .entropy import DegenerateKernelError, KernelSpec, ZeroDistanceError, entropy_mc, entropy_nn
from .generators import METHODS, GeneratorSpec, generate
from .optimizer import OptimizerConfig


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2**64)")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return v


def _method_list(text):
    methods = [m.strip() for m in text.split(",") if m.strip()]
    bad = [m for m in methods if m not in METHODS]
    if bad or not methods:
        raise argparse.ArgumentTypeError(
            f"invalid method(s) {', '.join(bad) or '(none)'}; choose from {', '.join(METHODS)}")
    return methods


def _add_optimizer_flags(p):
    p.add_argument("--restarts", type=_positive_int, default=5)
    p.add_argument("--max-proposals", type=_positive_int, default=None, help="default 1000*d")
    p.add_argument("--max-stale", type=_positive_int, default=None,
                   help="consecutive rejections before stopping, default 100*d")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kldesign", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build a design and write it as CSV")
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--n", type=_positive_int, default=None, help="default 10*d")
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--seed", type=_seed, default=0)
    _add_optimizer_flags(p)
    p.add_argument("--out", help="design CSV path (stdout if omitted)")
    p.add_argument("--trace", help="trace CSV path (optimized methods only)")

    p = sub.add_parser("eval", help="print the criteria report of a design file")
    p.add_argument("--in", dest="path", required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("entropy", help="print an entropy estimate of a design file")
    p.add_argument("--in", dest="path", required=True)
    p.add_argument("--estimator", choices=("mc-gauss", "mc-epan", "nn"), required=True)
    p.add_argument("--bandwidth", type=_positive_float, default=None)
    p.add_argument("--seed", type=_seed, default=0, help="seed for the Monte-Carlo kernel constant (d >= 4)")

    p = sub.add_parser("bench", help="compare generators over seeded replicates")
    p.add_argument("--methods", type=_method_list, required=True, help=f"comma list from {','.join(METHODS)}")
    p.add_argument("--n", type=_positive_int, default=None, help="default 10*d")
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--reps", type=_positive_int, default=20)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out-dir", required=True)
    _add_optimizer_flags(p)
    return parser


def _config(args, seed) -> OptimizerConfig:
    return OptimizerConfig(args.max_proposals, args.max_stale, args.restarts, SeededRng(seed))


def cmd_generate(args, parser):
    n = args.n if args.n is not None else 10 * args.d
    if n < 2:
        parser.error("--n must be >= 2")
    if args.trace and args.method not in ("mcgauss", "ppv", "maximin"):
        parser.error("--trace is only valid for mcgauss, ppv and maximin")
    spec = GeneratorSpec(args.method, args.d, n, args.seed, _config(args, args.seed))
    design, traces = generate(spec)
    if args.out:
        write_design(design, args.out)
    else:
        sys.stdout.write(design_to_csv(design))
    if args.trace:
        best = max(range(len(traces)), key=lambda r: (traces[r].final_objective, -r))
        traces[best].write_csv(args.trace)
    return 0


def cmd_eval(args, parser):
    report = evaluate_all(read_design(args.path))
    if args.format == "json":
        print(report.to_json())
    else:
        print(report.csv_header())
        print(report.to_csv_row())
    return 0


def cmd_entropy(args, parser):
    design = read_design(args.path)
    if args.estimator == "nn":
        if args.bandwidth is not None:
            parser.error("--bandwidth only applies to the mc estimators")
        value, _ = entropy_nn(design)
    elif args.estimator == "mc-gauss":
        value, _ = entropy_mc(design, KernelSpec.gaussian(max(design.n, 2), design.d, args.bandwidth))
    else:
        kernel = KernelSpec.epanechnikov(max(design.n, 2), design.d, args.bandwidth, rng=SeededRng(args.seed))
        value, _ = entropy_mc(design, kernel)
    print(f"{value:.6f}")
    return 0


def cmd_bench(args, parser):
    n = args.n if args.n is not None else 10 * args.d
    config = _config(args, args.seed)

    def progress(row):
        status = "error" if row.error else f"{row.wall_s:.2f}s"
        logging.getLogger("kldesign").info("%s rep %d: %s", row.method, row.rep, status)

    report = run_bench(args.methods, n, args.d, args.reps, args.seed, config, progress=progress)
    rows_path, summary_path = report.write(args.out_dir)
    print(f"wrote {rows_path} and {summary_path}")
    return 0


COMMANDS = {"generate": cmd_generate, "eval": cmd_eval, "entropy": cmd_entropy, "bench": cmd_bench}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args, parser)
    except (OSError, DesignFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ZeroDistanceError as exc:
        print(f"error: zero-distance: {exc}", file=sys.stderr)
        return 1
    except DegenerateKernelError as exc:
        print(f"error: degenerate-kernel: {exc}", file=sys.stderr)
        return 1
    except (DegenerateDesignError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
