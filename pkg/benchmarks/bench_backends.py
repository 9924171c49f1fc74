#!/usr/bin/env python3
"""Time the compiled and pure-Python exchange loops on the same proposals.

    python benchmarks/bench_backends.py [--repeat 3] [--csv out.csv]
"""

import argparse
import csv
import statistics
import sys
import time

import numpy as np

from kldesign import Objective, OptimizerConfig, SeededRng, _backend, exchange_run
from kldesign.generators import gen_random

CASES = [(30, 3), (100, 10)]
KINDS = ["entropy-mc-gauss", "entropy-nn", "mindist"]


def time_run(initial, kind, backend, repeat):
    cfg = OptimizerConfig(seed=SeededRng(1))
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        design, trace = exchange_run(initial, Objective(kind), cfg, backend=backend)
        times.append(time.perf_counter() - start)
    return statistics.median(times), design, trace


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--csv", help="write results here as well")
    args = parser.parse_args(argv)

    backends = sorted(_backend.BACKENDS)
    if len(backends) < 2:
        print("compiled extension not built; only the python backend is available", file=sys.stderr)
    rows = []
    for n, d in CASES:
        initial = gen_random(n, d, SeededRng(n))
        for kind in KINDS:
            results = {b: time_run(initial, kind, b, args.repeat) for b in backends}
            ref = results["python"]
            for b, (secs, design, trace) in results.items():
                rows.append({
                    "n": n, "d": d, "objective": kind, "backend": b,
                    "proposals": trace.proposals, "seconds": secs,
                    "us_per_proposal": 1e6 * secs / trace.proposals,
                    "speedup": ref[0] / secs,
                    "same_design": bool(np.array_equal(design.points, ref[1].points)),
                })

    header = f"{'n':>4} {'d':>3} {'objective':<17} {'backend':<7} {'props':>6} {'us/prop':>9} {'speedup':>8} same"
    print(header)
    for r in rows:
        print(f"{r['n']:>4} {r['d']:>3} {r['objective']:<17} {r['backend']:<7} {r['proposals']:>6} "
              f"{r['us_per_proposal']:>9.2f} {r['speedup']:>8.1f} {r['same_design']}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)


if __name__ == "__main__":
    main()
