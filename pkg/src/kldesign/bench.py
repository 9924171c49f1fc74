"""Seeded comparison of design generators on the criteria battery."""

from __future__ import annotations

import csv
import logging
import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .criteria import CriteriaReport, evaluate_all
from .design import SeededRng
from .generators import METHODS, OPTIMIZED, gen_halton, gen_hammersley, gen_lhs, gen_optimized, gen_random
from .optimizer import OptimizerConfig

log = logging.getLogger(__name__)

ROW_FIELDS = ("method", "rep", "seed", "cov", "mindist", "dl2", "dc2", "mst_mean", "mst_std",
              "objective", "wall_s")
METRICS = CriteriaReport.FIELDS + ("objective", "wall_s")


@dataclass
class BenchRow:
    method: str
    rep: int
    seed: int
    report: CriteriaReport | None
    objective: float = math.nan
    wall_s: float = 0.0
    error: str | None = None

    def values(self) -> dict:
        out = {"method": self.method, "rep": self.rep, "seed": self.seed}
        for k in CriteriaReport.FIELDS:
            out[k] = getattr(self.report, k) if self.report is not None else math.nan
        out["objective"] = self.objective
        out["wall_s"] = self.wall_s
        return out


@dataclass
class BenchReport:
    n: int
    d: int
    seed: int
    rows: list[BenchRow] = field(default_factory=list)

    def methods(self) -> list[str]:
        return list(dict.fromkeys(r.method for r in self.rows))

    def summary(self) -> dict[str, dict[str, float]]:
        """Per-method mean and population std of every metric, skipping failed rows."""
        out = {}
        for m in self.methods():
            ok = [r.values() for r in self.rows if r.method == m and r.error is None]
            stats = {"count": len(ok)}
            for k in METRICS:
                col = np.array([v[k] for v in ok], dtype=float)
                stats[f"{k}_mean"] = float(col.mean()) if len(col) else math.nan
                stats[f"{k}_std"] = float(col.std()) if len(col) else math.nan
            out[m] = stats
        return out

    def mean(self, method: str, metric: str) -> float:
        return self.summary()[method][f"{metric}_mean"]

    def write(self, out_dir) -> tuple[Path, Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        rows_path = out_dir / "rows.csv"
        with rows_path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(ROW_FIELDS)
            for r in self.rows:
                v = r.values()
                cells = [v["method"], v["rep"], v["seed"]]
                if r.error is not None:
                    cells += ["error"] * (len(ROW_FIELDS) - 3)
                else:
                    cells += [format(float(v[k]), ".17g") for k in ROW_FIELDS[3:]]
                w.writerow(cells)
        summary_path = out_dir / "summary.csv"
        summary = self.summary()
        header = ["method", "count"] + [f"{k}_{s}" for k in METRICS for s in ("mean", "std")]
        with summary_path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for m, stats in summary.items():
                w.writerow([m, stats["count"]] + [format(stats[h], ".17g") for h in header[2:]])
        errors = [r for r in self.rows if r.error is not None]
        if errors:
            with (out_dir / "errors.txt").open("w", encoding="utf-8") as fh:
                for r in errors:
                    fh.write(f"{r.method},{r.rep},{r.seed}: {r.error}\n")
        return rows_path, summary_path


def row_rng(method: str, seed: int) -> SeededRng:
    # the stream depends on the method, not on its position in the request
    return SeededRng(seed, (METHODS.index(method),))


def run_row(method: str, rep: int, n: int, d: int, seed: int,
            config: OptimizerConfig | None = None, backend: str | None = None) -> BenchRow:
    """Generate and score one replicate. ``seed`` is the base seed; the row uses ``seed + rep``."""
    row_seed = seed + rep
    rng = row_rng(method, row_seed)
    start = time.perf_counter()
    objective = math.nan
    try:
        if method == "random":
            design = gen_random(n, d, rng)
        elif method == "lhs":
            design = gen_lhs(n, d, rng)
        elif method == "halton":
            design = gen_halton(n, d)
        elif method == "hammersley":
            design = gen_hammersley(n, d)
        elif method in OPTIMIZED:
            cfg = replace(config or OptimizerConfig(), seed=rng)
            design, traces = gen_optimized(method, n, d, cfg, backend=backend)
            objective = max(t.final_objective for t in traces)
        else:
            raise ValueError(f"unknown method {method!r}")
        report = evaluate_all(design)
    except Exception as exc:  # recorded, the run goes on
        log.warning("row %s/%d failed: %s", method, rep, exc)
        return BenchRow(method, rep, row_seed, None, wall_s=time.perf_counter() - start,
                        error=f"{type(exc).__name__}: {exc}")
    return BenchRow(method, rep, row_seed, report, objective, time.perf_counter() - start)


def run_bench(methods, n: int, d: int, reps: int, seed: int,
              config: OptimizerConfig | None = None, backend: str | None = None,
              progress=None) -> BenchReport:
    """Run every ``method`` ``reps`` times; rows come out in (method, rep) order."""
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; expected one of {METHODS}")
    report = BenchReport(n, d, seed)
    for m in methods:
        for rep in range(reps):
            row = run_row(m, rep, n, d, seed, config, backend)
            report.rows.append(row)
            if progress is not None:
                progress(row)
    return report
