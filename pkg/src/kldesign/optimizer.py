"""Exchange algorithm: swap a random point for a uniform draw, keep strict improvements."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _backend
from .design import Design, SeededRng, _as_generator, validate
from .entropy import (
    KernelSpec,
    MindistState,
    NnState,
    kde_state,
    unit_ball_volume,
    EULER_GAMMA,
)

__all__ = [
    "OBJECTIVES",
    "Objective",
    "OptimizerConfig",
    "Trace",
    "exchange_run",
    "mindist_objective",
    "multi_start",
]

OBJECTIVES = ("entropy-mc-gauss", "entropy-nn", "mindist")


def mindist_objective(design: Design) -> float:
    """Smallest pairwise Euclidean distance (0 when points coincide)."""
    if design.n < 2:
        raise ValueError("mindist needs n >= 2")
    return float(MindistState(design.points).rho.min())


@dataclass(frozen=True)
class Objective:
    """What the exchange algorithm maximizes.

    ``bandwidth`` overrides the fixed kernel bandwidth for ``entropy-mc-gauss``.
    """

    kind: str = "entropy-mc-gauss"
    bandwidth: float | None = None

    def __post_init__(self):
        if self.kind not in OBJECTIVES:
            raise ValueError(f"unknown objective {self.kind!r}; expected one of {OBJECTIVES}")
        if self.bandwidth is not None and not self.bandwidth > 0:
            raise ValueError("bandwidth must be > 0")

    def kernel(self, n: int, d: int) -> KernelSpec:
        return KernelSpec.gaussian(n, d, self.bandwidth)

    def state(self, design: Design):
        if self.kind == "entropy-mc-gauss":
            return kde_state(design, self.kernel(design.n, design.d))
        if self.kind == "entropy-nn":
            return NnState(design.points)
        return MindistState(design.points)

    def evaluate(self, design: Design) -> float:
        """Objective value; ``-inf`` for designs the estimator cannot score."""
        return self.state(design).entropy


@dataclass(frozen=True)
class OptimizerConfig:
    """Stopping rules and seeding. ``None`` limits default to ``1000 d`` and ``100 d``."""

    max_proposals: int | None = None
    max_consecutive_rejects: int | None = None
    restarts: int = 5
    seed: SeededRng = field(default_factory=lambda: SeededRng(0))

    def __post_init__(self):
        if self.max_proposals is not None and self.max_proposals < 1:
            raise ValueError("max_proposals must be >= 1")
        if self.max_consecutive_rejects is not None and self.max_consecutive_rejects < 1:
            raise ValueError("max_consecutive_rejects must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not isinstance(self.seed, SeededRng):
            object.__setattr__(self, "seed", SeededRng(self.seed))

    def limits(self, d: int) -> tuple[int, int]:
        max_prop = 1000 * d if self.max_proposals is None else self.max_proposals
        max_stale = 100 * d if self.max_consecutive_rejects is None else self.max_consecutive_rejects
        return max_prop, max_stale


@dataclass
class Trace:
    """Per-proposal history of one exchange run.

    ``objective[t]`` is the objective after proposal ``t`` was accepted or
    rejected.
    """

    accepted: np.ndarray
    objective: np.ndarray
    initial_objective: float

    @property
    def proposals(self) -> int:
        return len(self.accepted)

    @property
    def n_accepted(self) -> int:
        return int(np.count_nonzero(self.accepted))

    @property
    def final_objective(self) -> float:
        return float(self.objective[-1]) if len(self.objective) else self.initial_objective

    def rows(self):
        for t, (a, v) in enumerate(zip(self.accepted, self.objective), start=1):
            yield t, int(a), float(v)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["proposal", "accepted", "objective"])
        for t, a, v in self.rows():
            w.writerow([t, a, format(v, ".17g")])
        return buf.getvalue()

    def write_csv(self, path) -> None:
        Path(path).write_text(self.to_csv(), encoding="utf-8")

    def __eq__(self, other):
        if not isinstance(other, Trace):
            return NotImplemented
        return (
            np.array_equal(self.accepted, other.accepted)
            and np.array_equal(self.objective, other.objective)
            and self.initial_objective == other.initial_objective
        )


def exchange_run(initial: Design, objective: Objective, config: OptimizerConfig | None = None,
                 rng=None, backend: str | None = None) -> tuple[Design, Trace]:
    """Run the exchange algorithm from ``initial``.

    Each proposal picks a row uniformly and a candidate point uniformly in the
    cube; it is accepted only if the objective strictly increases. The run stops
    after ``max_proposals`` proposals or ``max_consecutive_rejects`` rejections
    in a row. Proposals that the objective cannot score (duplicate points for
    the nearest-neighbour entropy) count as rejections.

    ``rng`` defaults to a fresh generator on ``config.seed``; all proposals are
    drawn up front so both backends see the same stream.
    """
    config = config or OptimizerConfig()
    report = validate(initial)
    if not report.ok:
        raise ValueError(f"initial design has out-of-range coordinates at {report.out_of_range[:5]}")
    n, d = initial.n, initial.d
    if n < 2:
        raise ValueError("exchange needs n >= 2")
    max_prop, max_stale = config.limits(d)
    gen = _as_generator(config.seed if rng is None else rng)
    idx = gen.integers(0, n, size=max_prop, dtype=np.int64)
    cand = gen.random((max_prop, d))

    core = _backend.get(backend)
    pts = np.ascontiguousarray(initial.points, dtype=np.float64).copy()
    if objective.kind == "entropy-mc-gauss":
        kernel = objective.kernel(n, d)
        count, accepted, values, init = core.exchange_kde(pts, idx, cand, kernel.h, kernel.s2, max_stale)
    else:
        offset = math.log(unit_ball_volume(d)) + EULER_GAMMA + math.log(n - 1)
        mode = 0 if objective.kind == "entropy-nn" else 1
        count, accepted, values, init = core.exchange_nn(pts, idx, cand, offset, mode, max_stale)
    return Design(pts), Trace(np.asarray(accepted, dtype=bool), np.asarray(values), float(init))


def _initial_design(objective: Objective, n: int, d: int, gen: np.random.Generator) -> Design:
    while True:
        design = Design(gen.random((n, d)))
        # the nearest-neighbour entropy is undefined with duplicates; redraw
        if objective.kind != "entropy-nn" or not validate(design).duplicates:
            return design


def multi_start(objective: Objective, n: int, d: int, config: OptimizerConfig | None = None,
                backend: str | None = None) -> tuple[Design, list[Trace]]:
    """Best of ``config.restarts`` exchange runs from random initial designs.

    Restart ``r`` uses the stream ``config.seed.substream(r)`` for both its
    initial design and its proposals. Ties go to the lowest restart index.
    """
    config = config or OptimizerConfig()
    best, best_value, traces = None, -math.inf, []
    for r in range(config.restarts):
        gen = config.seed.substream(r).generator()
        initial = _initial_design(objective, n, d, gen)
        design, trace = exchange_run(initial, objective, config, rng=gen, backend=backend)
        traces.append(trace)
        if best is None or trace.final_objective > best_value:
            best, best_value = design, trace.final_objective
    return best, traces
