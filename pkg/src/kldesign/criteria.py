"""Space-filling quality criteria for a single design."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .design import Design
from .entropy import pairwise_distances
from .optimizer import mindist_objective

__all__ = [
    "CriteriaReport",
    "DegenerateDesignError",
    "coverage",
    "discrepancy_centered_l2",
    "discrepancy_l2",
    "evaluate_all",
    "mindist",
    "minimum_spanning_tree",
    "mst_stats",
]


class DegenerateDesignError(ValueError):
    pass


def _nn_distances(points: np.ndarray) -> np.ndarray:
    dist = pairwise_distances(points)
    np.fill_diagonal(dist, np.inf)
    return dist.min(axis=1)


def coverage(design: Design) -> float:
    """Coefficient of variation of the nearest-neighbour distances.

    Zero when every point has the same nearest-neighbour distance, as on a
    regular grid.
    """
    if design.n < 2:
        raise ValueError("coverage needs n >= 2")
    gamma = _nn_distances(design.points)
    mean = gamma.mean()
    if mean == 0.0:
        raise DegenerateDesignError("all points coincide")
    return float(np.sqrt(np.mean((gamma - mean) ** 2)) / mean)


mindist = mindist_objective


def discrepancy_l2(design: Design) -> float:
    """L2-star discrepancy (Warnock's closed form)."""
    x = design.points
    n, d = x.shape
    t1 = 3.0**-d
    t2 = 2.0 ** (1 - d) / n * np.prod(1.0 - x**2, axis=1).sum()
    t3 = np.prod(1.0 - np.maximum(x[:, None, :], x[None, :, :]), axis=2).sum() / n**2
    return math.sqrt(max(t1 - t2 + t3, 0.0))


def discrepancy_centered_l2(design: Design) -> float:
    """Centered L2 discrepancy (Hickernell's closed form)."""
    x = design.points
    n, d = x.shape
    a = np.abs(x - 0.5)
    t1 = (13.0 / 12.0) ** d
    t2 = 2.0 / n * np.prod(1.0 + 0.5 * a - 0.5 * a**2, axis=1).sum()
    pair = 1.0 + 0.5 * a[:, None, :] + 0.5 * a[None, :, :] - 0.5 * np.abs(x[:, None, :] - x[None, :, :])
    t3 = np.prod(pair, axis=2).sum() / n**2
    return math.sqrt(max(t1 - t2 + t3, 0.0))


def minimum_spanning_tree(points: np.ndarray) -> list[tuple[int, int, float]]:
    """Euclidean MST by dense Prim, O(n^2).

    Returns ``(i, j, length)`` edges in insertion order; ties are broken by the
    smaller ``(i, j)`` index pair.
    """
    n = len(points)
    dist = pairwise_distances(np.asarray(points, dtype=np.float64))
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = dist[0].copy()
    parent = np.zeros(n, dtype=np.int64)
    edges = []
    for _ in range(n - 1):
        cand = np.where(in_tree, np.inf, best)
        lo = cand.min()
        ties = np.flatnonzero(cand == lo)
        pairs = sorted((min(parent[v], v), max(parent[v], v), v) for v in ties)
        i, j, v = pairs[0]
        edges.append((int(i), int(j), float(lo)))
        in_tree[v] = True
        closer = (dist[v] < best) | ((dist[v] == best) & (v < parent))
        closer &= ~in_tree
        best = np.where(closer, dist[v], best)
        parent = np.where(closer, v, parent)
    return edges


def mst_stats(design: Design) -> tuple[float, float]:
    """Mean and population standard deviation of the MST edge lengths."""
    if design.n < 2:
        raise ValueError("mst_stats needs n >= 2")
    lengths = np.array([w for _, _, w in minimum_spanning_tree(design.points)])
    return float(lengths.mean()), float(lengths.std())


@dataclass(frozen=True)
class CriteriaReport:
    cov: float
    mindist: float
    dl2: float
    dc2: float
    mst_mean: float
    mst_std: float

    FIELDS = ("cov", "mindist", "dl2", "dc2", "mst_mean", "mst_std")

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps({k: float(v) for k, v in self.to_dict().items()})

    @classmethod
    def from_json(cls, text: str) -> "CriteriaReport":
        data = json.loads(text)
        return cls(**{f.name: float(data[f.name]) for f in fields(cls)})

    def csv_header(self) -> str:
        return ",".join(self.FIELDS)

    def to_csv_row(self) -> str:
        return ",".join(format(getattr(self, k), ".17g") for k in self.FIELDS)

    @classmethod
    def from_csv_row(cls, row: str) -> "CriteriaReport":
        return cls(*(float(v) for v in row.strip().split(",")))


def evaluate_all(design: Design) -> CriteriaReport:
    mean, std = mst_stats(design)
    return CriteriaReport(
        cov=coverage(design),
        mindist=mindist(design),
        dl2=discrepancy_l2(design),
        dc2=discrepancy_centered_l2(design),
        mst_mean=mean,
        mst_std=std,
    )
