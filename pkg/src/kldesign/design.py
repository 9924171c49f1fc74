"""Design data model, validation, seeded randomness and CSV I/O."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "Design",
    "DesignFormatError",
    "SeededRng",
    "ValidationReport",
    "read_design",
    "uniform_point",
    "validate",
    "write_design",
]


class DesignFormatError(ValueError):
    """Raised when a design file cannot be parsed."""


@dataclass(frozen=True, eq=False)
class Design:
    """``n`` points in the unit hypercube ``[0, 1]^d``, one point per row.

    The point matrix is copied on construction and made read-only, so a
    ``Design`` can be shared freely. Coordinates are *not* range-checked here;
    use :func:`validate` for diagnostics.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64, copy=True)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError(f"points must be a non-empty n x d matrix, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __eq__(self, other):
        if not isinstance(other, Design):
            return NotImplemented
        return self.points.shape == other.points.shape and bool(np.array_equal(self.points, other.points))

    def __repr__(self):
        return f"Design(n={self.n}, d={self.d})"

    def replace(self, i: int, y) -> "Design":
        """Return a new design with row ``i`` swapped for ``y``."""
        pts = self.points.copy()
        pts[i] = y
        return Design(pts)


@dataclass
class ValidationReport:
    out_of_range: list[tuple[int, int]] = field(default_factory=list)
    duplicates: list[tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        # duplicates are warnings only
        return not self.out_of_range

    def __bool__(self):
        return self.ok


def validate(design: Design) -> ValidationReport:
    """Report out-of-range coordinates (errors) and duplicate point pairs (warnings)."""
    pts = design.points
    bad = np.argwhere((pts < 0.0) | (pts > 1.0))
    report = ValidationReport(out_of_range=[(int(r), int(c)) for r, c in bad])
    # lexicographic sort brings identical rows next to each other
    order = np.lexsort(pts.T[::-1])
    srt = pts[order]
    same = np.all(srt[1:] == srt[:-1], axis=1)
    k = 0
    while k < len(same):
        if not same[k]:
            k += 1
            continue
        j = k
        while j < len(same) and same[j]:
            j += 1
        group = sorted(int(order[m]) for m in range(k, j + 1))
        report.duplicates.extend((a, b) for ai, a in enumerate(group) for b in group[ai + 1:])
        k = j
    report.duplicates.sort()
    return report


@dataclass(frozen=True)
class SeededRng:
    """Explicitly seeded random stream.

    The generator is numpy's ``PCG64`` fed by ``SeedSequence(seed,
    spawn_key=stream)``; both algorithms are specified bit-for-bit by numpy, so
    a given ``(seed, stream)`` yields the same draws on every platform.
    ``stream`` is a tuple path so that streams can be split hierarchically
    (method, restart, ...).
    """

    seed: int
    stream: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        stream = (self.stream,) if isinstance(self.stream, (int, np.integer)) else tuple(self.stream)
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "stream", tuple(int(s) for s in stream))

    def substream(self, i: int) -> "SeededRng":
        return SeededRng(self.seed, self.stream + (int(i),))

    def generator(self) -> np.random.Generator:
        """A fresh generator positioned at the start of this stream."""
        ss = np.random.SeedSequence(self.seed, spawn_key=self.stream)
        return np.random.Generator(np.random.PCG64(ss))


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, SeededRng):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected SeededRng or numpy Generator, got {type(rng).__name__}")


def uniform_point(rng, d: int) -> np.ndarray:
    """Draw one point uniformly in ``[0, 1]^d``.

    Passing a :class:`SeededRng` starts from the beginning of its stream;
    pass a ``numpy.random.Generator`` to advance shared state.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    return _as_generator(rng).random(d)


def _format(x: float) -> str:
    return format(float(x), ".17g")


def design_to_csv(design: Design) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"x{k + 1}" for k in range(design.d)])
    for row in design.points:
        writer.writerow([_format(v) for v in row])
    return buf.getvalue()


def write_design(design: Design, path) -> None:
    Path(path).write_text(design_to_csv(design), encoding="utf-8")


def parse_design(text: str) -> Design:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise DesignFormatError("no data rows")
    header, data = rows[0], rows[1:]
    d = len(header)
    if not data:
        raise DesignFormatError("no data rows")
    values = np.empty((len(data), d))
    for r, row in enumerate(data, start=1):
        if len(row) != d:
            raise DesignFormatError(f"row {r}: expected {d} columns, got {len(row)}")
        for c, tok in enumerate(row, start=1):
            try:
                v = float(tok)
            except ValueError:
                raise DesignFormatError(f"row {r}, column {c}: non-numeric value {tok!r}") from None
            if not 0.0 <= v <= 1.0:
                raise DesignFormatError(f"row {r}, column {c}: value {tok} outside [0, 1]")
            values[r - 1, c - 1] = v
    return Design(values)


def read_design(path) -> Design:
    return parse_design(Path(path).read_text(encoding="utf-8"))
