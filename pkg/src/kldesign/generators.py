"""Baseline and optimized design generators."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .design import Design, SeededRng, _as_generator
from .optimizer import Objective, OptimizerConfig, multi_start

__all__ = [
    "METHODS",
    "OPTIMIZED",
    "PRIMES",
    "GeneratorSpec",
    "gen_halton",
    "gen_hammersley",
    "gen_lhs",
    "gen_optimized",
    "gen_random",
    "generate",
    "radical_inverse",
]

METHODS = ("random", "lhs", "halton", "hammersley", "mcgauss", "ppv", "maximin")
OPTIMIZED = {"mcgauss": "entropy-mc-gauss", "ppv": "entropy-nn", "maximin": "mindist"}
PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)


def gen_random(n: int, d: int, rng) -> Design:
    return Design(_as_generator(rng).random((n, d)))


def gen_lhs(n: int, d: int, rng) -> Design:
    """Latin hypercube with a uniform position inside each stratum."""
    gen = _as_generator(rng)
    perms = np.column_stack([gen.permutation(n) for _ in range(d)])
    u = gen.random((n, d))
    # stratum j is [j/n, (j+1)/n)
    return Design((perms + u) / n)


def radical_inverse(i, base: int):
    """Van der Corput radical inverse of the integer(s) ``i`` in ``base``."""
    i = np.asarray(i, dtype=np.int64).copy()
    out = np.zeros(i.shape)
    f = 1.0 / base
    while np.any(i > 0):
        out += f * (i % base)
        i //= base
        f /= base
    return out


def gen_halton(n: int, d: int, start: int = 1) -> Design:
    """Halton points ``start, ..., start + n - 1`` in the first ``d`` prime bases."""
    if d > len(PRIMES):
        raise ValueError(f"halton supports d <= {len(PRIMES)}")
    idx = np.arange(start, start + n)
    return Design(np.column_stack([radical_inverse(idx, p) for p in PRIMES[:d]]))


def gen_hammersley(n: int, d: int) -> Design:
    """Hammersley set: ``i / n`` in the first coordinate, Halton ``i`` in the rest, ``i = 0..n-1``."""
    if d - 1 > len(PRIMES):
        raise ValueError(f"hammersley supports d <= {len(PRIMES) + 1}")
    idx = np.arange(n)
    cols = [idx / n] + [radical_inverse(idx, p) for p in PRIMES[: d - 1]]
    return Design(np.column_stack(cols))


def gen_optimized(method: str, n: int, d: int, config: OptimizerConfig | None = None,
                  backend: str | None = None):
    """Best design of a multi-start exchange run; returns ``(design, traces)``."""
    try:
        kind = OPTIMIZED[method]
    except KeyError:
        raise ValueError(f"{method!r} is not an optimized method; expected one of {tuple(OPTIMIZED)}") from None
    return multi_start(Objective(kind), n, d, config, backend=backend)


@dataclass(frozen=True)
class GeneratorSpec:
    method: str
    d: int
    n: int | None = None
    seed: int = 0
    config: OptimizerConfig = field(default_factory=OptimizerConfig)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.n is None:
            object.__setattr__(self, "n", 10 * self.d)
        if self.n < 2:
            raise ValueError("n must be >= 2")


def generate(spec: GeneratorSpec, backend: str | None = None):
    """Build the design described by ``spec``; returns ``(design, traces)``.

    ``traces`` is empty for the non-optimized methods.
    """
    rng = SeededRng(spec.seed)
    if spec.method == "random":
        return gen_random(spec.n, spec.d, rng), []
    if spec.method == "lhs":
        return gen_lhs(spec.n, spec.d, rng), []
    if spec.method == "halton":
        return gen_halton(spec.n, spec.d), []
    if spec.method == "hammersley":
        return gen_hammersley(spec.n, spec.d), []
    config = replace(spec.config, seed=rng)
    return gen_optimized(spec.method, spec.n, spec.d, config, backend=backend)
