"""Entropy estimators used as design objectives.

Two estimators are provided:

* a resubstitution Monte-Carlo estimator built on a kernel density estimate
  (``entropy_mc``), with Gaussian or Epanechnikov kernels;
* the Kozachenko-Leonenko nearest-neighbour estimator (``entropy_nn``).

Both come with a small mutable state object that can score a single-point
exchange in O(n d) and then commit it, which is what makes the exchange
optimizer affordable. All logarithms are natural (entropy in nats).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .design import Design, _as_generator

__all__ = [
    "EULER_GAMMA",
    "DegenerateKernelError",
    "KdeState",
    "KernelSpec",
    "MindistState",
    "NnState",
    "ZeroDistanceError",
    "bandwidth",
    "entropy_mc",
    "entropy_mc_uniform",
    "entropy_nn",
    "epanechnikov_alpha",
    "kde_state",
    "kernel_eval",
    "kernel_support_probability",
    "nn_state",
    "pairwise_distances",
    "unit_ball_volume",
    "update_after_exchange",
]

EULER_GAMMA = 0.57721566490153286

GAUSSIAN = "gaussian"
EPAN_SPHERICAL = "epanechnikov-spherical"
EPAN_PRODUCT = "epanechnikov-product"
FAMILIES = (GAUSSIAN, EPAN_SPHERICAL, EPAN_PRODUCT)


class DegenerateKernelError(ArithmeticError):
    """A kernel density estimate vanished at a design point (log of zero)."""


class ZeroDistanceError(ArithmeticError):
    """Two design points coincide, so a nearest-neighbour distance is zero."""


def bandwidth(n: int, d: int) -> float:
    """Fixed bandwidth ``n**(-1/(d+4)) / sqrt(12)``.

    Scott's rule with the standard deviation of U(0, 1) in place of the sample
    one, so it only depends on ``(n, d)`` and stays constant while the design
    is being optimized.
    """
    if n < 2:
        raise ValueError("bandwidth needs n >= 2")
    if d < 1:
        raise ValueError("bandwidth needs d >= 1")
    return n ** (-1.0 / (d + 4)) / math.sqrt(12.0)


def unit_ball_volume(d: int) -> float:
    """Volume of the Euclidean unit ball in dimension ``d`` (exact factorial forms)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    p, odd = divmod(d, 2)
    if not odd:
        return math.pi**p / math.factorial(p)
    return math.pi**p * 2 ** (2 * p) * math.factorial(p) / (math.factorial(2 * p) * (p + 0.5))


def epanechnikov_alpha(d: int, rng=None, n_samples: int = 100_000, repeats: int = 10) -> float:
    """Normalisation constant of the spherical Epanechnikov kernel.

    Exact for ``d <= 3``. Above that, the integral of ``1 - |x|^2`` over the
    unit ball is estimated by drawing uniformly in ``[0, 1]^d``, keeping the
    points inside the ball and multiplying their mean by the ball volume.
    ``repeats`` independent estimates are averaged; ``n_samples`` is the total
    number of *accepted* points spread over the repeats.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if d == 1:
        return 0.75
    if d == 2:
        return 2.0 / math.pi
    if d == 3:
        return 15.0 / (8.0 * math.pi)
    gen = _as_generator(rng) if rng is not None else np.random.default_rng(0)
    volume = unit_ball_volume(d)
    per_repeat = max(1, -(-n_samples // repeats))
    # fraction of the cube inside the ball, used to size the batches
    hit_rate = volume / 2.0**d
    estimates = []
    for _ in range(repeats):
        total, count = 0.0, 0
        while count < per_repeat:
            want = per_repeat - count
            batch = min(int(want / hit_rate * 1.1) + 64, 2_000_000)
            x = gen.random((batch, d))
            sq = np.einsum("ij,ij->i", x, x)
            g = 1.0 - sq[sq <= 1.0]
            total += float(g.sum())
            count += g.size
        estimates.append(total * volume / count)
    return 1.0 / float(np.mean(estimates))


def kernel_support_probability(d: int, n: int | None = None) -> float:
    """``h**2 / d`` with the fixed bandwidth, i.e. ``n**(-2/(d+4)) / (12 d)``.

    Rough probability that a bounded kernel is non-zero between two uniform
    points, taking ``|z|^2`` as uniform on ``[0, d/h^2]``. That uniformity is a
    heuristic, so treat the value as an order of magnitude. ``n`` defaults to
    ``10 d``.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if n is None:
        n = 10 * d
    return bandwidth(n, d) ** 2 / d


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family with its bandwidth ``h`` and internal constants.

    ``s2`` is only meaningful for the Gaussian family, ``alpha`` only for the
    Epanechnikov ones (per-axis factor for the product kernel).
    """

    family: str
    d: int
    h: float
    s2: float = float("nan")
    alpha: float = float("nan")

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}; expected one of {FAMILIES}")
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if not self.h > 0:
            raise ValueError("bandwidth h must be > 0")
        if self.family == GAUSSIAN and not self.s2 > 0:
            raise ValueError("gaussian kernel needs s2 > 0")
        if self.family != GAUSSIAN and not self.alpha > 0:
            raise ValueError("epanechnikov kernel needs alpha > 0")

    @classmethod
    def gaussian(cls, n: int, d: int, h: float | None = None) -> "KernelSpec":
        return cls(GAUSSIAN, d, bandwidth(n, d) if h is None else h, s2=d / 12.0)

    @classmethod
    def epanechnikov(cls, n: int, d: int, h: float | None = None, *, product: bool = False,
                     rng=None) -> "KernelSpec":
        h = bandwidth(n, d) if h is None else h
        if product:
            return cls(EPAN_PRODUCT, d, h, alpha=0.75)
        return cls(EPAN_SPHERICAL, d, h, alpha=epanechnikov_alpha(d, rng))

    @property
    def peak(self) -> float:
        """Kernel value at the origin."""
        if self.family == GAUSSIAN:
            return (2.0 * math.pi * self.s2) ** (-self.d / 2.0)
        if self.family == EPAN_PRODUCT:
            return self.alpha**self.d
        return self.alpha


def _kernel_sq(kernel: KernelSpec, z: np.ndarray) -> np.ndarray:
    # z has shape (..., d)
    if kernel.family == GAUSSIAN:
        sq = np.einsum("...k,...k->...", z, z)
        return kernel.peak * np.exp(-0.5 * sq / kernel.s2)
    if kernel.family == EPAN_SPHERICAL:
        sq = np.einsum("...k,...k->...", z, z)
        return np.where(sq <= 1.0, kernel.alpha * (1.0 - sq), 0.0)
    factors = np.where(np.abs(z) <= 1.0, kernel.alpha * (1.0 - z * z), 0.0)
    return np.prod(factors, axis=-1)


def kernel_eval(kernel: KernelSpec, z) -> np.ndarray | float:
    """Evaluate the kernel at ``z`` (a d-vector, or an array of them along the last axis)."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape[-1] != kernel.d:
        raise ValueError(f"z must have last dimension {kernel.d}")
    out = _kernel_sq(kernel, z)
    return float(out) if out.ndim == 0 else out


def pairwise_distances(points: np.ndarray) -> np.ndarray:
    """Dense Euclidean distance matrix (explicit differences, no Gram trick)."""
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def _kernel_column(kernel: KernelSpec, points: np.ndarray, y: np.ndarray) -> np.ndarray:
    return _kernel_sq(kernel, (points - y) / kernel.h)


class KdeState:
    """Kernel matrix, resubstitution densities and entropy for one design.

    ``kmat[i, j]`` holds ``K((X_i - X_j) / h)`` with the self term on the
    diagonal; ``density[i] = kmat[i].sum() / (n h^d)``.
    """

    def __init__(self, points: np.ndarray, kernel: KernelSpec):
        self.points = np.array(points, dtype=np.float64, copy=True)
        n, d = self.points.shape
        if d != kernel.d:
            raise ValueError(f"kernel built for d={kernel.d}, design has d={d}")
        self.kernel = kernel
        self.scale = 1.0 / (n * kernel.h**d)
        z = (self.points[:, None, :] - self.points[None, :, :]) / kernel.h
        self.kmat = _kernel_sq(kernel, z)
        self.density = self.kmat.sum(axis=1) * self.scale
        self.entropy = self._entropy(self.density)

    @staticmethod
    def _entropy(density: np.ndarray) -> float:
        if np.any(density <= 0.0):
            return -math.inf
        return -float(np.mean(np.log(density)))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def copy(self) -> "KdeState":
        new = object.__new__(KdeState)
        new.points = self.points.copy()
        new.kernel = self.kernel
        new.scale = self.scale
        new.kmat = self.kmat.copy()
        new.density = self.density.copy()
        new.entropy = self.entropy
        return new

    def propose(self, i: int, y: np.ndarray):
        """Score replacing point ``i`` by ``y`` without changing the state.

        Returns ``(entropy, pending)``; pass ``pending`` to :meth:`commit`.
        Degenerate densities score ``-inf``.
        """
        col = _kernel_column(self.kernel, self.points, y)
        col[i] = self.kernel.peak
        density = self.density + (col - self.kmat[:, i]) * self.scale
        density[i] = col.sum() * self.scale
        return self._entropy(density), (i, np.array(y, dtype=np.float64), col, density)

    def commit(self, pending) -> None:
        i, y, col, density = pending
        self.points[i] = y
        self.kmat[i, :] = col
        self.kmat[:, i] = col
        self.density = density
        self.entropy = self._entropy(density)


def kde_state(design: Design, kernel: KernelSpec | None = None) -> KdeState:
    if kernel is None:
        kernel = KernelSpec.gaussian(design.n, design.d)
    return KdeState(design.points, kernel)


def entropy_mc(design: Design, kernel: KernelSpec | None = None) -> tuple[float, KdeState]:
    """Resubstitution entropy ``-mean(log f_hat(X_i))`` of a design.

    The density estimate includes each point's own kernel term. Defaults to
    the Gaussian kernel with the fixed bandwidth.
    """
    state = kde_state(design, kernel)
    if not np.all(state.density > 0.0):
        raise DegenerateKernelError(
            f"{state.kernel.family} density estimate is zero at "
            f"{int(np.sum(state.density <= 0.0))} design point(s)"
        )
    return state.entropy, state


def entropy_mc_uniform(design: Design, kernel: KernelSpec | None, N: int, rng, *,
                       density=None, chunk: int = 8192) -> float:
    """Entropy estimate ``-mean(f_hat(Z) log f_hat(Z))`` over ``N`` uniform points ``Z``.

    Only the density estimate depends on the design. ``density`` may be any
    callable mapping an ``(m, d)`` array to ``m`` values; it replaces the
    kernel estimate (useful for checks).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    gen = _as_generator(rng)
    d = design.d
    if density is None:
        if kernel is None:
            kernel = KernelSpec.gaussian(design.n, d)
        pts = design.points
        scale = 1.0 / (design.n * kernel.h**d)

        def density(z):
            return _kernel_sq(kernel, (z[:, None, :] - pts[None, :, :]) / kernel.h).sum(axis=1) * scale

    total = 0.0
    done = 0
    while done < N:
        m = min(chunk, N - done)
        f = np.asarray(density(gen.random((m, d))), dtype=np.float64)
        pos = f > 0.0
        total += float(np.sum(f[pos] * np.log(f[pos])))
        done += m
    return -total / N


class NnState:
    """Pairwise distances and nearest-neighbour distances for one design.

    The diagonal of ``dmat`` is stored as ``+inf`` so that row minima give the
    nearest-neighbour distances ``rho`` directly.
    """

    def __init__(self, points: np.ndarray):
        self.points = np.array(points, dtype=np.float64, copy=True)
        n, d = self.points.shape
        if n < 2:
            raise ValueError("nearest-neighbour state needs n >= 2")
        self.dmat = pairwise_distances(self.points)
        np.fill_diagonal(self.dmat, np.inf)
        self.rho = self.dmat.min(axis=1)
        self.offset = math.log(unit_ball_volume(d)) + EULER_GAMMA + math.log(n - 1)
        self.entropy = self.score(self.rho)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def score(self, rho: np.ndarray) -> float:
        if np.any(rho <= 0.0):
            return -math.inf
        d = self.points.shape[1]
        return d * float(np.mean(np.log(rho))) + self.offset

    def copy(self):
        new = object.__new__(type(self))
        new.__dict__.update(self.__dict__)
        new.points = self.points.copy()
        new.dmat = self.dmat.copy()
        new.rho = self.rho.copy()
        return new

    def propose(self, i: int, y: np.ndarray):
        y = np.array(y, dtype=np.float64)
        diff = self.points - y
        col = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        col[i] = np.inf
        rho = np.minimum(self.rho, col)
        # rows whose nearest neighbour may have been i need a full rescan
        stale = np.flatnonzero(self.dmat[:, i] == self.rho)
        stale = stale[stale != i]
        if stale.size:
            rows = self.dmat[stale].copy()
            rows[:, i] = col[stale]
            rho[stale] = rows.min(axis=1)
        rho[i] = col.min()
        return self.score(rho), (i, y, col, rho)

    def commit(self, pending) -> None:
        i, y, col, rho = pending
        self.points[i] = y
        self.dmat[i, :] = col
        self.dmat[:, i] = col
        self.rho = rho
        self.entropy = self.score(rho)


class MindistState(NnState):
    """Same bookkeeping as :class:`NnState`, scored by the smallest pairwise distance."""

    def score(self, rho: np.ndarray) -> float:
        return float(rho.min())


def nn_state(design: Design) -> NnState:
    return NnState(design.points)


def entropy_nn(design: Design) -> tuple[float, NnState]:
    """Kozachenko-Leonenko entropy estimate (first nearest neighbour).

    ``(d/n) sum(log rho_i) + log V_d + Euler's gamma + log(n - 1)``.
    """
    if design.n < 2:
        raise ValueError("entropy_nn needs n >= 2")
    state = nn_state(design)
    if np.any(state.rho <= 0.0):
        raise ZeroDistanceError("design contains duplicate points")
    return state.entropy, state


def update_after_exchange(state, design: Design, i: int, y):
    """Return a new state (and its entropy) for ``design`` with point ``i`` replaced by ``y``.

    ``state`` must describe ``design``; it is left untouched.
    """
    if not np.array_equal(state.points, design.points):
        raise ValueError("state does not match design")
    new = state.copy()
    value, pending = new.propose(i, y)
    new.commit(pending)
    if isinstance(new, NnState) and not isinstance(new, MindistState) and np.any(new.rho <= 0.0):
        raise ZeroDistanceError(f"replacing point {i} creates a duplicate")
    return new, value
