# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled exchange loops.

Each loop consumes pre-drawn proposals (row index + candidate point), so the
random stream is identical to the pure-Python path in ``_pycore``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, sqrt, INFINITY, M_PI, pow

cnp.import_array()

NAME = "cython"


cdef double _kde_entropy(double[::1] dens, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t j
    cdef double acc = 0.0
    for j in range(n):
        if dens[j] <= 0.0:
            return -INFINITY
        acc += log(dens[j])
    return -acc / n


def exchange_kde(double[:, ::1] pts, const cnp.int64_t[::1] idx, const double[:, ::1] cand,
                 double h, double s2, Py_ssize_t max_stale):
    """Exchange loop for the Gaussian-kernel resubstitution entropy.

    ``pts`` is updated in place. Returns ``(count, accepted, values, initial)``.
    """
    cdef Py_ssize_t n = pts.shape[0], d = pts.shape[1], m = idx.shape[0]
    cdef Py_ssize_t i, j, k, t, stale = 0, count = 0
    cdef double peak = pow(2.0 * M_PI * s2, -0.5 * d)
    cdef double coef = -0.5 / (s2 * h * h)
    cdef double scale = 1.0 / (n * pow(h, <double>d))
    cdef double sq, diff, cur, new, initial

    kmat_a = np.empty((n, n))
    dens_a = np.zeros(n)
    col_a = np.empty(n)
    cand_dens_a = np.empty(n)
    acc_a = np.zeros(m, dtype=np.uint8)
    val_a = np.empty(m)
    cdef double[:, ::1] kmat = kmat_a
    cdef double[::1] dens = dens_a, col = col_a, cdens = cand_dens_a, vals = val_a
    cdef cnp.uint8_t[::1] acc = acc_a

    with nogil:
        for i in range(n):
            kmat[i, i] = peak
            for j in range(i + 1, n):
                sq = 0.0
                for k in range(d):
                    diff = pts[i, k] - pts[j, k]
                    sq = sq + diff * diff
                kmat[i, j] = peak * exp(coef * sq)
                kmat[j, i] = kmat[i, j]
        for i in range(n):
            cur = 0.0
            for j in range(n):
                cur = cur + kmat[i, j]
            dens[i] = cur * scale
        cur = _kde_entropy(dens, n)
        initial = cur

        for t in range(m):
            if stale >= max_stale:
                break
            i = idx[t]
            new = 0.0
            for j in range(n):
                if j == i:
                    col[j] = peak
                else:
                    sq = 0.0
                    for k in range(d):
                        diff = pts[j, k] - cand[t, k]
                        sq = sq + diff * diff
                    col[j] = peak * exp(coef * sq)
                new = new + col[j]
            for j in range(n):
                cdens[j] = dens[j] + (col[j] - kmat[j, i]) * scale
            cdens[i] = new * scale
            new = _kde_entropy(cdens, n)
            count += 1
            if new > cur:
                cur = new
                acc[t] = 1
                stale = 0
                for k in range(d):
                    pts[i, k] = cand[t, k]
                for j in range(n):
                    kmat[i, j] = col[j]
                    kmat[j, i] = col[j]
                    dens[j] = cdens[j]
            else:
                stale += 1
            vals[t] = cur
    return count, acc_a[:count].astype(bool), val_a[:count].copy(), initial


cdef double _nn_score(double[::1] rho, Py_ssize_t n, Py_ssize_t d, double offset, int mode) noexcept nogil:
    cdef Py_ssize_t j
    cdef double acc = 0.0, lo = INFINITY
    if mode == 1:
        for j in range(n):
            if rho[j] < lo:
                lo = rho[j]
        return lo
    for j in range(n):
        if rho[j] <= 0.0:
            return -INFINITY
        acc += log(rho[j])
    return d * (acc / n) + offset


def exchange_nn(double[:, ::1] pts, const cnp.int64_t[::1] idx, const double[:, ::1] cand,
                double offset, int mode, Py_ssize_t max_stale):
    """Exchange loop on nearest-neighbour distances.

    ``mode`` 0 scores with the nearest-neighbour entropy (``offset`` is its
    additive constant), ``mode`` 1 with the minimum pairwise distance.
    """
    cdef Py_ssize_t n = pts.shape[0], d = pts.shape[1], m = idx.shape[0]
    cdef Py_ssize_t i, j, k, l, t, stale = 0, count = 0
    cdef double sq, diff, cur, new, lo, initial

    dmat_a = np.empty((n, n))
    rho_a = np.empty(n)
    col_a = np.empty(n)
    crho_a = np.empty(n)
    acc_a = np.zeros(m, dtype=np.uint8)
    val_a = np.empty(m)
    cdef double[:, ::1] dmat = dmat_a
    cdef double[::1] rho = rho_a, col = col_a, crho = crho_a, vals = val_a
    cdef cnp.uint8_t[::1] acc = acc_a

    with nogil:
        for i in range(n):
            dmat[i, i] = INFINITY
            for j in range(i + 1, n):
                sq = 0.0
                for k in range(d):
                    diff = pts[i, k] - pts[j, k]
                    sq = sq + diff * diff
                dmat[i, j] = sqrt(sq)
                dmat[j, i] = dmat[i, j]
        for i in range(n):
            lo = INFINITY
            for j in range(n):
                if dmat[i, j] < lo:
                    lo = dmat[i, j]
            rho[i] = lo
        cur = _nn_score(rho, n, d, offset, mode)
        initial = cur

        for t in range(m):
            if stale >= max_stale:
                break
            i = idx[t]
            lo = INFINITY
            for j in range(n):
                if j == i:
                    col[j] = INFINITY
                    continue
                sq = 0.0
                for k in range(d):
                    diff = pts[j, k] - cand[t, k]
                    sq = sq + diff * diff
                col[j] = sqrt(sq)
                if col[j] < lo:
                    lo = col[j]
                if dmat[j, i] == rho[j]:
                    # i may have been j's nearest neighbour: rescan the row
                    new = col[j]
                    for l in range(n):
                        if l != i and dmat[j, l] < new:
                            new = dmat[j, l]
                    crho[j] = new
                else:
                    crho[j] = rho[j] if rho[j] < col[j] else col[j]
            crho[i] = lo
            new = _nn_score(crho, n, d, offset, mode)
            count += 1
            if new > cur:
                cur = new
                acc[t] = 1
                stale = 0
                for k in range(d):
                    pts[i, k] = cand[t, k]
                for j in range(n):
                    dmat[i, j] = col[j]
                    dmat[j, i] = col[j]
                    rho[j] = crho[j]
            else:
                stale += 1
            vals[t] = cur
    return count, acc_a[:count].astype(bool), val_a[:count].copy(), initial
