"""Pure-Python exchange loops, same signatures as the compiled ``_core``."""

import numpy as np

from .entropy import GAUSSIAN, KdeState, KernelSpec, MindistState, NnState

NAME = "python"


def _run(state, pts, idx, cand, max_stale):
    m = len(idx)
    accepted = np.zeros(m, dtype=bool)
    values = np.empty(m)
    initial = cur = state.entropy
    stale = count = 0
    for t in range(m):
        if stale >= max_stale:
            break
        value, pending = state.propose(int(idx[t]), cand[t])
        count += 1
        if value > cur:
            state.commit(pending)
            cur = value
            accepted[t] = True
            stale = 0
        else:
            stale += 1
        values[t] = cur
    pts[...] = state.points
    return count, accepted[:count], values[:count], initial


def exchange_kde(pts, idx, cand, h, s2, max_stale):
    d = pts.shape[1]
    kernel = KernelSpec(GAUSSIAN, d, h, s2=s2)
    return _run(KdeState(pts, kernel), pts, idx, cand, max_stale)


def exchange_nn(pts, idx, cand, offset, mode, max_stale):
    state = MindistState(pts) if mode == 1 else NnState(pts)
    return _run(state, pts, idx, cand, max_stale)
