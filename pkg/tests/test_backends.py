"""The compiled and pure-Python exchange loops must agree."""

import numpy as np
import pytest

from kldesign import Objective, OptimizerConfig, SeededRng, _backend, exchange_run
from kldesign.generators import gen_random

needs_ext = pytest.mark.skipif("cython" not in _backend.BACKENDS, reason="compiled extension not built")


def test_default_backend_available():
    assert _backend.DEFAULT in _backend.BACKENDS
    assert _backend.get().NAME == _backend.DEFAULT
    with pytest.raises(ValueError):
        _backend.get("fortran")


@needs_ext
@pytest.mark.parametrize("kind", ["entropy-mc-gauss", "entropy-nn", "mindist"])
@pytest.mark.parametrize("n, d", [(30, 3), (20, 2), (50, 10)])
def test_backends_agree(kind, n, d):
    initial = gen_random(n, d, SeededRng(n * d))
    cfg = OptimizerConfig(seed=SeededRng(17))
    fast_design, fast = exchange_run(initial, Objective(kind), cfg, backend="cython")
    slow_design, slow = exchange_run(initial, Objective(kind), cfg, backend="python")
    assert np.array_equal(fast.accepted, slow.accepted)
    assert np.allclose(fast.objective, slow.objective, rtol=0, atol=1e-9)
    assert np.array_equal(fast_design.points, slow_design.points)


def test_fallback_when_extension_missing():
    import subprocess
    import sys

    code = (
        "import sys; sys.modules['kldesign._core'] = None\n"
        "import kldesign\n"
        "from kldesign import Objective, OptimizerConfig, SeededRng, multi_start\n"
        "assert kldesign.BACKEND == 'python', kldesign.BACKEND\n"
        "d, t = multi_start(Objective('entropy-nn'), 10, 2, OptimizerConfig(restarts=1, max_proposals=50))\n"
        "print(t[0].proposals)\n"
    )
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert int(proc.stdout) <= 50
