"""Pick the exchange-loop implementation at import time.

The compiled ``_core`` extension is used when it was built; otherwise the
numpy implementation in ``_pycore`` takes over with identical semantics.
"""

from . import _pycore

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

BACKENDS = {"python": _pycore}
if _core is not None:
    BACKENDS["cython"] = _core

DEFAULT = "cython" if _core is not None else "python"


def get(name=None):
    if name is None:
        name = DEFAULT
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} not available; have {sorted(BACKENDS)}") from None
