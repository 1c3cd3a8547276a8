"""Detection kernel backend selection.

The compiled extension is used when available; set LAACSIM_PURE_PYTHON=1
to force the pure-Python fallback.  Both implement the same arithmetic
and return identical results.
"""

import os

BACKEND = "python"

if os.environ.get("LAACSIM_PURE_PYTHON", "") not in ("", "0"):
    from .detect_py import detect_indices
else:
    try:
        from ._detect_cy import detect_indices
        BACKEND = "cython"
    except ImportError:
        from .detect_py import detect_indices


def get_backend(name):
    """Fetch a specific backend's detect_indices (for tests/benchmarks)."""
    if name == "python":
        from .detect_py import detect_indices as f
        return f
    if name == "cython":
        from ._detect_cy import detect_indices as f
        return f
    raise KeyError(name)


def available_backends():
    names = ["python"]
    try:
        from . import _detect_cy  # noqa: F401
        names.append("cython")
    except ImportError:
        pass
    return names
