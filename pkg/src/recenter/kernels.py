"""Backend selection for the lattice kernels.

The compiled extension is used when it was built; otherwise the numpy
implementation. Set ``RECENTER_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

try:
    if os.environ.get("RECENTER_PURE_PYTHON"):
        raise ImportError("pure-python backend requested")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _kernels_py
    BACKEND = "python"

ratio_lattice_max = _impl.ratio_lattice_max
central_moment_ratios = _impl.central_moment_ratios


def backends():
    """Available kernel modules keyed by name."""
    found = {"python": _kernels_py}
    try:
        from . import _ckernels

        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
