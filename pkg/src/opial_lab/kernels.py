"""Backend selection for the hot loops.

The Cython extension ``opial_lab._kernels`` is used when it was built;
otherwise, or when ``OPIAL_LAB_PURE=1`` is set, the pure-Python module is
used.  ``BACKEND`` names the active one.
"""

import os

from . import _kernels_py

if os.environ.get("OPIAL_LAB_PURE", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

rk4_emden = _impl.rk4_emden
rk4_endpoint = _impl.rk4_endpoint
thomas_solve = _impl.thomas_solve

__all__ = ["BACKEND", "rk4_emden", "rk4_endpoint", "thomas_solve"]
