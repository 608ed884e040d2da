"""Selects the row-reduction backend at import time.

The compiled GMP backend is used when it was built; setting the
environment variable ``HERMLAMBDA_PURE=1`` forces the pure-Python one.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
rref = _kernels_py.rref
rank_mod_p = _kernels_py.rank_mod_p
rank_profile = _kernels_py.rank_profile

if os.environ.get("HERMLAMBDA_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        BACKEND = "compiled"
        rref = _kernels.rref
        rank_mod_p = _kernels.rank_mod_p
        rank_profile = _kernels.rank_profile

# 62-bit prime used for the modular rank prefilter.
PRIME = (1 << 62) - 57

__all__ = ["BACKEND", "PRIME", "rank_mod_p", "rank_profile", "rref"]
