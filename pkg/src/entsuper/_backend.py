"""Select the compiled kernels when available, else the pure-Python twins."""

from __future__ import annotations

import os

if os.environ.get("ENTSUPER_PURE", "") not in ("", "0"):
    from . import _fallback as kernels
    COMPILED = False
else:
    try:
        from . import _kernels as kernels
        COMPILED = True
    except ImportError:  # extension not built
        from . import _fallback as kernels
        COMPILED = False

jacobi_eigh = kernels.jacobi_eigh
rotation_sweeps = kernels.rotation_sweeps

__all__ = ["COMPILED", "jacobi_eigh", "rotation_sweeps"]
