"""Float kernel selection: the compiled core when built, else the numpy fallback.

Set ``KSTAB_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
grid_volumes = _kernels_py.grid_volumes

if os.environ.get("KSTAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        grid_volumes = _kernels.grid_volumes
        BACKEND = "compiled"

__all__ = ["BACKEND", "grid_volumes"]
