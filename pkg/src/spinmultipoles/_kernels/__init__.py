"""Kernel selection: compiled extension when built, numpy fallback otherwise.

Set SPINMULTIPOLES_PURE=1 to force the pure-python kernels (useful for
benchmark baselines and debugging).
"""

import os

if os.environ.get("SPINMULTIPOLES_PURE"):
    from . import purepy as impl

    IMPLEMENTATION = "python"
else:
    try:
        from . import _ckern as impl  # type: ignore[attr-defined]

        IMPLEMENTATION = "compiled"
    except ImportError:
        from . import purepy as impl

        IMPLEMENTATION = "python"

__all__ = ["impl", "IMPLEMENTATION"]
