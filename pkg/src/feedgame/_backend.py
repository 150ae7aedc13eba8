"""Kernel backend selection.

Prefers the compiled Cython extension; falls back to the pure-Python twin
when the extension is absent (source checkout without a build) or when
FEEDGAME_PURE=1 is set. Both backends produce bit-identical results.
"""
from __future__ import annotations

import os

if os.environ.get("FEEDGAME_PURE"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]

COMPILED: bool = kernels.COMPILED


def backend_name() -> str:
    """'compiled' when the Cython extension is active, else 'pure-python'."""
    return "compiled" if kernels.COMPILED else "pure-python"
