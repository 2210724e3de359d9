"""Backend selection for the hot kernels.

The compiled extension is used when it imports; ``SEPBALL_PURE_PYTHON=1``
forces the numpy fallback. ``BACKEND`` names the active one.
"""

from __future__ import annotations

import os

from . import _kernels_py

PURE_PYTHON_ENV = "SEPBALL_PURE_PYTHON"

if os.environ.get(PURE_PYTHON_ENV, "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

ascend_product = _impl.ascend_product
party_matrix = _impl.party_matrix


def available_backends() -> dict:
    """Map of backend name to kernel module, for benchmarks and cross-checks."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels  # type: ignore[attr-defined]

        out["compiled"] = _kernels
    except ImportError:
        pass
    return out
