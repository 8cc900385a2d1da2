"""Backend selection for the modular kernels.

The compiled extension is used when it imports; setting ``LIEFOLD_PURE=1``
forces the numpy fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("LIEFOLD_PURE", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND
matmul_mod = _impl.matmul_mod
pair_dp = _impl.pair_dp
chain_dp = _impl.chain_dp
