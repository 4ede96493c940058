"""Backend selection for the combinatorial kernels.

The compiled extension is used when it imports; set
``QUERYBOUNDS_PURE_PYTHON=1`` to force the pure-Python fallback.  Inputs
wider than 62 bits always take the Python path.
"""
from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("QUERYBOUNDS_PURE_PYTHON"):
    _fast = None
else:
    try:
        from . import _ckernels as _fast
    except ImportError:  # extension not built
        _fast = None

BACKEND = _fast.BACKEND if _fast is not None else _pykernels.BACKEND


def _impl(n: int):
    return _fast if (_fast is not None and n <= 62) else _pykernels


def min_hitting_set(masks, n: int) -> tuple[int, int]:
    return _impl(n).min_hitting_set(list(masks), n)


def max_disjoint_blocks(masks, n: int) -> tuple[int, list[int]]:
    return _impl(n).max_disjoint_blocks(list(masks), n)


def measure_all(codes, outputs, n: int):
    return _impl(n).measure_all(codes, outputs, n)
