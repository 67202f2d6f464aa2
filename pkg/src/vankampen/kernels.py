"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``VK_PURE_PYTHON=1`` to force the fallback (used by the benchmark and by
the equivalence tests).
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("VK_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:  # no compiler at install time
        _compiled = None
    if _compiled is not None:
        _impl = _compiled
        BACKEND = "cython"

bfs_levels = _impl.bfs_levels
all_pairs_max = _impl.all_pairs_max
perm_orbits = _impl.perm_orbits
canonical_order = _impl.canonical_order
