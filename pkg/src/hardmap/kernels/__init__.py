"""Numeric kernel backend selection.

The compiled extension is preferred when importable; HARDMAP_BACKEND forces
a choice ("c", "py", or the default "auto"). Both backends are written to
produce identical output bits for identical input.
"""

import os

from . import _pykern

_choice = os.environ.get("HARDMAP_BACKEND", "auto").lower()
if _choice not in {"auto", "c", "py"}:
    raise RuntimeError(f"HARDMAP_BACKEND must be 'auto', 'c' or 'py', got {_choice!r}")

_impl = _pykern
_backend = "py"
if _choice in ("auto", "c"):
    try:
        from . import _ckern as _impl  # type: ignore[no-redef]

        _backend = "c"
    except ImportError:
        if _choice == "c":
            raise
        _impl = _pykern

pairwise_sqdist = _impl.pairwise_sqdist
cross_sqdist = _pykern.cross_sqdist  # cheap enough in NumPy at any scale
best_gini_split = _impl.best_gini_split
best_sse_split = _impl.best_sse_split
prim_mst = _impl.prim_mst
dbscan_labels = _impl.dbscan_labels


def backend_name():
    """Active backend: 'c' (compiled extension) or 'py' (NumPy fallback)."""
    return _backend
