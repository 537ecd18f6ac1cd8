"""Order kernels, compiled when available.

The compiled bitset module is used unless it failed to build or
``LADDERS_PURE_PYTHON`` is set to a non-empty value; both backends return
identical results.
"""
import os

from . import _kernels_py

if os.environ.get("LADDERS_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

_impl = _compiled if _compiled is not None else _kernels_py

BACKEND = _impl.BACKEND
transitive_closure = _impl.transitive_closure
order_violation = _impl.order_violation
join_table = _impl.join_table
meet_table = _impl.meet_table
cover_matrix = _impl.cover_matrix
breadth_violation = _impl.breadth_violation


def backends():
    """Mapping from backend name to module for every importable backend."""
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out
