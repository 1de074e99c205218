"""Backend selection for the hot loops.

The compiled extension is used when it was built; otherwise the numpy
fallback is imported. Set ``READNET_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels as python

compiled = None
if os.environ.get("READNET_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _kernels as compiled
    except ImportError:  # extension not built
        compiled = None

_impl = compiled if compiled is not None else python
BACKEND = "cython" if compiled is not None else "python"

cooccurrence = _impl.cooccurrence
bfs_distances = _impl.bfs_distances
distance_histogram = _impl.distance_histogram
louvain_move = _impl.louvain_move


def backends():
    """Available implementations keyed by name, for tests and benchmarks."""
    out = {"python": python}
    if compiled is not None:
        out["cython"] = compiled
    return out
