"""Grid kernels: compiled core with a pure-numpy fallback.

The compiled extension is optional; when it is missing (no compiler, or
the package was installed without build steps) the numpy twin is used.
``BACKEND`` records which one is active.  ``backend_module(name)``
returns a specific implementation for tests and benchmarks.
"""

from . import pykernels

try:
    from . import _ckernels  # type: ignore[attr-defined]

    _impl = _ckernels
    BACKEND = "cython"
except ImportError:
    _impl = pykernels
    BACKEND = "python"

min_dists = _impl.min_dists
update_min_dists = _impl.update_min_dists
min_dist_to_set = _impl.min_dist_to_set
greedy_farthest = _impl.greedy_farthest
packing_scan = _impl.packing_scan
cross_le = _impl.cross_le
greedy_cover = _impl.greedy_cover


def backend_module(name: str):
    if name == "python":
        return pykernels
    if name == "cython":
        if BACKEND != "cython":
            raise ImportError("compiled kernels are not available")
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")
