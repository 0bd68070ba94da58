"""Hot enumeration kernels.

The compiled extension is used when it was built; otherwise the pure-Python
reference implementation is selected at import.  ``IMPLEMENTATION`` records
which one is active.  ``benchmarks/bench_kernels.py`` compares the two.
"""

from . import reference

try:
    from . import _fast

    IMPLEMENTATION = "compiled"
    min_affine_weight = _fast.min_affine_weight
    min_ratio_scan = _fast.min_ratio_scan
except ImportError:
    IMPLEMENTATION = "python"
    min_affine_weight = reference.min_affine_weight
    min_ratio_scan = reference.min_ratio_scan

__all__ = ["IMPLEMENTATION", "min_affine_weight", "min_ratio_scan", "reference"]
