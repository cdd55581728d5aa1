"""Kernel backend selection.

The quadrature reductions have two interchangeable implementations: a
compiled Cython extension (``hgmrf._kernels``) and a numpy fallback
(``hgmrf._kernels_py``).  The compiled module is preferred when the
extension built; both satisfy the same determinism contract.  See
``benchmarks/bench_kernels.py`` for a speed comparison.
"""

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _impl

    BACKEND = "cython"
except ImportError:  # extension not built
    _impl = _kernels_py
    BACKEND = "python"


def active_backend() -> str:
    """Name of the kernel implementation in use: 'cython' or 'python'."""
    return BACKEND


def sfcar_grid_sums(scale: float, zeta: float, n: int, midpoint: bool):
    return _impl.sfcar_grid_sums(float(scale), float(zeta), int(n), bool(midpoint))


def car_grid_sums(theta, oi, oj, sigma2: float, n: int):
    theta = np.ascontiguousarray(theta, dtype=np.float64)
    oi = np.ascontiguousarray(oi, dtype=np.int64)
    oj = np.ascontiguousarray(oj, dtype=np.int64)
    return _impl.car_grid_sums(theta, oi, oj, float(sigma2), int(n))
