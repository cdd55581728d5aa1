#!/usr/bin/env python3
"""Benchmark the compiled quadrature kernels against the numpy fallback.

Times the dominant inner loop (the spectral-rate grid sums) at several
grid sides for both backends and checks they agree to near machine
precision.  Run from the repository root:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from hgmrf import _kernels_py

try:
    from hgmrf import _kernels

    HAVE_COMPILED = True
except ImportError:
    _kernels = None
    HAVE_COMPILED = False

SIZES = (512, 1024, 2048, 4096)
SCALE, ZETA = 5.0, 0.2
TAPS = np.array([1.0, -0.2, -0.2, -0.2, -0.2])
OI = np.array([0, 1, -1, 0, 0], dtype=np.int64)
OJ = np.array([0, 0, 0, 1, -1], dtype=np.int64)


def _time(fn, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    if not HAVE_COMPILED:
        print("compiled kernel not built; showing fallback timings only")
    print(f"{'kernel':>14} {'n':>6} {'python [s]':>12} {'cython [s]':>12} {'speedup':>9}")
    for n in SIZES:
        t_py, r_py = _time(lambda: _kernels_py.sfcar_grid_sums(SCALE, ZETA, n, True))
        if HAVE_COMPILED:
            t_cy, r_cy = _time(lambda: _kernels.sfcar_grid_sums(SCALE, ZETA, n, True))
            rel = max(
                abs(r_py[0] - r_cy[0]) / abs(r_cy[0]),
                abs(r_py[1] - r_cy[1]) / abs(r_cy[1]),
            )
            assert rel < 1e-13, f"backend mismatch: {rel:.2e}"
            print(f"{'sfcar_sums':>14} {n:>6} {t_py:>12.4f} {t_cy:>12.4f} {t_py / t_cy:>8.1f}x")
        else:
            print(f"{'sfcar_sums':>14} {n:>6} {t_py:>12.4f} {'-':>12} {'-':>9}")
    for n in (512, 1024, 2048):
        t_py, r_py = _time(lambda: _kernels_py.car_grid_sums(TAPS, OI, OJ, 1.0, n))
        if HAVE_COMPILED:
            t_cy, r_cy = _time(lambda: _kernels.car_grid_sums(TAPS, OI, OJ, 1.0, n))
            rel = abs(r_py[0] - r_cy[0]) / abs(r_cy[0])
            assert rel < 1e-13, f"backend mismatch: {rel:.2e}"
            print(f"{'car_sums':>14} {n:>6} {t_py:>12.4f} {t_cy:>12.4f} {t_py / t_cy:>8.1f}x")
        else:
            print(f"{'car_sums':>14} {n:>6} {t_py:>12.4f} {'-':>12} {'-':>9}")


if __name__ == "__main__":
    main()
