# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled reductions for the spectral quadrature grids.

These are the hot inner loops: O(N^2) sums of the per-frequency divergence
and log-SNR integrands over uniform grids with N up to a few thousand per
axis.  Accumulation uses Kahan compensation in a fixed traversal order so
results are deterministic and accurate to ~1 ulp regardless of grid size.
"""

from libc.math cimport cos, log1p
from libc.stdlib cimport free, malloc

cdef double TWO_PI = 6.283185307179586476925287


cdef inline void _kadd(double x, double *s, double *c) noexcept nogil:
    # Kahan compensated add of x into accumulator (*s, *c).
    cdef double y = x - c[0]
    cdef double t = s[0] + y
    c[0] = (t - s[0]) - y
    s[0] = t


cdef double *_cos_grid(int n, bint midpoint) except NULL:
    cdef double *cw = <double *> malloc(n * sizeof(double))
    if cw == NULL:
        raise MemoryError()
    cdef int i
    cdef double w
    for i in range(n):
        if midpoint:
            w = -0.5 * TWO_PI + TWO_PI * (i + 0.5) / n
        else:
            w = TWO_PI * i / n
        cw[i] = cos(w)
    return cw


def sfcar_grid_sums(double scale, double zeta, int n, bint midpoint):
    """Grid means of the divergence and half-log integrands.

    The spectral SNR at frequency (w1, w2) is
    s = scale / (1 - 2*zeta*cos(w1) - 2*zeta*cos(w2)); returns
    (mean of 0.5*log1p(s) - 0.5*s/(1+s), mean of 0.5*log1p(s)) over an
    n-by-n grid (midpoint offsets or torus nodes 2*pi*k/n).
    """
    if n < 1:
        raise ValueError("grid side must be >= 1")
    cdef double *cw = _cos_grid(n, midpoint)
    cdef int i, j
    cdef double row1, den, s, halflog
    cdef double kli = 0.0, ck = 0.0, mi = 0.0, cm = 0.0
    with nogil:
        for i in range(n):
            row1 = 1.0 - 2.0 * zeta * cw[i]
            for j in range(n):
                den = row1 - 2.0 * zeta * cw[j]
                s = scale / den
                halflog = 0.5 * log1p(s)
                _kadd(halflog, &mi, &cm)
                _kadd(halflog - 0.5 * s / (1.0 + s), &kli, &ck)
    free(cw)
    cdef double norm = <double> n * <double> n
    return kli / norm, mi / norm


def car_grid_sums(double[:] theta, long[:] oi, long[:] oj, double sigma2, int n):
    """Midpoint-grid means for a general finite-tap precision denominator.

    den(w1, w2) = sum_t theta[t]*cos(oi[t]*w1 + oj[t]*w2) and the spectral
    SNR is s = 1/(sigma2*den).  Returns (kli_mean, mi_mean, min_den); the
    caller must reject min_den <= 0 (invalid autoregression).
    """
    if n < 1:
        raise ValueError("grid side must be >= 1")
    cdef Py_ssize_t ntap = theta.shape[0]
    if oi.shape[0] != ntap or oj.shape[0] != ntap:
        raise ValueError("tap arrays must have equal length")
    cdef double *w = <double *> malloc(n * sizeof(double))
    if w == NULL:
        raise MemoryError()
    cdef int i, j
    cdef Py_ssize_t t
    cdef double den, s, halflog, w1
    cdef double kli = 0.0, ck = 0.0, mi = 0.0, cm = 0.0
    cdef double min_den = 1e308
    for i in range(n):
        w[i] = -0.5 * TWO_PI + TWO_PI * (i + 0.5) / n
    with nogil:
        for i in range(n):
            w1 = w[i]
            for j in range(n):
                den = 0.0
                for t in range(ntap):
                    den += theta[t] * cos(oi[t] * w1 + oj[t] * w[j])
                if den < min_den:
                    min_den = den
                if den > 0.0:
                    s = 1.0 / (sigma2 * den)
                    halflog = 0.5 * log1p(s)
                    _kadd(halflog, &mi, &cm)
                    _kadd(halflog - 0.5 * s / (1.0 + s), &kli, &ck)
    free(w)
    cdef double norm = <double> n * <double> n
    return kli / norm, mi / norm, min_den
