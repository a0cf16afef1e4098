# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``; same signatures."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, pow, fabs, INFINITY, isfinite

cnp.import_array()


cdef inline void _eval(const double[::1] c, const long[::1] p, const double[::1] r,
                       double t, double* val, double* der) noexcept nogil:
    cdef Py_ssize_t i, n = c.shape[0]
    cdef double v = 0.0, d = 0.0, e, tp, tpm1
    for i in range(n):
        e = exp(-r[i] * t)
        if p[i] == 0:
            tp = 1.0
            tpm1 = 0.0
        else:
            tp = pow(t, <double>p[i])
            tpm1 = p[i] * pow(t, <double>(p[i] - 1))
        v += c[i] * tp * e
        d += c[i] * e * (tpm1 - r[i] * tp)
    val[0] = v
    der[0] = d


def expoly_eval(coef, power, rate, t):
    cdef const double[::1] c = np.ascontiguousarray(coef, dtype=np.float64)
    cdef const long[::1] p = np.ascontiguousarray(power, dtype=np.int64)
    cdef const double[::1] r = np.ascontiguousarray(rate, dtype=np.float64)
    ta = np.asarray(t, dtype=np.float64)
    flat = np.ascontiguousarray(ta.ravel())
    cdef const double[::1] tv = flat
    vals = np.empty(flat.shape[0])
    ders = np.empty(flat.shape[0])
    cdef double[::1] vv = vals, dv = ders
    cdef Py_ssize_t k
    cdef double a, b
    for k in range(tv.shape[0]):
        _eval(c, p, r, tv[k], &a, &b)
        vv[k] = a
        dv[k] = b
    return vals.reshape(ta.shape), ders.reshape(ta.shape)


def expoly_isf(coef, power, rate, targets, double lower=0.0, double rtol=1e-15,
               int maxiter=200):
    cdef const double[::1] c = np.ascontiguousarray(coef, dtype=np.float64)
    cdef const long[::1] p = np.ascontiguousarray(power, dtype=np.int64)
    cdef const double[::1] r = np.ascontiguousarray(rate, dtype=np.float64)
    ya = np.asarray(targets, dtype=np.float64)
    flat = np.ascontiguousarray(ya.ravel())
    cdef const double[::1] y = flat
    out = np.empty(flat.shape[0])
    cdef double[::1] o = out
    cdef double top, dummy, a, b, x, nx, v, d, g, ly, scale
    cdef Py_ssize_t k
    cdef int it
    _eval(c, p, r, lower, &top, &dummy)
    with nogil:
        for k in range(y.shape[0]):
            if y[k] <= 0:
                o[k] = INFINITY
                continue
            if y[k] >= top:
                o[k] = lower
                continue
            ly = log(y[k])
            a = lower
            b = 1.0 if 2.0 * lower < 1.0 else 2.0 * lower
            for it in range(2000):
                _eval(c, p, r, b, &v, &d)
                if v < y[k]:
                    break
                a = b
                b = 2.0 * b
            x = 0.5 * (a + b)
            for it in range(maxiter):
                _eval(c, p, r, x, &v, &d)
                if v > 0:
                    g = log(v) - ly
                else:
                    g = -INFINITY
                if g == 0:
                    break
                if g > 0:
                    a = x
                else:
                    b = x
                nx = x - g * v / d
                if not (isfinite(nx) and nx > a and nx < b):
                    nx = 0.5 * (a + b)
                scale = fabs(nx) if fabs(nx) > 1.0 else 1.0
                if fabs(nx - x) <= rtol * scale or b - a <= 4e-16 * scale:
                    x = nx
                    break
                x = nx
            o[k] = x
    return out.reshape(ya.shape)


def tp2_scan(K, double sign=1.0):
    cdef const double[:, ::1] A = np.ascontiguousarray(K, dtype=np.float64)
    cdef Py_ssize_t n = A.shape[0], m = A.shape[1]
    cdef Py_ssize_t i1, i2, j1, j2
    cdef Py_ssize_t b1 = 0, b2 = 0, c1 = 0, c2 = 0
    cdef double worst = INFINITY, det, s1, s2, scale, norm
    with nogil:
        for i1 in range(n - 1):
            for i2 in range(i1 + 1, n):
                for j1 in range(m - 1):
                    for j2 in range(j1 + 1, m):
                        det = sign * (A[i1, j1] * A[i2, j2] - A[i1, j2] * A[i2, j1])
                        s1 = A[i1, j1] if A[i1, j1] > A[i1, j2] else A[i1, j2]
                        s2 = A[i2, j1] if A[i2, j1] > A[i2, j2] else A[i2, j2]
                        scale = s1 * s2
                        norm = det / scale if scale > 0 else 0.0
                        if norm < worst:
                            worst = norm
                            b1 = i1
                            b2 = i2
                            c1 = j1
                            c2 = j2
    count = (n * (n - 1) // 2) * (m * (m - 1) // 2)
    return (float(worst), int(b1), int(b2), int(c1), int(c2), int(count))
