# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lattice kernels. ``_kernels_py`` holds the reference versions."""
import numpy as np

from libc.math cimport fabs, pow


def ratio_lattice_max(double p, const double[::1] bs, const double[::1] ss):
    """Max of the two-point ratio over ``b`` in ``bs`` and ``t = b + s``, ``s`` in ``ss``.

    With ``a = 1 - b`` and ``f = |.|^p`` the ratio is
    ``(a f(b) + b f(-a)) / (a |s|^p + b |1 + s|^p)``. Returns ``(best, i, j)``:
    per row the first minimizer of the denominator, across rows the first
    strict maximum.
    """
    cdef Py_ssize_t nb = bs.shape[0], ns = ss.shape[0]
    cdef Py_ssize_t i, j, jmin, bi = -1, bj = -1
    cdef double b, a, num, den, dmin, ratio, best = -1.0
    u_arr = np.empty(ns, dtype=np.float64)
    v_arr = np.empty(ns, dtype=np.float64)
    cdef double[::1] u = u_arr, v = v_arr
    with nogil:
        for j in range(ns):
            u[j] = pow(fabs(ss[j]), p)
            v[j] = pow(fabs(1.0 + ss[j]), p)
        for i in range(nb):
            b = bs[i]
            a = 1.0 - b
            num = a * pow(b, p) + b * pow(a, p)
            dmin = a * u[0] + b * v[0]
            jmin = 0
            for j in range(1, ns):
                den = a * u[j] + b * v[j]
                if den < dmin:
                    dmin = den
                    jmin = j
            ratio = num / dmin
            if ratio > best:
                best = ratio
                bi = i
                bj = jmin
    return best, bi, bj


def central_moment_ratios(const double[:, ::1] xs, const double[:, ::1] ws,
                          const long[::1] counts, double p):
    """Row-wise ``E|X - EX|^p / E|X|^p`` for padded atom/weight arrays."""
    cdef Py_ssize_t n = xs.shape[0], i, k
    cdef long m
    cdef double mean, num, den
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            m = counts[i]
            mean = 0.0
            for k in range(m):
                mean += ws[i, k] * xs[i, k]
            num = 0.0
            den = 0.0
            for k in range(m):
                num += ws[i, k] * pow(fabs(xs[i, k] - mean), p)
                den += ws[i, k] * pow(fabs(xs[i, k]), p)
            o[i] = num / den
    return out
