# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch kernels; see ``_kernels_py`` for the reference versions."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs
from libc.complex cimport cabs

cnp.import_array()


def dual_hahn_batch(int k, xsq, double a, double b, double c):
    cdef cnp.ndarray[double, ndim=1] xs = np.ascontiguousarray(xsq, dtype=float).ravel()
    cdef Py_ssize_t i, m = xs.shape[0]
    cdef int l, j
    cdef double ab = a + b, ac = a + c, term, total, pref = 1.0, x2
    out = np.empty(m, dtype=float)
    cdef double[::1] o = out
    for j in range(k):
        pref *= (ab + j) * (ac + j)
    for i in range(m):
        x2 = xs[i]
        term = 1.0
        total = 1.0
        for l in range(k):
            term = term * ((l - k) * ((a + l) * (a + l) + x2)) / ((ab + l) * (ac + l) * (l + 1))
            total += term
        o[i] = pref * total
    return out.reshape(np.shape(xsq))


def hyp2f1_series_batch(a, b, c, x, double tol=1e-17, long max_terms=100000):
    cdef double complex ca = a, cb = b, cc = c
    cdef cnp.ndarray[double, ndim=1] xs = np.ascontiguousarray(x, dtype=float).ravel()
    cdef Py_ssize_t i, m = xs.shape[0]
    cdef long j, quiet
    cdef double complex term, total, ratio
    cdef double xv
    vals = np.empty(m, dtype=complex)
    nts = np.empty(m, dtype=np.int64)
    conv = np.zeros(m, dtype=bool)
    cdef double complex[::1] v = vals
    cdef long long[::1] nt = nts
    cdef cnp.npy_bool[::1] cv = conv
    for i in range(m):
        xv = xs[i]
        term = 1.0
        total = 1.0
        quiet = 0
        nt[i] = max_terms
        if xv == 0.0:
            v[i] = total
            nt[i] = 0
            cv[i] = True
            continue
        for j in range(max_terms):
            ratio = (ca + j) * (cb + j) / ((cc + j) * (j + 1)) * xv
            term = term * ratio
            total = total + term
            if cabs(term) <= tol * cabs(total):
                quiet += 1
            else:
                quiet = 0
            if quiet >= 3 and cabs(ratio) < 1.0:
                nt[i] = j + 1
                cv[i] = True
                break
        v[i] = total
    shape = np.shape(x)
    return vals.reshape(shape), nts.reshape(shape), conv.reshape(shape)
