# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels; mirror of _kernels_py."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def batch_eval(ptr, vars_, exps, coeffs, outs, X, int cod):
    cdef cnp.int64_t[::1] cptr = np.ascontiguousarray(ptr, dtype=np.int64)
    cdef cnp.int64_t[::1] cvars = np.ascontiguousarray(vars_, dtype=np.int64)
    cdef cnp.int64_t[::1] cexps = np.ascontiguousarray(exps, dtype=np.int64)
    cdef double complex[::1] cc = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef cnp.int64_t[::1] couts = np.ascontiguousarray(outs, dtype=np.int64)
    cdef double complex[:, ::1] cX = np.ascontiguousarray(X, dtype=np.complex128)

    cdef Py_ssize_t n = cX.shape[0]
    cdef Py_ssize_t T = cc.shape[0]
    Y = np.zeros((n, cod), dtype=np.complex128)
    cdef double complex[:, ::1] cY = Y

    cdef Py_ssize_t t, i, k, e, j
    cdef cnp.int64_t lo, hi
    cdef double complex mono, base
    with nogil:
        for i in range(n):
            for t in range(T):
                lo = cptr[t]
                hi = cptr[t + 1]
                mono = cc[t]
                for k in range(lo, hi):
                    base = cX[i, cvars[k]]
                    e = cexps[k]
                    if e == 1:
                        mono = mono * base
                    else:
                        for j in range(e):
                            mono = mono * base
                cY[i, couts[t]] = cY[i, couts[t]] + mono
    return Y


def abs_pow_sum(Y, double p):
    cdef double complex[:, ::1] cY = np.ascontiguousarray(Y, dtype=np.complex128)
    cdef Py_ssize_t n = cY.shape[0]
    cdef Py_ssize_t d = cY.shape[1]
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] co = out
    cdef Py_ssize_t i, j
    cdef double a, s
    with nogil:
        for i in range(n):
            s = 0.0
            for j in range(d):
                a = abs(cY[i, j])
                s += a ** p
            co[i] = s
    return out
