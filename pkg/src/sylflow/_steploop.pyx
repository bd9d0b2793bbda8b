# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled per-step propagation loop.

Iterates the affine map x <- R x + s with one BLAS dgemv per step, writing
the state at the requested sample steps and reporting the first sample whose
state exceeds the guard (max-abs) or goes non-finite. Same contract as the
pure-NumPy fallback in ``_steploop_py``.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, isfinite
from scipy.linalg.cython_blas cimport dcopy, dgemv

cnp.import_array()


def run(double[:, ::1] R, double[::1] s, double[::1] x0,
        long long n_steps, long long[::1] sample_steps, double guard):
    cdef int d = R.shape[0]
    cdef Py_ssize_t n_samp = sample_steps.shape[0]
    out_arr = np.empty((n_samp, d), dtype=np.float64)
    xa_arr = np.array(x0, dtype=np.float64, copy=True)
    xb_arr = np.empty(d, dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double[::1] xa = xa_arr
    cdef double[::1] xb = xb_arr
    cdef double[::1] tmp
    cdef int inc = 1
    cdef double one = 1.0
    cdef Py_ssize_t si = 0
    cdef long long step
    cdef int j

    if sample_steps[0] == 0:
        for j in range(d):
            out[0, j] = xa[j]
        if _tripped(xa, guard):
            return out_arr, 0
        si = 1

    for step in range(1, n_steps + 1):
        # xb := s, then xb := R @ xa + xb. R is C-contiguous, i.e. its memory
        # is the column-major layout of R.T, so trans='T' makes dgemv apply R.
        dcopy(&d, &s[0], &inc, &xb[0], &inc)
        dgemv("T", &d, &d, &one, &R[0, 0], &d, &xa[0], &inc, &one, &xb[0], &inc)
        tmp = xa
        xa = xb
        xb = tmp
        if si < n_samp and step == sample_steps[si]:
            for j in range(d):
                out[si, j] = xa[j]
            if _tripped(xa, guard):
                return out_arr, si
            si += 1

    return out_arr, -1


cdef inline bint _tripped(double[::1] x, double guard) noexcept:
    cdef Py_ssize_t j
    cdef double v
    for j in range(x.shape[0]):
        v = x[j]
        if not isfinite(v) or fabs(v) > guard:
            return True
    return False
