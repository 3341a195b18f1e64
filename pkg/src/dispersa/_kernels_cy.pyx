# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementation of the dense O(n^2) singular-integral kernels."""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()

BACKEND = "cython"


def stein_apply(const double complex[::1] values, const double[::1] weights, double step):
    cdef Py_ssize_t n = values.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] ov = out
    cdef double wsum = 0.0
    cdef double complex acc
    cdef Py_ssize_t j, m, idx
    for m in range(n):
        wsum += weights[m]
    for j in range(n):
        acc = 0.0
        for m in range(1, n):
            idx = j + m
            if idx >= n:
                idx -= n
            acc = acc + weights[m] * values[idx]
        ov[j] = step * (acc - wsum * values[j])
    return out


def phi_apply(const double complex[::1] values, const double[::1] symbol, double t,
              const double[::1] weights, double step):
    cdef Py_ssize_t n = values.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] ov = out
    cdef double complex acc, phase
    cdef double sj, theta
    cdef Py_ssize_t j, m, idx
    for j in range(n):
        acc = 0.0
        sj = symbol[j]
        for m in range(1, n):
            idx = j + m
            if idx >= n:
                idx -= n
            theta = t * (symbol[idx] - sj)
            phase = (cos(theta) - 1.0) + 1j * sin(theta)
            acc = acc + weights[m] * phase * values[idx]
        ov[j] = step * acc
    return out
