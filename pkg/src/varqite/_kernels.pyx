# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled statevector kernels; same contract as the pure-python module."""

from libc.math cimport cos, sin

import numpy as np

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

NAME = "cython"


def apply_1q(const double complex[::1] amps, int n, int q,
             double complex m00, double complex m01,
             double complex m10, double complex m11):
    cdef Py_ssize_t dim = amps.shape[0]
    cdef int pos = n - 1 - q
    cdef Py_ssize_t tbit = (<Py_ssize_t>1) << pos
    out = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t g, i0, i1
    cdef double complex a0, a1
    for g in range(dim >> 1):
        i0 = ((g >> pos) << (pos + 1)) | (g & (tbit - 1))
        i1 = i0 | tbit
        a0 = amps[i0]
        a1 = amps[i1]
        o[i0] = m00 * a0 + m01 * a1
        o[i1] = m10 * a0 + m11 * a1
    return out


def apply_ctrl_1q(const double complex[::1] amps, int n, int control, int target,
                  double complex m00, double complex m01,
                  double complex m10, double complex m11):
    cdef Py_ssize_t dim = amps.shape[0]
    cdef int cpos = n - 1 - control
    cdef int tpos = n - 1 - target
    cdef Py_ssize_t cbit = (<Py_ssize_t>1) << cpos
    cdef Py_ssize_t tbit = (<Py_ssize_t>1) << tpos
    cdef int lo = cpos if cpos < tpos else tpos
    cdef int hi = cpos if cpos > tpos else tpos
    out = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t g, i, i0, i1
    cdef double complex a0, a1
    for g in range(dim >> 2):
        # insert zero bits at the two wire positions, lowest first
        i = ((g >> lo) << (lo + 1)) | (g & (((<Py_ssize_t>1) << lo) - 1))
        i = ((i >> hi) << (hi + 1)) | (i & (((<Py_ssize_t>1) << hi) - 1))
        o[i] = amps[i]                    # control 0, target 0
        o[i | tbit] = amps[i | tbit]      # control 0, target 1
        i0 = i | cbit
        i1 = i0 | tbit
        a0 = amps[i0]
        a1 = amps[i1]
        o[i0] = m00 * a0 + m01 * a1
        o[i1] = m10 * a0 + m11 * a1
    return out


def apply_pauli(const double complex[::1] amps, int n,
                unsigned long long x_mask, unsigned long long z_mask,
                double complex prefactor):
    cdef Py_ssize_t dim = amps.shape[0]
    out = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t i
    for i in range(dim):
        if __builtin_popcountll((<unsigned long long>i) & z_mask) & 1:
            o[i ^ <Py_ssize_t>x_mask] = -prefactor * amps[i]
        else:
            o[i ^ <Py_ssize_t>x_mask] = prefactor * amps[i]
    return out


def apply_ctrl_pauli(const double complex[::1] amps, int n,
                     unsigned long long control_mask,
                     unsigned long long x_mask, unsigned long long z_mask,
                     double complex prefactor):
    cdef Py_ssize_t dim = amps.shape[0]
    out = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t i
    for i in range(dim):
        if (<unsigned long long>i) & control_mask:
            if __builtin_popcountll((<unsigned long long>i) & z_mask) & 1:
                o[i ^ <Py_ssize_t>x_mask] = -prefactor * amps[i]
            else:
                o[i ^ <Py_ssize_t>x_mask] = prefactor * amps[i]
        else:
            o[i] = amps[i]
    return out


def apply_pauli_exp(const double complex[::1] amps, int n,
                    unsigned long long x_mask, unsigned long long z_mask,
                    double complex prefactor, double theta):
    cdef Py_ssize_t dim = amps.shape[0]
    cdef double complex c = cos(theta)
    cdef double complex js = 1j * sin(theta)
    out = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t i, j
    cdef double complex ph_i, ph_j
    if x_mask == 0:
        for i in range(dim):
            if __builtin_popcountll((<unsigned long long>i) & z_mask) & 1:
                o[i] = (c - js * prefactor) * amps[i]
            else:
                o[i] = (c + js * prefactor) * amps[i]
        return out
    for i in range(dim):
        j = i ^ <Py_ssize_t>x_mask
        if j < i:
            continue
        if __builtin_popcountll((<unsigned long long>i) & z_mask) & 1:
            ph_i = -prefactor
        else:
            ph_i = prefactor
        if __builtin_popcountll((<unsigned long long>j) & z_mask) & 1:
            ph_j = -prefactor
        else:
            ph_j = prefactor
        o[i] = c * amps[i] + js * ph_j * amps[j]
        o[j] = c * amps[j] + js * ph_i * amps[i]
    return out
