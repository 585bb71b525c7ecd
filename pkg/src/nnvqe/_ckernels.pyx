# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled statevector kernels; same contract as ``_pykernels``."""
from libc.math cimport cos, sin

import numpy as np

BACKEND = "cython"

cdef extern from *:
    int __builtin_parityll(unsigned long long) nogil


cdef inline double _sign(long long k, long long zmask) noexcept nogil:
    return -1.0 if __builtin_parityll(<unsigned long long>(k & zmask)) else 1.0


cdef void _rotate(double complex[::1] psi, long long xmask, long long zmask,
                  double complex yphase, double theta) noexcept nogil:
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t i, j
    cdef double c = cos(0.5 * theta)
    cdef double s = sin(0.5 * theta)
    cdef double complex mis = -1j * s * yphase
    cdef double complex a, b
    if xmask == 0:
        for i in range(dim):
            psi[i] = psi[i] * (c + mis * _sign(i, zmask))
        return
    for i in range(dim):
        j = i ^ xmask
        if j > i:
            a = psi[i]
            b = psi[j]
            psi[i] = c * a + mis * _sign(j, zmask) * b
            psi[j] = c * b + mis * _sign(i, zmask) * a


def pauli_rotation(double complex[::1] psi, long long xmask, long long zmask,
                   double complex yphase, double theta):
    with nogil:
        _rotate(psi, xmask, zmask, yphase, theta)


def run_gates(double complex[::1] psi, const long long[::1] xmasks,
              const long long[::1] zmasks, const double complex[::1] yphases,
              const long long[::1] slots, const double[::1] theta, double sign):
    cdef Py_ssize_t g
    with nogil:
        for g in range(xmasks.shape[0]):
            _rotate(psi, xmasks[g], zmasks[g], yphases[g], sign * theta[slots[g]])


def apply_pauli_sum(double complex[::1] psi, const long long[::1] xmasks,
                    const long long[::1] zmasks, const double complex[::1] coeffs):
    cdef Py_ssize_t dim = psi.shape[0]
    out_arr = np.zeros(dim, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t t, i
    cdef long long x, z
    cdef double complex c
    with nogil:
        for t in range(xmasks.shape[0]):
            x = xmasks[t]
            z = zmasks[t]
            c = coeffs[t]
            for i in range(dim):
                out[i] = out[i] + c * _sign(i ^ x, z) * psi[i ^ x]
    return out_arr


def adjoint_sweep(double complex[::1] psi, double complex[::1] lam,
                  const long long[::1] xmasks, const long long[::1] zmasks,
                  const double complex[::1] yphases, const long long[::1] slots,
                  const double[::1] theta, double[::1] grad):
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t g, i
    cdef long long x, z
    cdef double complex acc, ph
    with nogil:
        for g in range(xmasks.shape[0] - 1, -1, -1):
            x = xmasks[g]
            z = zmasks[g]
            ph = yphases[g]
            acc = 0
            for i in range(dim):
                acc = acc + lam[i].conjugate() * _sign(i ^ x, z) * psi[i ^ x]
            grad[slots[g]] = (ph * acc).imag
            _rotate(psi, x, z, ph, -theta[slots[g]])
            _rotate(lam, x, z, ph, -theta[slots[g]])
