"""Pure numpy implementation of the statevector kernels.

Every gate and every Hamiltonian term is a Pauli string encoded by three
numbers: ``xmask`` (bits flipped by X or Y), ``zmask`` (bits picking up a
sign from Z or Y) and ``yphase`` = i**(number of Y factors).  With that
encoding ``P|k> = yphase * (-1)**popcount(k & zmask) |k ^ xmask>``.

Mirrors ``_ckernels.pyx`` function for function; arrays are modified in
place where the compiled version does.
"""
from functools import lru_cache

import numpy as np

BACKEND = "python"


@lru_cache(maxsize=64)
def _index(dim):
    idx = np.arange(dim, dtype=np.int64)
    idx.flags.writeable = False
    return idx


@lru_cache(maxsize=4096)
def _signs(dim, zmask):
    s = 1.0 - 2.0 * (np.bitwise_count(_index(dim) & zmask) & 1)
    s.flags.writeable = False
    return s


def _pauli_apply(psi, xmask, zmask, yphase):
    dim = psi.shape[0]
    idx = _index(dim)
    src = idx ^ xmask
    return (yphase * _signs(dim, zmask)[src]) * psi[src]


def pauli_rotation(psi, xmask, zmask, yphase, theta):
    c = np.cos(0.5 * theta)
    s = np.sin(0.5 * theta)
    if xmask == 0:
        psi *= c - 1j * s * (yphase * _signs(psi.shape[0], zmask))
        return
    ppsi = _pauli_apply(psi, xmask, zmask, yphase)
    psi *= c
    psi += (-1j * s) * ppsi


def run_gates(psi, xmasks, zmasks, yphases, slots, theta, sign):
    for g in range(xmasks.shape[0]):
        pauli_rotation(psi, int(xmasks[g]), int(zmasks[g]), yphases[g],
                       sign * theta[slots[g]])


def apply_pauli_sum(psi, xmasks, zmasks, coeffs):
    out = np.zeros_like(psi)
    diag = None
    for t in range(xmasks.shape[0]):
        x = int(xmasks[t])
        if x == 0:
            term = coeffs[t] * _signs(psi.shape[0], int(zmasks[t]))
            diag = term if diag is None else diag + term
        else:
            out += _pauli_apply(psi, x, int(zmasks[t]), coeffs[t])
    if diag is not None:
        out += diag * psi
    return out


def adjoint_sweep(psi, lam, xmasks, zmasks, yphases, slots, theta, grad):
    for g in range(xmasks.shape[0] - 1, -1, -1):
        x = int(xmasks[g])
        z = int(zmasks[g])
        ppsi = _pauli_apply(psi, x, z, yphases[g])
        grad[slots[g]] = np.vdot(lam, ppsi).imag
        t = -theta[slots[g]]
        pauli_rotation(psi, x, z, yphases[g], t)
        pauli_rotation(lam, x, z, yphases[g], t)
