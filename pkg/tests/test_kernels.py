"""The compiled and numpy backends must agree on every kernel."""
import numpy as np
import pytest

from nnvqe import _pykernels, build_hea, build_mera, build_xxz, kernels
from oracles import random_state

try:
    from nnvqe import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


@needs_ext
@pytest.mark.parametrize("xmask,zmask,yphase", [(0, 5, 1), (3, 0, 1), (3, 3, -1), (1, 0, 1),
                                               (6, 6, -1), (2, 2, 1j)])
def test_rotation_agrees(rng, xmask, zmask, yphase):
    psi = random_state(rng, 8)
    a, b = psi.copy(), psi.copy()
    _pykernels.pauli_rotation(a, xmask, zmask, complex(yphase), 0.37)
    _ckernels.pauli_rotation(b, xmask, zmask, complex(yphase), 0.37)
    np.testing.assert_allclose(a, b, atol=1e-14)


@needs_ext
@pytest.mark.parametrize("circuit", [build_hea(4, 2), build_mera(8, 1)], ids=["hea", "mera"])
def test_run_and_adjoint_agree(rng, circuit):
    n = circuit.n_qubits
    theta = rng.uniform(-np.pi, np.pi, circuit.n_params)
    x, z, ph, slots = circuit.packed()
    hx, hz, hc = build_xxz(n, 0.3, 0.6).packed()
    out = {}
    for mod in (_pykernels, _ckernels):
        psi = np.zeros(2 ** n, complex)
        psi[0] = 1
        mod.run_gates(psi, x, z, ph, slots, theta, 1.0)
        lam = mod.apply_pauli_sum(psi, hx, hz, hc)
        grad = np.zeros(circuit.n_params)
        final = psi.copy()
        mod.adjoint_sweep(psi, lam, x, z, ph, slots, theta, grad)
        out[mod.BACKEND] = (final, lam, grad, psi)
    for a, b in zip(out["python"], out["cython"]):
        np.testing.assert_allclose(a, b, atol=1e-12)
