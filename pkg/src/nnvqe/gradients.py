"""Energy gradients with respect to circuit angles.

``adjoint_gradient`` does one forward pass and one reverse sweep that
un-applies gates with negated angles, so memory stays at a few state
vectors no matter how deep the circuit is.  ``finite_difference_gradient``
is the independent check.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .ansatz import Circuit, _theta_array, evaluate_circuit
from .errors import ConfigurationError, NumericalError, StructuralError
from .hamiltonian import PauliSum, expectation


@dataclass
class EnergyGradient:
    energy: float
    d_theta: np.ndarray


def adjoint_gradient(c: Circuit, theta, h: PauliSum) -> EnergyGradient:
    theta = _theta_array(c, theta)
    if h.n_qubits != c.n_qubits:
        raise StructuralError(f"{h.n_qubits}-qubit Hamiltonian vs {c.n_qubits}-qubit circuit")
    x, z, ph, slots = c.packed()
    psi = np.zeros(1 << c.n_qubits, dtype=np.complex128)
    psi[0] = 1.0
    kernels.run_gates(psi, x, z, ph, slots, theta, 1.0)
    hx, hz, hc = h.packed()
    lam = kernels.apply_pauli_sum(psi, hx, hz, hc)
    energy = np.vdot(psi, lam)
    if abs(energy.imag) > 1e-8:
        raise NumericalError(f"<H> has imaginary part {energy.imag:.3e}")
    grad = np.zeros(c.n_params)
    # d<H>/dtheta_k = 2 Re <lam_k| (-i/2) G_k |psi_k> = Im <lam_k|G_k|psi_k>
    kernels.adjoint_sweep(psi, lam, x, z, ph, slots, theta, grad)
    return EnergyGradient(float(energy.real), grad)


def finite_difference_gradient(c: Circuit, theta, h: PauliSum, step: float = 1e-5) -> np.ndarray:
    if not step > 0:
        raise ConfigurationError(f"finite-difference step must be positive, got {step}")
    theta = _theta_array(c, theta)
    grad = np.empty(c.n_params)
    shifted = theta.copy()
    for k in range(c.n_params):
        shifted[k] = theta[k] + step
        e_plus = expectation(evaluate_circuit(c, shifted), h)
        shifted[k] = theta[k] - step
        e_minus = expectation(evaluate_circuit(c, shifted), h)
        shifted[k] = theta[k]
        grad[k] = (e_plus - e_minus) / (2.0 * step)
    return grad
