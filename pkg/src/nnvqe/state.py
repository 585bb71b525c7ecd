"""Dense statevector and rotation gates.

Qubit 0 is the least-significant bit of the basis index, so ``|100>`` in
the usual left-to-right ket notation of qubits (2, 1, 0) is index 4.

Gates are ``exp(-i * angle * G / 2)`` with ``G`` one of X, Z, XX, YY, ZZ.
``apply_gate`` mutates ``state.amplitudes`` in place and returns the same
object; copy first if the input must survive.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .errors import ConfigurationError, StructuralError

MIN_QUBITS = 3
MAX_QUBITS = 14


class GateKind(str, Enum):
    RX = "RX"
    RZ = "RZ"
    RXX = "RXX"
    RYY = "RYY"
    RZZ = "RZZ"

    @property
    def arity(self) -> int:
        return 1 if self in (GateKind.RX, GateKind.RZ) else 2

    @property
    def pauli(self) -> str:
        return self.value[1:2]


def pauli_masks(ops: dict[int, str]) -> tuple[int, int, complex]:
    """Encode ``{qubit: 'X'|'Y'|'Z'}`` as ``(xmask, zmask, i**n_y)``."""
    xmask = zmask = 0
    n_y = 0
    for q, op in ops.items():
        bit = 1 << q
        if op == "X":
            xmask |= bit
        elif op == "Z":
            zmask |= bit
        elif op == "Y":
            xmask |= bit
            zmask |= bit
            n_y += 1
        elif op != "I":
            raise StructuralError(f"unknown Pauli symbol {op!r}")
    return xmask, zmask, 1j ** n_y


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]
    param_slot: int

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(self.qubits) != self.kind.arity:
            raise StructuralError(
                f"{self.kind.value} acts on {self.kind.arity} qubit(s), got {self.qubits}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise StructuralError(f"repeated qubit in {self.qubits}")
        if min(self.qubits) < 0 or self.param_slot < 0:
            raise StructuralError("qubit indices and slots must be non-negative")

    def masks(self) -> tuple[int, int, complex]:
        return pauli_masks({q: self.kind.pauli for q in self.qubits})


@dataclass(eq=False)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise StructuralError(
                f"expected {1 << self.n_qubits} amplitudes for {self.n_qubits} qubits, "
                f"got shape {self.amplitudes.shape}"
            )

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def copy(self) -> StateVector:
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def check_qubit_count(n: int, lo: int = MIN_QUBITS, hi: int = MAX_QUBITS) -> int:
    if int(n) != n or not lo <= n <= hi:
        raise ConfigurationError(f"qubit count must be an integer in [{lo}, {hi}], got {n}")
    return int(n)


def new_zero_state(n: int) -> StateVector:
    n = check_qubit_count(n)
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n, amps)


def apply_gate(state: StateVector, gate: Gate, angle: float) -> StateVector:
    if max(gate.qubits) >= state.n_qubits:
        raise StructuralError(
            f"gate on qubits {gate.qubits} does not fit a {state.n_qubits}-qubit state"
        )
    x, z, ph = gate.masks()
    kernels.pauli_rotation(state.amplitudes, x, z, ph, float(angle))
    return state


def inner_product(a: StateVector, b: StateVector) -> complex:
    """Return <a|b>, conjugating ``a``."""
    if a.n_qubits != b.n_qubits:
        raise StructuralError(f"cannot contract {a.n_qubits}- and {b.n_qubits}-qubit states")
    return complex(np.vdot(a.amplitudes, b.amplitudes))
