"""Ladder hardware-efficient ansatz and MERA-style circuits.

A circuit is a flat, time-ordered gate list; gate ``k`` reads angle
``theta[gate.param_slot]``.  Builders hand out slots in time order, so
slot ``k`` is simply the ``k``-th gate applied.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConfigurationError, StructuralError
from .state import MAX_QUBITS, Gate, GateKind, StateVector

RX, RZ, RXX, RYY, RZZ = GateKind.RX, GateKind.RZ, GateKind.RXX, GateKind.RYY, GateKind.RZZ


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...]
    n_params: int
    name: str = ""
    _packed: tuple = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.qubits) >= self.n_qubits:
                raise StructuralError(f"{g} references a qubit outside 0..{self.n_qubits - 1}")
            if g.param_slot >= self.n_params:
                raise StructuralError(f"{g} uses slot {g.param_slot} >= n_params={self.n_params}")

    def packed(self):
        """``(xmasks, zmasks, yphases, slots)`` arrays for the kernels."""
        if self._packed is None:
            masks = [g.masks() for g in self.gates]
            packed = (
                np.array([m[0] for m in masks], dtype=np.int64),
                np.array([m[1] for m in masks], dtype=np.int64),
                np.array([m[2] for m in masks], dtype=np.complex128),
                np.array([g.param_slot for g in self.gates], dtype=np.int64),
            )
            object.__setattr__(self, "_packed", packed)
        return self._packed

    def describe(self) -> str:
        """Plain-text gate listing, one gate per line."""
        lines = [f"# {self.name or 'circuit'}: n_qubits={self.n_qubits} "
                 f"n_gates={len(self.gates)} n_params={self.n_params}",
                 "index,kind,qubits,slot"]
        for k, g in enumerate(self.gates):
            lines.append(f"{k},{g.kind.value},{'-'.join(map(str, g.qubits))},{g.param_slot}")
        return "\n".join(lines) + "\n"


class _Builder:
    def __init__(self, n):
        self.n = n
        self.gates = []

    def add(self, kind, *qubits):
        self.gates.append(Gate(kind, qubits, len(self.gates)))

    def initial_layer(self):
        # R'_1 = Rx Rz Rx on each qubit
        for q in range(self.n):
            self.add(RX, q)
            self.add(RZ, q)
            self.add(RX, q)

    def singles(self, qubits):
        # R_1 = Rz Rx: Rx acts first
        for q in qubits:
            self.add(RX, q)
            self.add(RZ, q)

    def circuit(self, name):
        return Circuit(self.n, tuple(self.gates), len(self.gates), name)


def _check_depth(depth):
    if int(depth) != depth or depth < 1:
        raise ConfigurationError(f"depth must be a positive integer, got {depth}")
    return int(depth)


def build_hea(n: int, depth: int) -> Circuit:
    """Ladder HEA with ``3n + 5n*depth`` parameters."""
    if int(n) != n or not 3 <= n <= MAX_QUBITS:
        raise ConfigurationError(f"HEA needs 3 <= n <= {MAX_QUBITS}, got {n}")
    n, depth = int(n), _check_depth(depth)
    b = _Builder(n)
    b.initial_layer()
    for _ in range(depth):
        b.singles(range(n))
        for i in range(n):
            j = (i + 1) % n
            # R_2 = Ryy Rxx Rzz: Rzz acts first
            b.add(RZZ, i, j)
            b.add(RXX, i, j)
            b.add(RYY, i, j)
    return b.circuit(f"hea(n={n},D={depth})")


def mera_active_qubits(n: int, m: int) -> list[int]:
    """Qubits touched by the expansion layer with ``m`` active sites.

    Fresh qubits are interleaved between the existing ones, so the active
    set at each scale is every ``n // m``-th qubit.
    """
    step = n // m
    return list(range(0, n, step))


def build_mera(n: int, depth: int) -> Circuit:
    """MERA circuit; for n=8 it has ``24 + 50*depth`` parameters."""
    if n not in (4, 8):
        raise ConfigurationError(f"MERA is built for n in (4, 8), got {n}")
    depth = _check_depth(depth)
    b = _Builder(n)
    b.initial_layer()
    m = 2
    while m <= n:
        active = mera_active_qubits(n, m)
        pairs = [(active[k], active[k + 1]) for k in range(m - 1)]
        ordered = pairs[0::2] + pairs[1::2]
        for _ in range(depth):
            b.singles(active)
            for a, c in ordered:
                # R_2 = Rzz Rxx: Rxx acts first
                b.add(RXX, a, c)
                b.add(RZZ, a, c)
        m *= 2
    return b.circuit(f"mera(n={n},D={depth})")


def build_ansatz(family: str, n: int, depth: int) -> Circuit:
    family = family.lower()
    if family == "hea":
        return build_hea(n, depth)
    if family == "mera":
        return build_mera(n, depth)
    raise ConfigurationError(f"unknown ansatz family {family!r} (expected 'hea' or 'mera')")


def _theta_array(c: Circuit, theta) -> np.ndarray:
    theta = np.ascontiguousarray(theta, dtype=np.float64)
    if theta.shape != (c.n_params,):
        raise StructuralError(f"theta has shape {theta.shape}, circuit needs ({c.n_params},)")
    return theta


def evaluate_circuit(c: Circuit, theta) -> StateVector:
    """Return ``U(theta)|0...0>``."""
    theta = _theta_array(c, theta)
    amps = np.zeros(1 << c.n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    x, z, ph, slots = c.packed()
    kernels.run_gates(amps, x, z, ph, slots, theta, 1.0)
    return StateVector(c.n_qubits, amps)
