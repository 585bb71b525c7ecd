"""Pauli-sum Hamiltonians, the XXZ chain, exact diagonalization and the
XXZ phase-boundary curves."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import linalg

from . import kernels
from .errors import (
    ConfigurationError,
    DomainError,
    NumericalError,
    ResourceError,
    StructuralError,
)
from .state import StateVector, pauli_masks

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

EXACT_MAX_QUBITS = 14


@dataclass(frozen=True)
class PauliString:
    """``ops[q]`` is the symbol acting on qubit ``q`` (qubit 0 = LSB)."""

    ops: str
    coefficient: float

    def __post_init__(self):
        if any(c not in "IXYZ" for c in self.ops):
            raise StructuralError(f"bad Pauli string {self.ops!r}")
        if not math.isfinite(self.coefficient):
            raise NumericalError(f"non-finite coefficient on {self.ops}")

    @classmethod
    def from_sites(cls, n: int, sites: dict[int, str], coefficient: float) -> PauliString:
        ops = ["I"] * n
        for q, s in sites.items():
            ops[q] = s
        return cls("".join(ops), float(coefficient))

    @property
    def n_qubits(self) -> int:
        return len(self.ops)

    def masks(self) -> tuple[int, int, complex]:
        return pauli_masks({q: s for q, s in enumerate(self.ops) if s != "I"})

    def label(self) -> str:
        return " ".join(f"{s}{q}" for q, s in enumerate(self.ops) if s != "I") or "I"


@dataclass
class PauliSum:
    n_qubits: int
    terms: list[PauliString] = field(default_factory=list)

    def __post_init__(self):
        for t in self.terms:
            if t.n_qubits != self.n_qubits:
                raise StructuralError(
                    f"term {t.ops} has {t.n_qubits} sites, sum has {self.n_qubits}"
                )
        self._packed = None

    def __add__(self, other: PauliSum) -> PauliSum:
        if other.n_qubits != self.n_qubits:
            raise StructuralError("cannot add Pauli sums over different qubit counts")
        return PauliSum(self.n_qubits, list(self.terms) + list(other.terms))

    def __len__(self):
        return len(self.terms)

    def packed(self):
        """Kernel arrays ``(xmasks, zmasks, coeffs)``, with Y phases folded in."""
        if self._packed is None:
            xs, zs, cs = [], [], []
            for t in self.terms:
                x, z, ph = t.masks()
                xs.append(x)
                zs.append(z)
                cs.append(ph * t.coefficient)
            self._packed = (
                np.array(xs, dtype=np.int64),
                np.array(zs, dtype=np.int64),
                np.array(cs, dtype=np.complex128),
            )
        return self._packed

    def to_dense(self) -> np.ndarray:
        """Dense matrix built from Kronecker products (qubit 0 rightmost)."""
        dim = 1 << self.n_qubits
        mat = np.zeros((dim, dim), dtype=complex)
        for t in self.terms:
            m = np.array([[1.0 + 0j]])
            for s in reversed(t.ops):
                m = np.kron(m, _PAULI[s])
            mat += t.coefficient * m
        return mat


@dataclass(frozen=True)
class HamiltonianFamily:
    """A rule turning a point of Hamiltonian parameters into a PauliSum."""

    n_qubits: int
    parameter_names: tuple[str, ...]
    build: Callable[[Sequence[float]], PauliSum]
    # hashable identity used to cache exact solutions; None disables caching
    cache_key: tuple | None = None

    def __post_init__(self):
        if len(self.parameter_names) < 1:
            raise ConfigurationError("a Hamiltonian family needs at least one parameter")

    @property
    def dim(self) -> int:
        return len(self.parameter_names)

    def __call__(self, point) -> PauliSum:
        point = np.atleast_1d(np.asarray(point, dtype=float))
        if point.shape != (self.dim,):
            raise StructuralError(
                f"expected {self.dim} parameter(s) {self.parameter_names}, got {point.shape}"
            )
        return self.build(point)


def build_xxz(n: int, delta: float, lam: float) -> PauliSum:
    """Periodic XXZ chain ``sum_i (XX + YY + delta ZZ) + lam sum_i Z``.

    Terms are ordered bond by bond (XX, YY, ZZ) and then the n field terms;
    zero coefficients are kept so term counts never depend on parameters.
    """
    if int(n) != n or n < 3:
        raise ConfigurationError(f"XXZ chain needs n >= 3 for distinct periodic bonds, got {n}")
    n = int(n)
    terms = []
    for i in range(n):
        j = (i + 1) % n
        terms.append(PauliString.from_sites(n, {i: "X", j: "X"}, 1.0))
        terms.append(PauliString.from_sites(n, {i: "Y", j: "Y"}, 1.0))
        terms.append(PauliString.from_sites(n, {i: "Z", j: "Z"}, delta))
    for i in range(n):
        terms.append(PauliString.from_sites(n, {i: "Z"}, lam))
    return PauliSum(n, terms)


def xxz_family(n: int, lam: float | None = 0.75) -> HamiltonianFamily:
    """One-parameter family in delta at fixed field, or the (delta, lambda)
    family when ``lam`` is None."""
    if lam is None:
        return HamiltonianFamily(n, ("delta", "lambda"), lambda p: build_xxz(n, p[0], p[1]),
                                 ("xxz", n, None))
    lam = float(lam)
    return HamiltonianFamily(n, ("delta",), lambda p: build_xxz(n, p[0], lam), ("xxz", n, lam))


def _check(state: StateVector, h: PauliSum):
    if state.n_qubits != h.n_qubits:
        raise StructuralError(
            f"{state.n_qubits}-qubit state vs {h.n_qubits}-qubit Hamiltonian"
        )


def apply_pauli_sum(state: StateVector, h: PauliSum) -> StateVector:
    """Return ``H|psi>`` (not normalized); the input is left untouched."""
    _check(state, h)
    x, z, c = h.packed()
    return StateVector(state.n_qubits, kernels.apply_pauli_sum(state.amplitudes, x, z, c))


def _real(value: complex, what: str) -> float:
    if abs(value.imag) > 1e-8:
        raise NumericalError(f"{what} has imaginary part {value.imag:.3e}")
    return float(value.real)


def expectation(state: StateVector, h: PauliSum) -> float:
    hpsi = apply_pauli_sum(state, h)
    return _real(complex(np.vdot(state.amplitudes, hpsi.amplitudes)), "<H>")


def variance(state: StateVector, h: PauliSum) -> float:
    hpsi = apply_pauli_sum(state, h).amplitudes
    mean = _real(complex(np.vdot(state.amplitudes, hpsi)), "<H>")
    var = float(np.vdot(hpsi, hpsi).real) - mean * mean
    return max(var, 0.0)


def exact_ground_state(h: PauliSum) -> tuple[float, StateVector]:
    energy, vecs, _ = exact_spectrum_low(h)
    return energy, StateVector(h.n_qubits, vecs[:, 0].copy())


def exact_spectrum_low(h: PauliSum, degeneracy_tol: float = 1e-8):
    """Ground energy, the orthonormal ground-space basis (columns) and all
    eigenvalues of the dense matrix."""
    if h.n_qubits > EXACT_MAX_QUBITS:
        raise ResourceError(
            f"dense diagonalization is capped at {EXACT_MAX_QUBITS} qubits, got {h.n_qubits}"
        )
    evals, evecs = linalg.eigh(h.to_dense())
    e0 = float(evals[0])
    k = int(np.searchsorted(evals, e0 + degeneracy_tol, side="right"))
    return e0, np.ascontiguousarray(evecs[:, :k]), evals


@lru_cache(maxsize=8192)
def _xxz_ground_cached(n: int, delta: float, lam: float):
    e0, space, _ = exact_spectrum_low(build_xxz(n, delta, lam))
    space.flags.writeable = False
    return e0, space


def xxz_ground(n: int, delta: float, lam: float):
    """Cached ``(E0, ground-space basis)`` for the XXZ chain."""
    return _xxz_ground_cached(int(n), float(delta), float(lam))


def phase_boundary_hs(delta: float) -> float:
    """Saturation field separating the XY and ferromagnetic phases."""
    d = 1.0
    return d * (1.0 + delta)


def phase_boundary_hc(delta: float, tol: float = 1e-13) -> float:
    """Critical field separating the antiferromagnetic and XY phases.

    Defined for ``delta >= 1``; the sum over the sech series is grown
    symmetrically until the next pair of terms is below ``tol``.
    """
    if delta < 1.0:
        raise DomainError(f"hc is defined for delta >= 1, got {delta}")
    if delta == 1.0:
        return 0.0
    # arccosh(delta), kept apart from the transverse field lambda
    gamma = math.acosh(delta)
    arg = math.pi ** 2 / (2.0 * gamma)

    def sech(x):
        x = abs(x)
        return 0.0 if x > 700 else 1.0 / math.cosh(x)

    total = sech(arg)  # n = 0
    k = 1
    while True:
        pair = sech(arg * (1 + 2 * k)) + sech(arg * (1 - 2 * k))
        total += pair
        if pair < tol:
            break
        k += 1
    return math.pi * math.sinh(gamma) / gamma * total


def field_crossings(lam: float, lo: float = -4.0, hi: float = 4.0) -> list[float]:
    """Delta values where the field line ``lam`` crosses hs and hc."""
    from scipy.optimize import brentq

    out = []
    d_hs = lam - 1.0
    if lo <= d_hs <= hi:
        out.append(d_hs)
    f = lambda d: phase_boundary_hc(d) - lam
    a = 1.0 + 1e-9
    if f(a) < 0 < f(hi):
        out.append(float(brentq(f, a, hi, xtol=1e-12)))
    return out
