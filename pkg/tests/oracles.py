"""Dense-matrix reference implementations used only by the tests.

Everything here is built from Kronecker products and scipy's expm, with no
code shared with the package's kernels.  Qubit 0 is the rightmost factor,
matching the least-significant-bit convention.
"""
import numpy as np
from scipy.linalg import expm

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}


def embed(n, ops):
    """Dense operator for ``{qubit: 2x2 matrix}`` on ``n`` qubits."""
    out = np.array([[1.0 + 0j]])
    for q in reversed(range(n)):
        out = np.kron(out, ops.get(q, I2))
    return out


def gate_matrix(n, kind, qubits, theta):
    p = PAULI[kind[1]]
    gen = embed(n, {q: p for q in qubits})
    return expm(-0.5j * theta * gen)


def xxz_dense(n, delta, lam):
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for i in range(n):
        j = (i + 1) % n
        h += embed(n, {i: X, j: X}) + embed(n, {i: Y, j: Y}) + delta * embed(n, {i: Z, j: Z})
        h += lam * embed(n, {i: Z})
    return h


def circuit_dense(circuit, theta):
    n = circuit.n_qubits
    u = np.eye(2 ** n, dtype=complex)
    for g in circuit.gates:
        u = gate_matrix(n, g.kind.value, g.qubits, theta[g.param_slot]) @ u
    return u


def random_state(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def central_difference(f, x, step):
    x = np.array(x, dtype=float)
    g = np.empty_like(x)
    for k in range(x.size):
        xp, xm = x.copy(), x.copy()
        xp[k] += step
        xm[k] -= step
        g[k] = (f(xp) - f(xm)) / (2 * step)
    return g


def power_iteration_ground(h, iters=20000, seed=0):
    """Lowest eigenvalue of Hermitian ``h`` by power iteration on (c I - h)."""
    c = np.abs(h).sum(axis=1).max()
    shifted = c * np.eye(h.shape[0]) - h
    rng = np.random.default_rng(seed)
    v = random_state(rng, h.shape[0])
    for _ in range(iters):
        v = shifted @ v
        v /= np.linalg.norm(v)
    return float(np.vdot(v, h @ v).real), v
