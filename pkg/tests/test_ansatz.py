import numpy as np
import pytest

from nnvqe import (
    ConfigurationError,
    StructuralError,
    build_ansatz,
    build_hea,
    build_mera,
    evaluate_circuit,
)
from nnvqe.ansatz import mera_active_qubits
from oracles import circuit_dense

REFERENCE_COUNTS = [("hea", 8, 1, 64), ("hea", 8, 2, 104), ("hea", 12, 1, 96), ("hea", 12, 2, 156),
             ("hea", 12, 3, 216), ("mera", 8, 1, 74), ("mera", 8, 2, 124), ("mera", 8, 3, 174)]


@pytest.mark.parametrize("family,n,depth,count", REFERENCE_COUNTS)
def test_reference_parameter_counts(family, n, depth, count):
    assert build_ansatz(family, n, depth).n_params == count


@pytest.mark.parametrize("n,depth", [(3, 1), (5, 2), (12, 3)])
def test_hea_count_formula(n, depth):
    assert build_hea(n, depth).n_params == 3 * n + 5 * n * depth


@pytest.mark.parametrize("depth", [1, 2, 3, 4])
def test_mera_count_formula(depth):
    assert build_mera(8, depth).n_params == 24 + 50 * depth
    assert build_mera(4, depth).n_params == 12 + 20 * depth


@pytest.mark.parametrize("family,n,depth,count", REFERENCE_COUNTS)
def test_slot_coverage(family, n, depth, count):
    c = build_ansatz(family, n, depth)
    assert sorted(g.param_slot for g in c.gates) == list(range(c.n_params))


def test_builds_are_deterministic():
    assert build_mera(8, 2).gates == build_mera(8, 2).gates
    assert build_hea(6, 2).gates == build_hea(6, 2).gates


def test_hea_layout():
    c = build_hea(4, 1)
    kinds = [g.kind.value for g in c.gates]
    assert kinds[:3] == ["RX", "RZ", "RX"] and c.gates[0].qubits == (0,)
    assert kinds[12:20] == ["RX", "RZ"] * 4
    assert kinds[20:23] == ["RZZ", "RXX", "RYY"]
    assert [g.qubits for g in c.gates[20::3]] == [(0, 1), (1, 2), (2, 3), (3, 0)]


def test_mera_layout():
    assert mera_active_qubits(8, 2) == [0, 4]
    assert mera_active_qubits(8, 4) == [0, 2, 4, 6]
    c = build_mera(8, 1)
    two = [g for g in c.gates if g.kind.arity == 2]
    # per block: m - 1 pairs, each Rxx then Rzz
    assert len(two) == 2 * (1 + 3 + 7)
    layer4 = [g.qubits for g in two[2:8:2]]
    assert layer4 == [(0, 2), (4, 6), (2, 4)]  # even-offset pairs, then odd


def test_bad_arguments():
    with pytest.raises(ConfigurationError):
        build_hea(2, 1)
    with pytest.raises(ConfigurationError):
        build_hea(4, 0)
    with pytest.raises(ConfigurationError):
        build_mera(6, 1)
    with pytest.raises(ConfigurationError):
        build_ansatz("qaoa", 4, 1)


def test_zero_angles_give_zero_state():
    for c in (build_hea(5, 2), build_mera(8, 2)):
        s = evaluate_circuit(c, np.zeros(c.n_params))
        expected = np.zeros(2 ** c.n_qubits)
        expected[0] = 1
        np.testing.assert_array_equal(s.amplitudes, expected)


def test_output_normalized(rng):
    for c in (build_hea(6, 3), build_mera(8, 3)):
        s = evaluate_circuit(c, rng.uniform(-np.pi, np.pi, c.n_params))
        assert abs(s.norm() - 1) < 1e-10


@pytest.mark.parametrize("builder", [lambda: build_hea(4, 1), lambda: build_mera(4, 1)])
def test_matches_dense_circuit(rng, builder):
    c = builder()
    theta = rng.uniform(-np.pi, np.pi, c.n_params)
    ref = circuit_dense(c, theta)[:, 0]
    assert np.max(np.abs(evaluate_circuit(c, theta).amplitudes - ref)) < 1e-11


def test_theta_length_checked():
    c = build_hea(4, 1)
    with pytest.raises(StructuralError):
        evaluate_circuit(c, np.zeros(c.n_params + 1))


def test_describe_lists_every_gate():
    c = build_mera(8, 1)
    lines = c.describe().splitlines()
    assert lines[1] == "index,kind,qubits,slot"
    assert len(lines) == 2 + len(c.gates)
    assert lines[2] == "0,RX,0,0"
