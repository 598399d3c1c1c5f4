import numpy as np
import pytest

from helpers import random_circuit
from qpe_lab.circuit import Circuit, CircuitOp, build_qpe, circuit_unitary
from qpe_lab.gates import X, Z, standard_gate
from qpe_lab.transpile import (
    equivalent_up_to_phase,
    gate_census,
    is_basis_circuit,
    transpile,
)


def _single(name, qubits, *params):
    width = max(qubits) + 1
    return Circuit(width=width, ops=(CircuitOp(standard_gate(name, *params), tuple(qubits)),))


def test_h_decomposition():
    out = transpile(_single("H", (0,)))
    assert [op.gate.name for op in out.ops] == ["Rz", "SX", "Rz"]
    assert equivalent_up_to_phase(
        circuit_unitary(out), standard_gate("H").matrix, 1e-12
    )


def test_cx_passes_through():
    out = transpile(_single("CX", (0, 1)))
    assert len(out.ops) == 1
    assert out.ops[0].gate.name == "CX"
    assert out.ops[0].qubits == (0, 1)


def test_identity_is_dropped():
    out = transpile(_single("I", (0,)))
    assert len(out.ops) == 0


def test_cp_decomposition():
    out = transpile(_single("CP", (0, 1), np.pi))
    assert len(out.ops) == 5
    cz = np.diag([1.0, 1.0, 1.0, -1.0])
    assert equivalent_up_to_phase(circuit_unitary(out), cz, 1e-12)


def test_swap_decomposition():
    out = transpile(_single("SWAP", (0, 1)))
    assert [op.gate.name for op in out.ops] == ["CX", "CX", "CX"]
    assert [op.qubits for op in out.ops] == [(0, 1), (1, 0), (0, 1)]
    assert equivalent_up_to_phase(
        circuit_unitary(out), standard_gate("SWAP").matrix, 1e-12
    )


def test_unknown_gate_rejected():
    with pytest.raises(ValueError, match="no decomposition"):
        transpile(_single("Y", (0,)))


def test_transpile_preserves_unitary_random_circuits():
    rng = np.random.default_rng(17)
    for _ in range(12):
        width = int(rng.integers(2, 5))
        c = random_circuit(width, int(rng.integers(3, 12)), rng)
        t = transpile(c)
        assert is_basis_circuit(t)
        assert equivalent_up_to_phase(circuit_unitary(t), circuit_unitary(c), 1e-10)


@pytest.mark.parametrize("n,theta", [(1, 0.5), (2, 0.25), (3, 0.7), (4, 0.3), (7, 0.11)])
def test_transpile_preserves_qpe_unitary(n, theta):
    c = build_qpe(n, theta)
    t = transpile(c)
    assert equivalent_up_to_phase(circuit_unitary(t), circuit_unitary(c), 1e-10)


def test_transpile_deterministic():
    c = build_qpe(3, 0.2)
    a = transpile(c)
    b = transpile(c)
    assert [(op.gate.name, op.qubits, op.gate.params) for op in a.ops] == [
        (op.gate.name, op.qubits, op.gate.params) for op in b.ops
    ]


def test_transpile_keeps_measured_register():
    t = transpile(build_qpe(3, 0.125))
    assert t.measured == (0, 1, 2)
    assert t.width == 4


def test_equivalent_up_to_phase_basics():
    assert equivalent_up_to_phase(X, X, 1e-12)
    assert equivalent_up_to_phase(X, -X, 1e-12)
    assert not equivalent_up_to_phase(X, Z, 1e-12)
    with pytest.raises(ValueError):
        equivalent_up_to_phase(X, np.eye(4), 1e-12)


def test_census_of_transpiled_h():
    census = gate_census(transpile(_single("H", (0,))))
    assert census.by_gate == {"Rz": 2, "SX": 1}
    assert census.by_qubit == {0: 3}


def test_census_empty():
    census = gate_census(Circuit(width=2, ops=()))
    assert census.by_gate == {}
    assert census.total == 0


def test_census_transpiled_qpe2():
    # rule enumeration: 1 X; 4 H -> 8 Rz + 4 SX; 3 CP -> 9 Rz + 6 CX;
    # 1 SWAP -> 3 CX
    census = gate_census(transpile(build_qpe(2, 0.25)))
    assert census.by_gate == {"X": 1, "Rz": 17, "SX": 4, "CX": 9}
    assert census.total == 31


def test_census_grows_with_n():
    theta = 0.125
    prev = gate_census(transpile(build_qpe(3, theta)))
    for n in (4, 5, 6):
        cur = gate_census(transpile(build_qpe(n, theta)))
        for name, count in prev.by_gate.items():
            assert cur.by_gate.get(name, 0) >= count
        prev = cur
