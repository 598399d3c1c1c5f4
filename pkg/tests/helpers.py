"""Shared test utilities: random states/unitaries and small oracles."""

import numpy as np

from qpe_lab.circuit import Circuit, CircuitOp
from qpe_lab.gates import embed, standard_gate


def random_unitary(dim: int, rng) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(m: int, rng) -> np.ndarray:
    dim = 1 << m
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def random_pure_density(rng) -> np.ndarray:
    psi = rng.normal(size=2) + 1j * rng.normal(size=2)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    x = np.array([[0, 1], [1, 0]])
    y = np.array([[0, -1j], [1j, 0]])
    z = np.array([[1, 0], [0, -1]])
    return np.real(np.array([np.trace(rho @ p) for p in (x, y, z)]))


def kraus_oracle(rho: np.ndarray, kraus, qubit: int, m: int) -> np.ndarray:
    """Reference channel application via dense embedded operators."""
    out = np.zeros_like(rho)
    for k in kraus:
        lifted = embed(k, [qubit], m)
        out += lifted @ rho @ lifted.conj().T
    return out


def tv_distance(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def bit_reverse(x: int, n: int) -> int:
    r = 0
    for _ in range(n):
        r = (r << 1) | (x & 1)
        x >>= 1
    return r


def random_circuit(width: int, n_ops: int, rng) -> Circuit:
    """Random circuit over the gates the transpiler accepts."""
    ops = []
    for _ in range(n_ops):
        name = rng.choice(["H", "X", "SX", "Rz", "CP", "CX", "SWAP"])
        if name in ("H", "X", "SX", "Rz"):
            qubits = (int(rng.integers(width)),)
        else:
            qubits = tuple(rng.choice(width, size=2, replace=False).astype(int))
        params = (float(rng.uniform(-2 * np.pi, 2 * np.pi)),) if name in ("Rz", "CP") else ()
        ops.append(CircuitOp(standard_gate(name, *params), qubits))
    return Circuit(width=width, ops=tuple(ops))
