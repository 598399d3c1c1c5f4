"""Dense complex linear algebra for multi-qubit operators and states.

Everything is a plain ``numpy.ndarray`` with dtype complex128.  Operators on
``m`` qubits are ``2**m x 2**m`` matrices; qubit index 0 is the *left-most*
Kronecker factor, i.e. the most significant bit of the matrix index.  All
functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "matmul",
    "kron",
    "dagger",
    "partial_trace",
    "check_state",
    "StateDiagnostics",
    "num_qubits",
    "basis_ket",
    "zero_density",
    "maximally_mixed",
]

# Tolerances for a physically valid density matrix.  PSD is looser than the
# others: eigenvalues drift below zero by accumulated roundoff over ~1e3
# channel applications.
TRACE_TOL = 1e-12
HERM_TOL = 1e-12
PSD_TOL = -1e-10


def num_qubits(mat: np.ndarray) -> int:
    """Number of qubits for a square operator, validating the 2**m shape."""
    d = mat.shape[0]
    if mat.ndim != 2 or mat.shape[1] != d:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    m = d.bit_length() - 1
    if d <= 0 or (1 << m) != d:
        raise ValueError(f"dimension {d} is not a power of two")
    return m


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product with an explicit dimension check."""
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; the left argument is the more significant factor."""
    return np.kron(a, b)


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def basis_ket(index: int, m: int) -> np.ndarray:
    """Computational-basis column vector |index> on ``m`` qubits."""
    d = 1 << m
    if not 0 <= index < d:
        raise ValueError(f"basis index {index} out of range for {m} qubits")
    psi = np.zeros(d, dtype=np.complex128)
    psi[index] = 1.0
    return psi


def zero_density(m: int) -> np.ndarray:
    """Density matrix of |0...0> on ``m`` qubits."""
    d = 1 << m
    rho = np.zeros((d, d), dtype=np.complex128)
    rho[0, 0] = 1.0
    return rho


def maximally_mixed(m: int) -> np.ndarray:
    """I / 2**m on ``m`` qubits."""
    d = 1 << m
    return np.eye(d, dtype=np.complex128) / d


def partial_trace(rho: np.ndarray, keep) -> np.ndarray:
    """Reduced density matrix on the ``keep`` qubits.

    Parameters
    ----------
    rho : ndarray
        Density matrix on ``m`` qubits.
    keep : iterable of int
        Qubit indices to retain, each in ``0..m-1``.  The reduced matrix
        orders them ascending, preserving the original Kronecker order.
    """
    m = num_qubits(rho)
    keep = sorted(set(int(q) for q in keep))
    if not keep:
        raise ValueError("keep set must be non-empty")
    if keep[0] < 0 or keep[-1] >= m:
        raise ValueError(f"keep indices {keep} out of range for {m} qubits")

    t = rho.reshape((2,) * (2 * m))
    row_labels = list(range(m))
    # Traced qubits share the row label between bra and ket sides.
    col_labels = [m + q if q in keep else q for q in range(m)]
    out_labels = [q for q in keep] + [m + q for q in keep]
    reduced = np.einsum(t, row_labels + col_labels, out_labels)
    dk = 1 << len(keep)
    return np.ascontiguousarray(reduced.reshape(dk, dk))


@dataclass(frozen=True)
class StateDiagnostics:
    """Numerical health of a candidate density matrix."""

    trace_deviation: float
    hermiticity_deviation: float
    min_eigenvalue: float

    def is_valid(
        self,
        trace_tol: float = TRACE_TOL,
        herm_tol: float = HERM_TOL,
        psd_tol: float = PSD_TOL,
    ) -> bool:
        return (
            self.trace_deviation <= trace_tol
            and self.hermiticity_deviation <= herm_tol
            and self.min_eigenvalue >= psd_tol
        )


def check_state(rho: np.ndarray) -> StateDiagnostics:
    """Trace / Hermiticity deviations and the smallest eigenvalue of ``rho``.

    The eigenvalue is computed from the Hermitian part (rho + rho^dag)/2 so
    the check stays meaningful for slightly non-Hermitian inputs.
    """
    trace_dev = abs(np.trace(rho) - 1.0)
    herm_dev = np.max(np.abs(rho - rho.conj().T))
    herm_part = 0.5 * (rho + rho.conj().T)
    min_eig = float(np.linalg.eigvalsh(herm_part)[0])
    return StateDiagnostics(float(trace_dev), float(herm_dev), min_eig)
