"""Rewrite circuits into the basis gate set {I, X, SX, Rz, CX}.

Each rule preserves the unitary up to a global phase.  Adjacent Rz gates are
deliberately *not* merged and no gate cancellation is attempted: every emitted
basis gate is a noise insertion point, so the op sequence must be a pure
function of the decomposition rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, CircuitOp
from .gates import BASIS_GATE_NAMES, standard_gate

__all__ = [
    "transpile",
    "equivalent_up_to_phase",
    "gate_census",
    "GateCensus",
    "is_basis_circuit",
]


def _op(name: str, qubits, *params: float) -> CircuitOp:
    return CircuitOp(standard_gate(name, *params), tuple(qubits))


def _decompose(op: CircuitOp) -> list[CircuitOp]:
    name = op.gate.name
    q = op.qubits
    if name in ("X", "SX", "Rz", "CX"):
        return [op]
    if name == "I":
        return []
    if name == "H":
        # H = Rz(pi/2) . SX . Rz(pi/2) up to global phase exp(-i*pi/4)
        half = math.pi / 2
        return [_op("Rz", q, half), _op("SX", q), _op("Rz", q, half)]
    if name == "CP":
        # Standard two-CX controlled-phase identity.
        (lam,) = op.gate.params
        a, b = q
        return [
            _op("Rz", (a,), lam / 2),
            _op("Rz", (b,), lam / 2),
            _op("CX", (a, b)),
            _op("Rz", (b,), -lam / 2),
            _op("CX", (a, b)),
        ]
    if name == "SWAP":
        a, b = q
        return [_op("CX", (a, b)), _op("CX", (b, a)), _op("CX", (a, b))]
    raise ValueError(f"no decomposition rule for gate {name!r}")


def transpile(c: Circuit) -> Circuit:
    """Deterministic rewrite of ``c`` into basis gates only."""
    ops: list[CircuitOp] = []
    for op in c.ops:
        ops.extend(_decompose(op))
    return Circuit(width=c.width, ops=tuple(ops), measured=c.measured)


def is_basis_circuit(c: Circuit) -> bool:
    return all(op.gate.name in BASIS_GATE_NAMES for op in c.ops)


def equivalent_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    """True iff ``a == c * b`` for some unit-modulus scalar c, within ``tol``
    in max-norm.  The phase is read off the largest-magnitude entry of b."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[idx]) < tol:
        return bool(np.max(np.abs(a)) <= tol)
    ratio = a[idx] / b[idx]
    if ratio == 0:
        return bool(np.max(np.abs(a)) <= tol)
    phase = ratio / abs(ratio)
    return bool(np.max(np.abs(a - phase * b)) <= tol)


@dataclass(frozen=True)
class GateCensus:
    by_gate: dict
    by_qubit: dict

    @property
    def total(self) -> int:
        return sum(self.by_gate.values())


def gate_census(c: Circuit) -> GateCensus:
    """Tally ops per gate name and per touched qubit."""
    by_gate: dict[str, int] = {}
    by_qubit: dict[int, int] = {}
    for op in c.ops:
        by_gate[op.gate.name] = by_gate.get(op.gate.name, 0) + 1
        for q in op.qubits:
            by_qubit[q] = by_qubit.get(q, 0) + 1
    return GateCensus(by_gate, by_qubit)
