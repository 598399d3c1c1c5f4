"""Circuit representation and the phase-estimation circuit builder.

A circuit on ``n`` estimation qubits plus one eigenvector qubit estimates the
eigenphase ``theta`` of ``U = diag(1, exp(2*pi*i*theta))``:

1. prepare the eigenvector qubit in |1> with an explicit X gate,
2. Hadamard every estimation qubit,
3. apply controlled-U^(2**j) from estimation qubit j,
4. run the inverse Fourier transform on the estimation register,
5. measure the estimation register.

Readout convention: the measured integer k takes estimation qubit 0 as its
*least* significant bit, so the estimate is ``k / 2**n``.  Because matrices
index qubit 0 as the most significant position, the Fourier block includes
explicit SWAP gates; they are real gates and contribute noise sites like any
other gate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gates import Gate, controlled_power, embed, standard_gate

__all__ = [
    "CircuitOp",
    "Circuit",
    "build_qpe",
    "build_inverse_qft",
    "circuit_unitary",
    "serialize_circuit",
    "parse_circuit",
]

MAX_QPE_QUBITS = 12
MAX_UNITARY_WIDTH = 10


@dataclass(frozen=True, eq=False)
class CircuitOp:
    gate: Gate
    qubits: tuple[int, ...]

    def __repr__(self) -> str:
        return f"{self.gate!r} @ {list(self.qubits)}"


@dataclass(frozen=True, eq=False)
class Circuit:
    """Ordered gate list on ``width`` qubits; ``measured`` marks the readout
    register in bit order (first entry = least significant bit of k)."""

    width: int
    ops: tuple[CircuitOp, ...]
    measured: tuple[int, ...] = ()

    def __post_init__(self):
        for op in self.ops:
            if len(op.qubits) != op.gate.arity:
                raise ValueError(f"{op!r}: qubit count != gate arity")
            if len(set(op.qubits)) != len(op.qubits):
                raise ValueError(f"{op!r}: duplicate qubit indices")
            if any(q < 0 or q >= self.width for q in op.qubits):
                raise ValueError(f"{op!r}: qubit out of range for width {self.width}")
        if any(q < 0 or q >= self.width for q in self.measured):
            raise ValueError("measured qubit out of range")

    def __len__(self) -> int:
        return len(self.ops)


def _op(name: str, qubits, *params: float) -> CircuitOp:
    return CircuitOp(standard_gate(name, *params), tuple(int(q) for q in qubits))


def _inverse_qft_ops(n: int) -> list[CircuitOp]:
    ops = []
    # Bit-order correction first: the inverse runs the forward circuit
    # backwards, and the forward transform ends with these swaps.
    for a in range(n // 2):
        ops.append(_op("SWAP", (a, n - 1 - a)))
    for j in range(n):
        for l in range(j):
            ops.append(_op("CP", (l, j), -math.pi / (1 << (j - l))))
        ops.append(_op("H", (j,)))
    return ops


def build_inverse_qft(n: int) -> Circuit:
    """Inverse Fourier transform on ``n`` qubits.

    In the readout labeling (qubit 0 = least significant bit) its unitary is
    the inverse DFT matrix with entries ``conj(omega)**(j*k) / sqrt(2**n)``,
    ``omega = exp(2*pi*i/2**n)``.
    """
    if n < 1:
        raise ValueError(f"qubit count must be >= 1, got {n}")
    return Circuit(width=n, ops=tuple(_inverse_qft_ops(n)))


def build_qpe(n: int, theta: float) -> Circuit:
    """Phase-estimation circuit on ``n`` estimation qubits + 1 eigenvector
    qubit (index ``n``), for eigenphase fraction ``theta`` in [0, 1)."""
    if not 1 <= n <= MAX_QPE_QUBITS:
        raise ValueError(f"n must be in 1..{MAX_QPE_QUBITS}, got {n}")
    if not 0.0 <= theta < 1.0:
        raise ValueError(f"theta must be in [0, 1), got {theta}")

    ops = [_op("X", (n,))]
    ops.extend(_op("H", (j,)) for j in range(n))
    for j in range(n):
        ops.append(CircuitOp(controlled_power(theta, j), (j, n)))
    ops.extend(_inverse_qft_ops(n))
    return Circuit(width=n + 1, ops=tuple(ops), measured=tuple(range(n)))


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Product of the embedded gate matrices in application order.

    Dense verification aid; limited to width <= 10.
    """
    if c.width > MAX_UNITARY_WIDTH:
        raise ValueError(f"width {c.width} too large for a dense unitary")
    d = 1 << c.width
    u = np.eye(d, dtype=np.complex128)
    for op in c.ops:
        u = embed(op.gate, op.qubits, c.width) @ u
    return u


def serialize_circuit(c: Circuit) -> str:
    """Line-oriented text form: header, then one ``GATE params qubits`` per
    line (params omitted for parameterless gates)."""
    lines = [f"width={c.width} measure={','.join(str(q) for q in c.measured)}"]
    for op in c.ops:
        qubits = ",".join(str(q) for q in op.qubits)
        if op.gate.params:
            params = ",".join(repr(p) for p in op.gate.params)
            lines.append(f"{op.gate.name} {params} {qubits}")
        else:
            lines.append(f"{op.gate.name} {qubits}")
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    """Inverse of :func:`serialize_circuit`."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("width="):
        raise ValueError("missing circuit header line 'width=... measure=...'")
    header = dict(item.split("=", 1) for item in lines[0].split())
    width = int(header["width"])
    measure_field = header.get("measure", "")
    measured = tuple(int(q) for q in measure_field.split(",") if q != "")

    ops = []
    for ln in lines[1:]:
        tokens = ln.split()
        if len(tokens) == 2:
            name, qubit_field = tokens
            params: tuple[float, ...] = ()
        elif len(tokens) == 3:
            name, param_field, qubit_field = tokens
            params = tuple(float(p) for p in param_field.split(","))
        else:
            raise ValueError(f"malformed circuit line: {ln!r}")
        qubits = tuple(int(q) for q in qubit_field.split(","))
        ops.append(CircuitOp(standard_gate(name, *params), qubits))
    return Circuit(width=width, ops=tuple(ops), measured=measured)
