"""Gate unitaries: the basis set {I, X, SX, Rz, CX}, the gates the phase
estimation builder needs (H, CP, SWAP), and the diagonal eigenphase unitary.

Conventions
-----------
* ``Rz(lam) = diag(exp(-i*lam/2), exp(+i*lam/2))`` (symmetric phase).
* ``SX`` is the principal square root of X: ``SX @ SX == X``.
* Two-qubit gate matrices index their basis as ``(first qubit)*2 + (second
  qubit)``, so for ``CX`` the first listed qubit is the control.
* ``embed`` places a gate into an ``m``-qubit operator with qubit 0 as the
  left-most Kronecker factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Gate",
    "standard_gate",
    "controlled_power",
    "controlled_phase",
    "eigenphase_unitary",
    "embed",
    "GATE_NAMES",
]

_C = np.complex128

I2 = np.eye(2, dtype=_C)
X = np.array([[0, 1], [1, 0]], dtype=_C)
Y = np.array([[0, -1j], [1j, 0]], dtype=_C)
Z = np.array([[1, 0], [0, -1]], dtype=_C)
H = np.array([[1, 1], [1, -1]], dtype=_C) / math.sqrt(2.0)
SX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=_C)
CX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=_C
)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=_C
)


def _rz(lam: float) -> np.ndarray:
    return np.array(
        [[np.exp(-0.5j * lam), 0], [0, np.exp(0.5j * lam)]], dtype=_C
    )


def _cp(lam: float) -> np.ndarray:
    return np.diag([1, 1, 1, np.exp(1j * lam)]).astype(_C)


@dataclass(frozen=True, eq=False)
class Gate:
    """A named unitary with its parameter list and concrete matrix."""

    name: str
    params: tuple[float, ...]
    matrix: np.ndarray = field(repr=False)

    @property
    def arity(self) -> int:
        return 1 if self.matrix.shape[0] == 2 else 2

    def __repr__(self) -> str:
        if self.params:
            return f"{self.name}({', '.join(f'{p:g}' for p in self.params)})"
        return self.name


# name -> (param count, matrix builder)
_GATE_TABLE = {
    "I": (0, lambda: I2),
    "X": (0, lambda: X),
    "Y": (0, lambda: Y),
    "Z": (0, lambda: Z),
    "H": (0, lambda: H),
    "SX": (0, lambda: SX),
    "Rz": (1, _rz),
    "CX": (0, lambda: CX),
    "CP": (1, _cp),
    "SWAP": (0, lambda: SWAP),
}
_CANONICAL = {name.upper(): name for name in _GATE_TABLE}

GATE_NAMES = tuple(_GATE_TABLE)
BASIS_GATE_NAMES = ("I", "X", "SX", "Rz", "CX")


def standard_gate(name: str, *params: float) -> Gate:
    """Build a gate by name; raises for unknown names or wrong param counts."""
    canonical = _CANONICAL.get(name.upper())
    if canonical is None:
        raise ValueError(f"unknown gate {name!r}; known: {', '.join(GATE_NAMES)}")
    nparams, builder = _GATE_TABLE[canonical]
    if len(params) != nparams:
        raise ValueError(
            f"gate {canonical} takes {nparams} parameter(s), got {len(params)}"
        )
    params = tuple(float(p) for p in params)
    return Gate(canonical, params, builder(*params))


def controlled_phase(lam: float) -> Gate:
    return standard_gate("CP", lam)


def controlled_power(theta: float, j: int) -> Gate:
    """Controlled-U^(2**j) for U = diag(1, exp(2*pi*i*theta)).

    The phase angle is computed by modular arithmetic on the phase fraction,
    not by repeated matrix squaring, so no roundoff accumulates for large j.
    """
    if not 0.0 <= theta < 1.0:
        raise ValueError(f"theta must be in [0, 1), got {theta}")
    if j < 0:
        raise ValueError(f"exponent index must be >= 0, got {j}")
    frac = math.fmod(theta * (2.0**j), 1.0)
    return standard_gate("CP", 2.0 * math.pi * frac)


def eigenphase_unitary(theta: float) -> Gate:
    """diag(1, exp(2*pi*i*theta)): eigenvector |1> carries the phase."""
    if not 0.0 <= theta < 1.0:
        raise ValueError(f"theta must be in [0, 1), got {theta}")
    mat = np.diag([1.0, np.exp(2j * math.pi * theta)]).astype(_C)
    return Gate("U", (float(theta),), mat)


def embed(gate, targets, m: int) -> np.ndarray:
    """Expand a 1- or 2-qubit gate to a ``2**m x 2**m`` operator.

    ``targets`` lists the qubits the gate acts on, in the gate's own qubit
    order (e.g. ``[control, target]`` for CX); all other qubits get the
    identity.
    """
    u = gate.matrix if isinstance(gate, Gate) else np.asarray(gate, dtype=_C)
    k = u.shape[0].bit_length() - 1
    targets = [int(q) for q in targets]
    if len(targets) != k:
        raise ValueError(f"gate acts on {k} qubit(s), got targets {targets}")
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate target indices {targets}")
    if any(q < 0 or q >= m for q in targets):
        raise ValueError(f"targets {targets} out of range for {m} qubits")

    rest = [q for q in range(m) if q not in targets]
    g = u.reshape((2,) * (2 * k))
    e = np.eye(1 << len(rest), dtype=_C).reshape((2,) * (2 * len(rest)))
    # Tensor axes: gate rows, gate cols, identity rows, identity cols.
    t = np.tensordot(g, e, axes=0)

    row_axis = {}
    col_axis = {}
    for i, q in enumerate(targets):
        row_axis[q] = i
        col_axis[q] = k + i
    for i, q in enumerate(rest):
        row_axis[q] = 2 * k + i
        col_axis[q] = 2 * k + len(rest) + i
    perm = [row_axis[q] for q in range(m)] + [col_axis[q] for q in range(m)]
    d = 1 << m
    return np.ascontiguousarray(t.transpose(perm).reshape(d, d))
