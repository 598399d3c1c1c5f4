"""Single-qubit unital noise channels as Kraus-operator sets.

Four channels, each parameterized by an error probability ``p``:

* ``bitflip``        E(rho) = (1-p) rho + p X rho X
* ``phaseflip``      E(rho) = (1-p) rho + p Z rho Z
* ``bitphaseflip``   E(rho) = (1-p) rho + p Y rho Y
* ``depolarizing``   E(rho) = (1-p) rho + p I/2

The depolarizing Kraus set is the exact rewrite of the identity-mixture map:
{sqrt(1-3p/4) I, sqrt(p/4) X, sqrt(p/4) Y, sqrt(p/4) Z}.  All four channels
are completely positive, trace preserving and unital, which is what drives a
noisy register toward the maximally mixed state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .gates import I2, X, Y, Z
from .linalg import num_qubits

__all__ = [
    "CHANNEL_KINDS",
    "NoiseChannel",
    "make_channel",
    "apply_channel",
    "kraus_to_map_check",
    "choi_matrix",
    "completeness_deviation",
    "unitality_deviation",
]

CHANNEL_KINDS = ("bitflip", "phaseflip", "bitphaseflip", "depolarizing")

_FLIP_OPERATOR = {"bitflip": X, "phaseflip": Z, "bitphaseflip": Y}

# States whose images pin down any single-qubit linear map: |0>, |1>, |+>, |+i>.
_PLUS = 0.5 * np.array([[1, 1], [1, 1]], dtype=np.complex128)
_PLUS_I = 0.5 * np.array([[1, -1j], [1j, 1]], dtype=np.complex128)
PROBE_STATES = (
    np.diag([1.0, 0.0]).astype(np.complex128),
    np.diag([0.0, 1.0]).astype(np.complex128),
    _PLUS,
    _PLUS_I,
)


@dataclass(frozen=True, eq=False)
class NoiseChannel:
    kind: str
    p: float
    kraus: tuple = field(repr=False)

    @property
    def kraus_stack(self) -> np.ndarray:
        """Kraus operators stacked into one (n_kraus, 2, 2) array."""
        return np.stack(self.kraus)

    def __repr__(self) -> str:
        return f"NoiseChannel({self.kind}, p={self.p:g})"


def make_channel(kind: str, p: float) -> NoiseChannel:
    """Construct one of the four channels for error probability ``p``."""
    kind = kind.lower()
    if kind not in CHANNEL_KINDS:
        raise ValueError(
            f"unknown channel {kind!r}; choose from {', '.join(CHANNEL_KINDS)}"
        )
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"error probability must be in [0, 1], got {p}")

    if kind == "depolarizing":
        kraus = (
            math.sqrt(1.0 - 0.75 * p) * I2,
            math.sqrt(0.25 * p) * X,
            math.sqrt(0.25 * p) * Y,
            math.sqrt(0.25 * p) * Z,
        )
    else:
        kraus = (
            math.sqrt(1.0 - p) * I2,
            math.sqrt(p) * _FLIP_OPERATOR[kind],
        )
    return NoiseChannel(kind, p, kraus)


def apply_channel(rho: np.ndarray, ch: NoiseChannel, qubit: int) -> np.ndarray:
    """Apply ``ch`` to one qubit of an m-qubit density matrix."""
    m = num_qubits(rho)
    if not 0 <= qubit < m:
        raise ValueError(f"qubit {qubit} out of range for {m}-qubit state")
    return kernels.apply_kraus_single(rho, ch.kraus_stack, qubit, m)


def _formula_map(ch: NoiseChannel, rho: np.ndarray) -> np.ndarray:
    """The channel's literal definition, evaluated directly."""
    if ch.kind == "depolarizing":
        return (1.0 - ch.p) * rho + ch.p * 0.5 * I2
    op = _FLIP_OPERATOR[ch.kind]
    return (1.0 - ch.p) * rho + ch.p * (op @ rho @ op.conj().T)


def kraus_to_map_check(ch: NoiseChannel) -> float:
    """Max deviation between the Kraus sum and the literal map formula over
    the probe-state basis."""
    worst = 0.0
    for rho in PROBE_STATES:
        via_kraus = sum(k @ rho @ k.conj().T for k in ch.kraus)
        worst = max(worst, float(np.max(np.abs(via_kraus - _formula_map(ch, rho)))))
    return worst


def completeness_deviation(ch: NoiseChannel) -> float:
    """max | sum_i K_i^dag K_i - I | (trace preservation)."""
    s = sum(k.conj().T @ k for k in ch.kraus)
    return float(np.max(np.abs(s - I2)))


def unitality_deviation(ch: NoiseChannel) -> float:
    """max | sum_i K_i K_i^dag - I | (the channel fixes I/2)."""
    s = sum(k @ k.conj().T for k in ch.kraus)
    return float(np.max(np.abs(s - I2)))


def choi_matrix(ch: NoiseChannel) -> np.ndarray:
    """Choi matrix (channel acting on the first half of a maximally entangled
    pair); positive semidefinite iff the channel is completely positive."""
    omega = np.zeros(4, dtype=np.complex128)
    omega[0b00] = omega[0b11] = 1.0 / math.sqrt(2.0)
    bell = np.outer(omega, omega.conj())
    out = np.zeros((4, 4), dtype=np.complex128)
    for k in ch.kraus:
        lifted = np.kron(k, I2)
        out += lifted @ bell @ lifted.conj().T
    return out
