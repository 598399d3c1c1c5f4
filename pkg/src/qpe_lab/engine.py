"""Simulation backends over transpiled circuits with interleaved noise.

Two modes:

* :func:`run_exact` evolves the full density matrix, applying the channel
  after every basis gate, and returns the exact measurement distribution of
  the estimation register.
* :func:`run_trajectories` unravels the same evolution into pure-state Monte
  Carlo shots, sampling one Kraus branch per noise site with the exact
  state-dependent probabilities ||K psi||^2, so its expectation matches
  :func:`run_exact` for every channel.

Noise placement: each 1-qubit gate is followed by the channel on its qubit;
after a CX the ``two_qubit_noise`` policy decides whether both qubits, only
the target, or neither receives the channel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .channels import NoiseChannel, make_channel
from .circuit import Circuit, build_qpe
from .linalg import check_state, partial_trace, zero_density
from .transpile import transpile

__all__ = [
    "TWO_QUBIT_NOISE_POLICIES",
    "SimSpec",
    "PhaseDistribution",
    "run_exact",
    "run_trajectories",
    "distribution_stats",
    "qpe_distribution",
]

TWO_QUBIT_NOISE_POLICIES = ("both", "target", "none")
MAX_EXACT_WIDTH = 12
DEFAULT_SHOTS = 4096

_TRAJECTORY_CHUNK = 16384


@dataclass(frozen=True, eq=False)
class SimSpec:
    """A circuit plus the noise model to interleave into it."""

    circuit: Circuit
    channel: NoiseChannel
    two_qubit_noise: str = "both"
    seed: int = 0

    def __post_init__(self):
        if self.two_qubit_noise not in TWO_QUBIT_NOISE_POLICIES:
            raise ValueError(
                f"two_qubit_noise must be one of {TWO_QUBIT_NOISE_POLICIES}, "
                f"got {self.two_qubit_noise!r}"
            )


@dataclass(frozen=True, eq=False)
class PhaseDistribution:
    """Probability over measured register values k in 0..2**n - 1."""

    n: int
    probs: np.ndarray
    mode: str
    shots: int | None = None


def _noise_qubits(op, policy: str) -> tuple:
    if len(op.qubits) == 1:
        return op.qubits
    if policy == "both":
        return op.qubits
    if policy == "target":
        return (op.qubits[1],)
    return ()


def _measured_register(c: Circuit) -> int:
    n = len(c.measured)
    if n == 0:
        raise ValueError("circuit has no measured qubits")
    if tuple(c.measured) != tuple(range(n)):
        raise ValueError("measured register must be qubits 0..n-1")
    return n


def _bit_reversal(n: int) -> np.ndarray:
    perm = np.zeros(1 << n, dtype=np.int64)
    for k in range(1 << n):
        r = 0
        x = k
        for _ in range(n):
            r = (r << 1) | (x & 1)
            x >>= 1
        perm[k] = r
    return perm


def run_exact(spec: SimSpec, check_every: int = 0) -> PhaseDistribution:
    """Exact density-matrix evolution of the circuit with noise after every
    gate; returns the full measurement distribution.

    ``check_every > 0`` validates trace/Hermiticity/positivity every that
    many ops (slow; meant for tests).
    """
    c = spec.circuit
    m = c.width
    if m > MAX_EXACT_WIDTH:
        raise ValueError(f"width {m} exceeds dense limit {MAX_EXACT_WIDTH}")
    n = _measured_register(c)
    kstack = np.ascontiguousarray(spec.channel.kraus_stack)

    rho = zero_density(m)
    for step, op in enumerate(c.ops):
        u = np.ascontiguousarray(op.gate.matrix)
        rho = kernels.apply_unitary(rho, u, op.qubits, m)
        for q in _noise_qubits(op, spec.two_qubit_noise):
            rho = kernels.apply_kraus_single(rho, kstack, q, m)
        if check_every and (step + 1) % check_every == 0:
            health = check_state(rho)
            if not health.is_valid(trace_tol=1e-10, herm_tol=1e-10, psd_tol=-1e-9):
                raise RuntimeError(f"state invalid after op {step}: {health}")

    reduced = partial_trace(rho, range(n))
    populations = np.clip(np.real(np.diag(reduced)), 0.0, None)
    probs = populations[_bit_reversal(n)]
    return PhaseDistribution(n=n, probs=probs, mode="exact")


def _encode_ops(c: Circuit, policy: str):
    """Flatten ops + noise sites into integer instructions for the kernels."""
    instr = []
    mats1 = []
    mats2 = []
    for op in c.ops:
        mat = np.ascontiguousarray(op.gate.matrix)
        if len(op.qubits) == 1:
            instr.append((0, len(mats1), op.qubits[0], 0))
            mats1.append(mat)
        else:
            instr.append((1, len(mats2), op.qubits[0], op.qubits[1]))
            mats2.append(mat)
        for q in _noise_qubits(op, policy):
            instr.append((2, 0, q, 0))
    instr_arr = np.array(instr, dtype=np.int64).reshape(len(instr), 4)
    m1 = np.stack(mats1) if mats1 else np.zeros((0, 2, 2), dtype=np.complex128)
    m2 = np.stack(mats2) if mats2 else np.zeros((0, 4, 4), dtype=np.complex128)
    n_sites = int(np.count_nonzero(instr_arr[:, 0] == 2))
    return instr_arr, m1, m2, n_sites


def run_trajectories(spec: SimSpec, shots: int) -> PhaseDistribution:
    """Monte Carlo pure-state sampling of the same noisy evolution.

    Deterministic given ``spec.seed``: each shot consumes one uniform per
    noise site plus one for measurement, drawn up front from a seeded PCG64
    stream, so reruns (and backend switches) reproduce identical counts.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    c = spec.circuit
    m = c.width
    n = _measured_register(c)
    instr, mats1, mats2, n_sites = _encode_ops(c, spec.two_qubit_noise)
    kstack = np.ascontiguousarray(spec.channel.kraus_stack)

    rng = np.random.default_rng(spec.seed)
    counts = np.zeros(1 << n, dtype=np.int64)
    remaining = shots
    while remaining > 0:
        batch = min(remaining, _TRAJECTORY_CHUNK)
        uniforms = rng.random((batch, n_sites + 1))
        outcomes = kernels.trajectory_outcomes(
            instr, mats1, mats2, kstack, uniforms, m, n
        )
        counts += np.bincount(outcomes, minlength=1 << n)
        remaining -= batch
    probs = counts.astype(np.float64) / shots
    return PhaseDistribution(n=n, probs=probs, mode="sampled", shots=shots)


def distribution_stats(d: PhaseDistribution) -> tuple:
    """Mean and population standard deviation of theta_hat = k / 2**n."""
    theta_hat = np.arange(d.probs.shape[0], dtype=np.float64) / d.probs.shape[0]
    theta_bar = float(np.dot(d.probs, theta_hat))
    var = float(np.dot(d.probs, (theta_hat - theta_bar) ** 2))
    return theta_bar, float(np.sqrt(max(var, 0.0)))


def qpe_distribution(
    n: int,
    theta: float,
    channel: str,
    p: float,
    mode: str = "exact",
    shots: int = DEFAULT_SHOTS,
    seed: int = 0,
    two_qubit_noise: str = "both",
) -> PhaseDistribution:
    """Build, transpile and simulate the phase-estimation circuit."""
    circuit = transpile(build_qpe(n, theta))
    spec = SimSpec(
        circuit=circuit,
        channel=make_channel(channel, p),
        two_qubit_noise=two_qubit_noise,
        seed=seed,
    )
    if mode == "exact":
        return run_exact(spec)
    if mode == "sampled":
        return run_trajectories(spec, shots)
    raise ValueError(f"mode must be 'exact' or 'sampled', got {mode!r}")
