"""Hot numeric kernels: local operator application to density matrices and
statevectors, plus the per-shot trajectory sampler.

Two interchangeable backends compute identical results:

* ``numba``  -- @njit loops over basis-index blocks (default when numba is
  importable); the whole trajectory loop runs compiled.
* ``numpy``  -- pure-numpy strided einsum contractions; trajectories are
  vectorized across shots.

Selection: environment variable ``QPE_LAB_BACKEND`` (``numba`` or ``numpy``),
else numba when available.  :func:`set_backend` switches at runtime, which the
test suite and the backend benchmark rely on.

Trajectory sampling consumes one pre-drawn uniform per (shot, noise site) plus
one per measurement, in a fixed order, so both backends follow identical
random streams and a seed pins the outcome regardless of backend.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "active_backend",
    "available_backends",
    "set_backend",
    "apply_unitary",
    "apply_kraus_single",
    "trajectory_outcomes",
    "readout_map",
]

_ENV_VAR = "QPE_LAB_BACKEND"
_BACKENDS = ("numba", "numpy")

_numba_kernels = None  # loaded lazily


def _load_numba():
    global _numba_kernels
    if _numba_kernels is None:
        from . import _numba_kernels as mod

        _numba_kernels = mod
    return _numba_kernels


def _numba_available() -> bool:
    try:
        _load_numba()
    except ImportError:
        return False
    return True


def available_backends() -> tuple:
    return _BACKENDS if _numba_available() else ("numpy",)


def _initial_backend() -> str:
    choice = os.environ.get(_ENV_VAR, "").strip().lower()
    if choice:
        if choice not in _BACKENDS:
            raise ValueError(
                f"{_ENV_VAR}={choice!r} not understood; use one of {_BACKENDS}"
            )
        if choice == "numba" and not _numba_available():
            raise RuntimeError(f"{_ENV_VAR}=numba but numba is not importable")
        return choice
    return "numba" if _numba_available() else "numpy"


_active = _initial_backend()


def active_backend() -> str:
    return _active


def set_backend(name: str) -> str:
    """Switch the kernel backend; returns the previously active one."""
    global _active
    name = name.strip().lower()
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; use one of {_BACKENDS}")
    if name == "numba" and not _numba_available():
        raise RuntimeError("numba backend requested but numba is not importable")
    previous = _active
    _active = name
    return previous


# --------------------------------------------------------------------------
# numpy implementations

_C = np.complex128


def _gate_tensor_sorted(u4: np.ndarray, qa: int, qb: int) -> np.ndarray:
    """(2,2,2,2) view of a 4x4 gate with axes ordered (low qubit, high qubit),
    given that the 4-dim basis index is bit(qa)*2 + bit(qb)."""
    g = u4.reshape(2, 2, 2, 2)
    if qa > qb:
        g = g.transpose(1, 0, 3, 2)
    return g


def _u1_rho_numpy(rho, u, q, m):
    left = 1 << q
    right = 1 << (m - q - 1)
    t = rho.reshape(left, 2, right, left, 2, right)
    out = np.einsum("aA,iAjkBl,bB->iajkbl", u, t, u.conj(), optimize=True)
    return out.reshape(rho.shape)


def _u2_rho_numpy(rho, u4, qa, qb, m):
    lo, hi = (qa, qb) if qa < qb else (qb, qa)
    d1 = 1 << lo
    d2 = 1 << (hi - lo - 1)
    d3 = 1 << (m - hi - 1)
    g = _gate_tensor_sorted(u4, qa, qb)
    t = rho.reshape(d1, 2, d2, 2, d3, d1, 2, d2, 2, d3)
    out = np.einsum(
        "abAB,iAjBklCmDn,cdCD->iajbklcmdn", g, t, g.conj(), optimize=True
    )
    return out.reshape(rho.shape)


def _apply_unitary_numpy(rho, u, qubits, m):
    if len(qubits) == 1:
        return _u1_rho_numpy(rho, u, qubits[0], m)
    return _u2_rho_numpy(rho, u, qubits[0], qubits[1], m)


def _apply_kraus_numpy(rho, kstack, qubit, m):
    out = np.zeros_like(rho)
    for k in kstack:
        out += _u1_rho_numpy(rho, k, qubit, m)
    return out


def _u1_psi_batch_numpy(psi, u, q, m):
    batch = psi.shape[0]
    left = 1 << q
    right = 1 << (m - q - 1)
    t = psi.reshape(batch, left, 2, right)
    out = np.einsum("ab,slbr->slar", u, t)
    return out.reshape(batch, -1)


def _u2_psi_batch_numpy(psi, u4, qa, qb, m):
    lo, hi = (qa, qb) if qa < qb else (qb, qa)
    d1 = 1 << lo
    d2 = 1 << (hi - lo - 1)
    d3 = 1 << (m - hi - 1)
    g = _gate_tensor_sorted(u4, qa, qb)
    t = psi.reshape(psi.shape[0], d1, 2, d2, 2, d3)
    out = np.einsum("abAB,siAjBk->siajbk", g, t)
    return out.reshape(psi.shape[0], -1)


def readout_map(m: int, n_est: int) -> np.ndarray:
    """Matrix basis index -> measured integer k.  Estimation qubit j (the
    bit at position m-1-j of the index) becomes bit j of k."""
    idx = np.arange(1 << m, dtype=np.int64)
    k = np.zeros_like(idx)
    for j in range(n_est):
        k |= ((idx >> (m - 1 - j)) & 1) << j
    return k


def _pick_first_exceeding(cumulative, u):
    """Index of the first cumulative weight strictly above u (vectorized);
    clipped into range so a full-mass u falls on the last entry."""
    choice = np.sum(cumulative <= u, axis=0).astype(np.int64)
    return np.clip(choice, 0, cumulative.shape[0] - 1)


def _trajectory_numpy(instr, mats1, mats2, kraus, uniforms, m, n_est):
    batch = uniforms.shape[0]
    dim = 1 << m
    psi = np.zeros((batch, dim), dtype=_C)
    psi[:, 0] = 1.0
    rows = np.arange(batch)
    site = 0
    for kind, idx, q0, q1 in instr:
        if kind == 0:
            psi = _u1_psi_batch_numpy(psi, mats1[idx], q0, m)
        elif kind == 1:
            psi = _u2_psi_batch_numpy(psi, mats2[idx], q0, q1, m)
        else:
            cands = np.stack(
                [_u1_psi_batch_numpy(psi, k, q0, m) for k in kraus]
            )  # (n_kraus, batch, dim)
            weights = np.sum(cands.real**2 + cands.imag**2, axis=2)
            choice = _pick_first_exceeding(
                np.cumsum(weights, axis=0), uniforms[:, site][None, :]
            )
            site += 1
            psi = cands[choice, rows, :] / np.sqrt(weights[choice, rows])[:, None]
    probs = psi.real**2 + psi.imag**2
    cum = np.cumsum(probs, axis=1)
    outcome = np.sum(cum <= uniforms[:, site][:, None], axis=1)
    outcome = np.clip(outcome, 0, dim - 1)
    return readout_map(m, n_est)[outcome]


# --------------------------------------------------------------------------
# dispatch


def apply_unitary(rho: np.ndarray, u: np.ndarray, qubits, m: int) -> np.ndarray:
    """rho -> U rho U^dag with U acting on one or two qubits."""
    if _active == "numba":
        nb = _load_numba()
        out = np.array(rho)
        if len(qubits) == 1:
            nb.u1_rho_inplace(out, u, m - 1 - qubits[0])
        else:
            nb.u2_rho_inplace(out, u, m - 1 - qubits[0], m - 1 - qubits[1])
        return out
    return _apply_unitary_numpy(rho, u, tuple(qubits), m)


def apply_kraus_single(
    rho: np.ndarray, kstack: np.ndarray, qubit: int, m: int
) -> np.ndarray:
    """rho -> sum_i K_i rho K_i^dag with 2x2 Kraus operators on ``qubit``."""
    if _active == "numba":
        nb = _load_numba()
        out = np.array(rho)
        nb.kraus1_rho_inplace(out, np.ascontiguousarray(kstack), m - 1 - qubit)
        return out
    return _apply_kraus_numpy(rho, kstack, qubit, m)


def trajectory_outcomes(
    instr: np.ndarray,
    mats1: np.ndarray,
    mats2: np.ndarray,
    kraus: np.ndarray,
    uniforms: np.ndarray,
    m: int,
    n_est: int,
) -> np.ndarray:
    """Run one trajectory per row of ``uniforms`` and return measured k's.

    ``instr`` rows are ``[kind, matrix_index, q0, q1]`` with kind 0 = 1q
    unitary, 1 = 2q unitary, 2 = noise site on q0.  Column ``s`` of
    ``uniforms`` drives noise site ``s``; the last column drives measurement.
    """
    if _active == "numba":
        nb = _load_numba()
        return nb.trajectory_outcomes(
            instr, mats1, mats2, kraus, uniforms, m, n_est
        )
    return _trajectory_numpy(instr, mats1, mats2, kraus, uniforms, m, n_est)
