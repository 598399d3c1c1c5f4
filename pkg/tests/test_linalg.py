import numpy as np
import pytest

from helpers import random_density, random_unitary
from qpe_lab.gates import I2, SX, X, Y, Z
from qpe_lab.linalg import (
    basis_ket,
    check_state,
    dagger,
    kron,
    matmul,
    maximally_mixed,
    num_qubits,
    partial_trace,
    zero_density,
)


def test_matmul_identity():
    assert np.array_equal(matmul(I2, X), X)


def test_matmul_pauli_involution():
    assert np.allclose(matmul(X, X), I2)


def test_matmul_xz_is_minus_i_y():
    # by hand: [[0,1],[1,0]] @ [[1,0],[0,-1]] = [[0,-1],[1,0]] = -i*Y
    assert np.allclose(matmul(X, Z), -1j * Y, atol=1e-15)


def test_matmul_dimension_mismatch():
    with pytest.raises(ValueError):
        matmul(np.eye(2), np.eye(3))


def test_kron_identities():
    assert np.array_equal(kron(I2, I2), np.eye(4))
    assert np.array_equal(kron(np.diag([1.0, 2.0]), I2), np.diag([1.0, 1.0, 2.0, 2.0]))


def test_kron_xx_flips_00_to_11():
    ket00 = np.array([1, 0, 0, 0], dtype=complex)
    out = kron(X, X) @ ket00
    assert np.allclose(out, [0, 0, 0, 1])


def test_kron_associative():
    # integer-valued entries keep every product exact, so equality is exact
    rng = np.random.default_rng(11)
    a, b, c = (
        rng.integers(-4, 5, size=(2, 2)) + 1j * rng.integers(-4, 5, size=(2, 2))
        for _ in range(3)
    )
    assert np.array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))


def test_dagger():
    assert np.array_equal(dagger(I2), I2)
    assert np.allclose(dagger(Y), Y)
    assert np.allclose(dagger(SX) @ SX, I2, atol=1e-12)


def test_partial_trace_product_state():
    # |01><01|: qubit 0 (left factor) in |0>, qubit 1 in |1>
    rho = np.zeros((4, 4), dtype=complex)
    rho[1, 1] = 1.0
    assert np.allclose(partial_trace(rho, {0}), np.diag([1.0, 0.0]))
    assert np.allclose(partial_trace(rho, {1}), np.diag([0.0, 1.0]))


def test_partial_trace_maximally_mixed():
    assert np.allclose(partial_trace(maximally_mixed(2), {1}), I2 / 2)


def test_partial_trace_bell():
    phi = np.zeros(4, dtype=complex)
    phi[0b00] = phi[0b11] = 1 / np.sqrt(2)
    rho = np.outer(phi, phi.conj())
    assert np.allclose(partial_trace(rho, {0}), I2 / 2, atol=1e-12)


def test_partial_trace_preserves_trace():
    rng = np.random.default_rng(5)
    for m in (2, 3, 4):
        rho = random_density(m, rng)
        for keep in ({0}, {m - 1}, set(range(m - 1))):
            red = partial_trace(rho, keep)
            assert abs(np.trace(red) - 1.0) <= 1e-12


def test_partial_trace_errors():
    rho = maximally_mixed(2)
    with pytest.raises(ValueError):
        partial_trace(rho, set())
    with pytest.raises(ValueError):
        partial_trace(rho, {5})


def test_check_state_mixed():
    diag = check_state(maximally_mixed(1))
    assert diag.trace_deviation <= 1e-12
    assert diag.hermiticity_deviation <= 1e-12
    assert diag.min_eigenvalue == pytest.approx(0.5, abs=1e-12)
    assert diag.is_valid()


def test_check_state_pure():
    diag = check_state(zero_density(1))
    assert diag.min_eigenvalue == pytest.approx(0.0, abs=1e-12)


def test_check_state_flags_bad_trace():
    diag = check_state(1.1 * zero_density(1))
    assert diag.trace_deviation == pytest.approx(0.1, abs=1e-12)
    assert not diag.is_valid()


def test_unitary_times_dagger_is_identity():
    rng = np.random.default_rng(7)
    for dim in (2, 4, 8):
        u = random_unitary(dim, rng)
        assert np.allclose(u @ dagger(u), np.eye(dim), atol=1e-12)


def test_num_qubits_and_basis_ket():
    assert num_qubits(np.eye(8)) == 3
    with pytest.raises(ValueError):
        num_qubits(np.eye(3))
    assert basis_ket(2, 2)[2] == 1.0
    with pytest.raises(ValueError):
        basis_ket(4, 2)
