import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specgate.errors import EncodingRangeError
from specgate.modespace import (
    EncodingKind,
    ModeSpace,
    QubitEncoding,
    dft_matrix,
    frequency_qubit,
    qubit_basis_vectors,
    time_qubit,
    to_frequency_basis,
    to_time_basis,
)


def test_two_point_dft():
    np.testing.assert_allclose(dft_matrix(2), np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-15)


@pytest.mark.parametrize("M", [4, 8, 16, 128])
def test_dft_unitary(M):
    F = dft_matrix(ModeSpace(M))
    np.testing.assert_allclose(F @ F.conj().T, np.eye(M), atol=1e-13)


@pytest.mark.parametrize("k", [0, 1, 17, 64, 127])
def test_dft_fourth_power_is_identity(k):
    F = dft_matrix(128)
    e = np.zeros(128)
    e[k] = 1
    F2 = F @ F
    # F^2 is the index reversal k -> -k mod M
    np.testing.assert_allclose(np.abs(F2 @ e), np.eye(128)[(-k) % 128], atol=1e-12)
    np.testing.assert_allclose(F2 @ (F2 @ e), e, atol=1e-12)


def test_dft_is_read_only_and_cached():
    F = dft_matrix(16)
    assert dft_matrix(ModeSpace(16)) is F
    with pytest.raises(ValueError):
        F[0, 0] = 2


@pytest.mark.parametrize(
    "M, enc, expect",
    [
        (4, frequency_qubit(1), (2, 3)),
        (4, time_qubit(0), (0, 2)),
        (128, time_qubit(63), (63, 127)),
        (128, frequency_qubit(63), (126, 127)),
    ],
)
def test_qubit_basis_vectors(M, enc, expect):
    e0, e1 = qubit_basis_vectors(ModeSpace(M), enc)
    np.testing.assert_array_equal(e0, np.eye(M)[expect[0]])
    np.testing.assert_array_equal(e1, np.eye(M)[expect[1]])


@pytest.mark.parametrize("idx", [-1, 64, 1000])
@pytest.mark.parametrize("kind", list(EncodingKind))
def test_encoding_range(idx, kind):
    with pytest.raises(EncodingRangeError):
        QubitEncoding(kind, idx).modes(ModeSpace(128))


@pytest.mark.parametrize("M", [0, 2, 3, 7, 129])
def test_mode_space_rejects_bad_sizes(M):
    with pytest.raises(ValueError):
        ModeSpace(M)


def test_mode_space_metadata():
    sp = ModeSpace(128)
    assert sp.n_qubits == 64
    assert sp.Omega == sp.delta_omega
    assert np.isclose(sp.delta_t * sp.M * sp.Omega, 2 * np.pi)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 16).map(lambda n: 2 * n), st.integers(0, 2**32 - 1))
def test_basis_change_round_trip(M, seed):
    sp = ModeSpace(M)
    A = np.random.default_rng(seed).normal(size=(M, M)) + 1j
    np.testing.assert_allclose(to_time_basis(to_frequency_basis(A, sp), sp), A, atol=1e-10)
