import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import same_up_to_phase
from specgate.circuits import Configuration, ReducedGate, full_unitary
from specgate.components import TwoScatterPS
from specgate.errors import UndefinedFidelityError
from specgate.metrics import (
    PRESETS,
    GateScore,
    GateTarget,
    Thresholds,
    crosstalk,
    crosstalk_modes,
    fidelity,
    phase_gate,
    preset,
    score,
    success_probability,
    target_matrix,
)
from specgate.modespace import ModeSpace, frequency_qubit, time_qubit
from specgate.parallel import guard_band_config
from specgate.synthesis import solve_pep_frequency

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]])
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1, -1])
H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
angle = st.floats(-20, 20, allow_nan=False)


def test_identity_parameters():
    np.testing.assert_allclose(target_matrix(GateTarget(0, 0, 0, 0)), I2)


@pytest.mark.parametrize("name, U", [("identity", I2), ("pauli-x", X), ("pauli-y", Y), ("pauli-z", Z), ("hadamard", H)])
def test_presets_are_standard_gates(name, U):
    assert same_up_to_phase(target_matrix(PRESETS[name]), U, 1e-14)
    assert preset(name) is PRESETS[name]


@pytest.mark.parametrize("nu", [0.1, math.pi / 2, math.pi, 5.0])
def test_phase_gate(nu):
    assert same_up_to_phase(target_matrix(phase_gate(nu)), np.diag([1, np.exp(-1j * nu)]), 1e-14)
    assert preset("phase", nu) == phase_gate(nu)


def test_preset_errors():
    with pytest.raises(ValueError):
        preset("phase")
    with pytest.raises(KeyError):
        preset("toffoli")


@settings(max_examples=100, deadline=None)
@given(angle, angle, angle, angle)
def test_canonical_form_keeps_the_matrix(a, b, c, d):
    t = GateTarget(a, b, c, d)
    tc = t.canonical()
    assert 0 <= tc.c <= math.pi
    assert all(0 <= v < 2 * math.pi for v in (tc.a, tc.b, tc.d))
    np.testing.assert_allclose(target_matrix(tc), target_matrix(t), atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(angle, angle, angle, angle)
def test_from_matrix_inverts(a, b, c, d):
    U = target_matrix(GateTarget(a, b, c, d))
    np.testing.assert_allclose(target_matrix(GateTarget.from_matrix(U)), U, atol=1e-12)


def test_success_probability_examples():
    assert success_probability(H, PRESETS["hadamard"]) == pytest.approx(1.0)
    assert success_probability(I2 / math.sqrt(2), I2) == pytest.approx(0.5)


@settings(max_examples=50, deadline=None)
@given(angle, angle, angle, angle, angle)
def test_fidelity_ignores_global_phase(a, b, c, d, chi):
    t = GateTarget(a, b, c, d)
    assert fidelity(np.exp(1j * chi) * target_matrix(t), t) == pytest.approx(1.0, abs=1e-12)


def test_fidelity_of_orthogonal_gates():
    assert fidelity(X, Z) == pytest.approx(0.0, abs=1e-15)


def test_fidelity_of_zero_gate():
    with pytest.raises(UndefinedFidelityError):
        fidelity(np.zeros((2, 2)), I2)
    with pytest.raises(ZeroDivisionError):
        fidelity(ReducedGate(np.zeros((2, 2)), time_qubit(0)), I2)


def test_x_gate_at_first_bessel_zero(space):
    sol = solve_pep_frequency(PRESETS["pauli-x"], 0, space, 2.405)
    assert sol.simulate(space, PRESETS["pauli-x"]).fidelity == pytest.approx(1.0, abs=1e-6)


def test_gate_score_validation():
    with pytest.raises(ValueError):
        GateScore(1.2, 0.5)
    with pytest.raises(ValueError):
        GateScore(0.5, -0.1)
    s = score(H, PRESETS["hadamard"])
    assert s.passes(Thresholds())
    assert not GateScore(0.98, 1.0).passes(Thresholds(0.99, 0.9999))
    assert not GateScore(1.0, 0.99).passes(Thresholds(0.99, 0.9999))


@pytest.mark.parametrize("norm", ["probability", "amplitude"])
def test_crosstalk_of_identity(norm):
    assert crosstalk(np.eye(128), time_qubit(0), time_qubit(1), norm=norm) == 0.0


def test_crosstalk_of_two_scatter_splitter(space):
    V = full_unitary(Configuration.epe(_zero(), TwoScatterPS.from_angle(1.0, 0.2), _zero()), space)
    worst = max(crosstalk(V, time_qubit(a), time_qubit(b), space) for a in range(0, 64, 7) for b in range(1, 64, 9) if a != b)
    assert worst < 1e-12


def test_crosstalk_guard_six(space):
    V = full_unitary(guard_band_config(PRESETS["pauli-x"], 6, space, 2.4048), space, "frequency")
    for norm in ("probability", "amplitude"):
        assert crosstalk(V, frequency_qubit(0), frequency_qubit(4), space, norm) < 1e-3
        assert crosstalk(V, frequency_qubit(4), frequency_qubit(0), space, norm) < 1e-3


def test_crosstalk_errors():
    with pytest.raises(ValueError):
        crosstalk(np.eye(8), time_qubit(0), frequency_qubit(1))
    with pytest.raises(ValueError):
        crosstalk(np.eye(8), time_qubit(1), time_qubit(1))
    with pytest.raises(ValueError):
        crosstalk_modes(np.eye(8), (0, 1), (2, 3), norm="max")


def test_crosstalk_norms_differ():
    V = np.eye(4, dtype=complex)
    V[2, 0] = V[3, 0] = 0.1
    assert crosstalk_modes(V, (0, 1), (2, 3), "amplitude") == pytest.approx(0.1)
    assert crosstalk_modes(V, (0, 1), (2, 3), "probability") == pytest.approx(0.02)


def _zero():
    from specgate.components import RFDrive

    return RFDrive()
