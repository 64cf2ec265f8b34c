import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import jv

from helpers import haar_target, same_up_to_phase
from specgate.circuits import drive_phases, full_unitary
from specgate.errors import EncodingRangeError
from specgate.metrics import PRESETS, GateTarget, phase_gate, target_matrix
from specgate.modespace import ModeSpace
from specgate.synthesis import (
    drive_for_phase,
    pep_frequency_fidelity,
    pep_frequency_mu,
    pep_frequency_success,
    solve,
    solve_epe_time,
    solve_pep_frequency,
    solve_pep_time,
    splitter_for_rx,
    trivial_gate_settings,
    xzx_angles,
)

SOLVERS = [solve_epe_time, solve_pep_time]


def _rx(x):
    c, s = math.cos(x / 2), math.sin(x / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _rz(x):
    return np.diag([np.exp(-0.5j * x), np.exp(0.5j * x)])


@pytest.mark.parametrize("solver", SOLVERS)
@pytest.mark.parametrize("k", [0, 31, 63])
def test_identity(solver, k, space):
    s = solver(PRESETS["identity"], k, space).simulate(space, PRESETS["identity"])
    assert s.fidelity == pytest.approx(1, abs=1e-12) and s.success_prob == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("solver, k", [(solve_epe_time, 0), (solve_pep_time, 5)])
def test_hadamard(solver, k, space):
    H = PRESETS["hadamard"]
    sol = solver(H, k, space)
    assert same_up_to_phase(sol.reduced(space), target_matrix(H), 1e-9)
    s = sol.simulate(space, H)
    assert s.fidelity >= 1 - 1e-10 and s.success_prob >= 1 - 1e-10


@pytest.mark.parametrize("solver", SOLVERS)
def test_haar_random_targets(solver, space, rng):
    for _ in range(100):
        t = haar_target(rng)
        k = int(rng.integers(space.n_qubits))
        s = solver(t, k, space).simulate(space, t)
        assert s.fidelity >= 1 - 1e-9 and s.success_prob >= 1 - 1e-9


@settings(max_examples=40, deadline=None)
@given(*[st.floats(-10, 10)] * 4, st.integers(0, 7), st.sampled_from(SOLVERS))
def test_exact_at_small_m(a, b, c, d, k, solver):
    sp = ModeSpace(16)
    t = GateTarget(a, b, c, d)
    s = solver(t, k, sp).simulate(sp, t)
    assert s.fidelity >= 1 - 1e-9 and s.success_prob >= 1 - 1e-9


def test_pep_x_uses_pulse_shapers_only(space):
    sol = solve_pep_time(PRESETS["pauli-x"], 9, space)
    ps1, drive, ps2 = sol.config.stages
    assert all(t.mu == 0 for t in drive.tones)
    # one full swap and one pass-through splitter
    assert sorted([ps1.beta_mag, ps2.beta_mag]) == pytest.approx([0.0, 1.0], abs=1e-12)
    assert sol.simulate(space, PRESETS["pauli-x"]).fidelity == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("nu", [0.3, math.pi / 2, 2.0, 4.0, 6.0])
@pytest.mark.parametrize("k", [0, 40])
def test_pep_phase_gate_settings(nu, k, space):
    t = phase_gate(nu)
    sol = solve_pep_time(t, k, space)
    ps1, drive, ps2 = sol.config.stages
    assert ps1.alpha_mag == 1 and ps2.alpha_mag == 1
    ph = drive_phases(drive, space)[k] - drive.phi_c
    # diag(1, e^{-i nu}) is e^{-i nu/2} Rz(nu); the phase is defined modulo pi
    assert math.remainder(ph - nu / 2, math.pi) == pytest.approx(0, abs=1e-12)
    assert sol.simulate(space, t).fidelity == pytest.approx(1, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.floats(-1.5, 1.5), st.integers(0, 63))
def test_drive_for_phase_hits_requested_phase(p, k):
    sp = ModeSpace(128)
    d = drive_for_phase(p, k, sp)
    assert drive_phases(d, sp)[k] == pytest.approx(p, abs=1e-12)
    assert d.tones[0].mu == pytest.approx(abs(p))


@settings(max_examples=100, deadline=None)
@given(*[st.floats(-10, 10)] * 4)
def test_xzx_decomposition(a, b, c, d):
    U = target_matrix(GateTarget(a, b, c, d))
    lam, xi, kap = xzx_angles(U)
    assert same_up_to_phase(_rx(lam) @ _rz(xi) @ _rx(kap), U, 1e-9)


@pytest.mark.parametrize("x", [0.0, 0.4, -0.4, math.pi, -math.pi, 2.5, -3.0])
def test_splitter_for_rx(x):
    assert same_up_to_phase(splitter_for_rx(x).block(), _rx(x), 1e-12)


# --- frequency encoding ---------------------------------------------------------------


def test_frequency_phase_gate_needs_no_modulation(space):
    t = phase_gate(0.7)
    sol = solve_pep_frequency(t, 3, space)
    assert sol.params["mu"] == 0.0
    s = sol.simulate(space, t)
    assert s.fidelity == pytest.approx(1, abs=1e-12) and s.success_prob == pytest.approx(1, abs=1e-12)


def test_frequency_hadamard(space):
    H = PRESETS["hadamard"]
    sol = solve_pep_frequency(H, 10, space)
    mu = sol.params["mu"]
    assert jv(0, mu) == pytest.approx(jv(1, mu), abs=1e-12)
    assert mu == pytest.approx(1.4347, abs=1e-4)
    s = sol.simulate(space, H)
    assert s.success_prob == pytest.approx(2 * jv(0, mu) ** 2, abs=1e-9)
    assert s.success_prob == pytest.approx(0.60, abs=0.005)
    assert s.fidelity == pytest.approx(1, abs=1e-9)


def test_frequency_x_gate(space):
    X = PRESETS["pauli-x"]
    sol = solve_pep_frequency(X, 0, space)
    assert jv(0, sol.params["mu"]) == pytest.approx(0, abs=1e-12)
    s = sol.simulate(space, X)
    assert s.success_prob == pytest.approx(jv(1, 2.404825557695773) ** 2, abs=1e-9)
    assert s.fidelity == pytest.approx(1, abs=1e-9)


@pytest.mark.parametrize("c", np.linspace(0, math.pi, 9))
def test_unit_fidelity_root(c):
    mu = pep_frequency_mu(c)
    assert jv(0, mu) * math.sin(c / 2) == pytest.approx(jv(1, mu) * math.cos(c / 2), abs=1e-12)
    assert pep_frequency_fidelity(mu, c) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("mu", [0.0, 0.7, 1.9, 3.0])
def test_frequency_predictions_match_reference_bessel(mu):
    assert pep_frequency_success(mu) == pytest.approx(jv(0, mu) ** 2 + jv(1, mu) ** 2, abs=1e-14)


def test_pep_frequency_mu_domain():
    with pytest.raises(ValueError):
        pep_frequency_mu(4.0)


# --- trivial gates and dispatch ---------------------------------------------------------


def test_trivial_z(space):
    sol = trivial_gate_settings(PRESETS["pauli-z"], space, 4)
    assert sol.method == "trivial-eom"
    d1, ps, d2 = sol.config.stages
    assert not d2.tones and np.all(ps.phases == 0)
    s = sol.simulate(space, PRESETS["pauli-z"])
    assert s.fidelity == pytest.approx(1, abs=1e-12) and s.success_prob == pytest.approx(1, abs=1e-12)


def test_trivial_x(space):
    X = PRESETS["pauli-x"]
    t = X.canonical()
    assert math.remainder(t.b - math.pi / 2, 2 * math.pi) == pytest.approx(0, abs=1e-12)
    assert math.remainder(t.d + math.pi / 2, 2 * math.pi) == pytest.approx(0, abs=1e-12)
    sol = trivial_gate_settings(X, space, 11)
    assert sol.method == "trivial-ps"
    assert all(not s.tones for s in (sol.config.stages[0], sol.config.stages[2]))
    s = sol.simulate(space, X)
    assert s.fidelity == pytest.approx(1, abs=1e-12) and s.success_prob == pytest.approx(1, abs=1e-12)


def test_trivial_y_needs_one_modulator(space):
    sol = trivial_gate_settings(PRESETS["pauli-y"], space, 2)
    assert sol.method == "trivial-ps-eom"
    assert sol.simulate(space, PRESETS["pauli-y"]).fidelity == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("b, d", [(0.3, 0.1), (2.0, 5.0)])
def test_trivial_swap_with_phase(b, d, space):
    t = GateTarget(0.2, b, math.pi, d)
    sol = trivial_gate_settings(t, space, 7)
    assert sol.method == "trivial-ps-eom"
    assert sol.simulate(space, t).fidelity == pytest.approx(1, abs=1e-12)


def test_hadamard_is_not_trivial(space):
    assert trivial_gate_settings(PRESETS["hadamard"], space) is None


def test_dispatch(space):
    H = PRESETS["hadamard"]
    assert solve(H, "epe", "time", 1, space).method == "epe-time"
    assert solve(H, "PEP", "time", 1, space).method == "pep-time"
    assert solve(H, "pep", "frequency", 1, space).method == "pep-frequency"
    with pytest.raises(NotImplementedError):
        solve(H, "epe", "frequency", 1, space)
    with pytest.raises(EncodingRangeError):
        solve(H, "epe", "time", 64, space)


def test_solutions_are_unitary(space, rng):
    t = haar_target(rng)
    for solver in SOLVERS:
        V = full_unitary(solver(t, 3, space).config, space)
        assert np.max(np.abs(V.conj().T @ V - np.eye(128))) < 1e-12
