"""Structural invariant suite, run by ``specgate selftest`` and the test suite."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bessel import bessel_sideband_column
from .circuits import (
    Configuration,
    appendix_a_epe_element,
    appendix_a_pep_element,
    drive_phases,
    full_unitary,
    reduce_to_qubit,
)
from .components import (
    PSProfile,
    RFDrive,
    Tone,
    TwoScatterPS,
    eom_frequency_matrix,
    eom_time_matrix,
    ps_frequency_matrix,
    ps_time_matrix,
    two_scatter_phasors,
    two_scatter_profile,
    two_scatter_time_matrix,
)
from .metrics import PRESETS, fidelity, phase_gate
from .modespace import ModeSpace, dft_matrix, time_qubit
from .parallel import (
    hadamard_fidelity_profile,
    hadamard_parallel_config,
    phase_gate_fidelity_profile,
    phase_parallel_config,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _max_unitarity_error(U: np.ndarray) -> float:
    return float(np.max(np.abs(U.conj().T @ U - np.eye(len(U)))))


def random_drive(rng: np.random.Generator, n_tones: int = 2, odd: bool = True) -> RFDrive:
    harm = [2 * n + 1 for n in range(n_tones)] if odd else list(range(1, n_tones + 1))
    tones = tuple(Tone(h, float(rng.uniform(-2, 2)), float(rng.uniform(0, 2 * math.pi))) for h in harm)
    return RFDrive(tones, float(rng.uniform(0, 2 * math.pi)))


def random_profile(rng: np.random.Generator, M: int) -> PSProfile:
    return PSProfile(rng.uniform(0, 2 * math.pi, M))


def random_splitter(rng: np.random.Generator) -> TwoScatterPS:
    return TwoScatterPS.from_angle(float(rng.uniform(0, math.pi)), float(rng.uniform(0, 2 * math.pi)), int(rng.choice([-1, 1])))


def check_dft_unitarity() -> CheckResult:
    err = max(_max_unitarity_error(dft_matrix(M)) for M in (4, 8, 16, 128, 512))
    return CheckResult("dft unitarity", bool(err < 1e-12), f"max error {err:.2e}")


def check_component_unitarity(seed: int = 11) -> CheckResult:
    rng = np.random.default_rng(seed)
    err = 0.0
    for M in (4, 8, 16, 128):
        sp = ModeSpace(M)
        for _ in range(5):
            prof, drv = random_profile(rng, M), random_drive(rng, 3, odd=False)
            for U in (
                ps_frequency_matrix(prof),
                ps_time_matrix(prof, sp),
                eom_time_matrix(drv, sp),
                eom_frequency_matrix(drv, sp),
            ):
                err = max(err, _max_unitarity_error(U))
    return CheckResult("component unitarity", bool(err < 1e-11), f"max error {err:.2e}")


def check_two_scatter(seed: int = 12) -> CheckResult:
    rng = np.random.default_rng(seed)
    leak = match = 0.0
    for M in (4, 8, 16, 128):
        sp = ModeSpace(M)
        h = M // 2
        mask = np.eye(M, dtype=bool) | np.eye(M, k=h, dtype=bool) | np.eye(M, k=-h, dtype=bool)
        for _ in range(4):
            ps = random_splitter(rng)
            P = ps_time_matrix(two_scatter_profile(ps, sp), sp)
            leak = max(leak, float(np.max(np.abs(P[~mask]))))
            match = max(match, float(np.max(np.abs(P - two_scatter_time_matrix(ps, sp)))))
    ok = leak < 1e-12 and match < 1e-12
    return CheckResult("two-scatter exactness", ok, f"leak {leak:.2e}, block mismatch {match:.2e}")


def check_two_scatter_separation(seed: int = 13) -> CheckResult:
    rng = np.random.default_rng(seed)
    M = 16
    ps = TwoScatterPS.from_angle(1.0, 0.4)
    unit = float(np.max(np.abs(np.abs(two_scatter_phasors(ps.alpha, ps.beta, M // 2, M)) - 1)))
    worst = math.inf
    for m in range(1, M // 2):
        ps = random_splitter(rng)
        if ps.beta_mag < 1e-3 or ps.alpha_mag < 1e-3:
            continue
        dev = float(np.max(np.abs(np.abs(two_scatter_phasors(ps.alpha, ps.beta, m, M)) - 1)))
        worst = min(worst, dev)
    ok = unit < 1e-12 and worst > 1e-6
    return CheckResult(
        "two-scatter separation forced to M/2", ok, f"|e^(i phi)|-1 at M/2: {unit:.2e}; min deviation elsewhere {worst:.2e}"
    )


def check_appendix_a(seed: int = 14, trials: int = 20) -> CheckResult:
    rng = np.random.default_rng(seed)
    err = 0.0
    for M in (4, 8, 16):
        sp = ModeSpace(M)
        for _ in range(trials):
            p1, p2 = random_profile(rng, M), random_profile(rng, M)
            d1, d2 = random_drive(rng, 2, odd=False), random_drive(rng, 2, odd=False)
            Vp = full_unitary(Configuration.pep(p1, d1, p2), sp, "time")
            Ve = full_unitary(Configuration.epe(d1, p1, d2), sp, "time")
            psi1, psi2 = drive_phases(d1, sp), drive_phases(d2, sp)
            k, kp = int(rng.integers(M)), int(rng.integers(M))
            err = max(
                err,
                abs(Vp[kp, k] - appendix_a_pep_element(p1.phases, psi1, p2.phases, k, kp)),
                abs(Ve[kp, k] - appendix_a_epe_element(psi1, p1.phases, psi2, k, kp)),
            )
    return CheckResult("closed-form [PEP]/[EPE] elements", bool(err < 1e-12), f"max error {err:.2e}")


def check_jacobi_anger(seed: int = 15) -> CheckResult:
    rng = np.random.default_rng(seed)
    sp = ModeSpace(128)
    err = 0.0
    for mu in np.linspace(0.0, 3.0, 7):
        th, pc = float(rng.uniform(0, 2 * math.pi)), float(rng.uniform(0, 2 * math.pi))
        E = eom_frequency_matrix(RFDrive.single(float(mu), th, pc), sp)
        col = bessel_sideband_column(float(mu), th, pc, 10)
        j = int(rng.integers(sp.M))
        for kk in range(-10, 11):
            err = max(err, abs(E[(j + kk) % sp.M, j] - col[10 + kk]))
    return CheckResult("Bessel sidebands vs exact EOM", bool(err < 1e-8), f"max error {err:.2e}")


def check_profiles(seed: int = 16, trials: int = 50) -> CheckResult:
    rng = np.random.default_rng(seed)
    sp = ModeSpace(128)
    H = PRESETS["hadamard"]
    err = 0.0
    for _ in range(trials):
        d = RFDrive.single(float(rng.uniform(0, 3)), float(rng.uniform(0, 2 * math.pi)))
        nu = float(rng.uniform(0, 2 * math.pi))
        for kind in ("EPE", "PEP"):
            V = full_unitary(phase_parallel_config(d, nu, kind, sp), sp, "time")
            sim = np.array([fidelity(reduce_to_qubit(V, time_qubit(k), sp), phase_gate(nu)) for k in range(sp.n_qubits)])
            err = max(err, float(np.max(np.abs(sim - phase_gate_fidelity_profile(d, nu, sp)))))
            V = full_unitary(hadamard_parallel_config(d, kind, sp), sp, "time")
            sim = np.array([fidelity(reduce_to_qubit(V, time_qubit(k), sp), H) for k in range(sp.n_qubits)])
            err = max(err, float(np.max(np.abs(sim - hadamard_fidelity_profile(d, kind, sp)))))
    return CheckResult("analytic parallel profiles vs simulation", bool(err < 1e-9), f"max error {err:.2e}")


CHECKS: list[Callable[[], CheckResult]] = [
    check_dft_unitarity,
    check_component_unitarity,
    check_two_scatter,
    check_two_scatter_separation,
    check_appendix_a,
    check_jacobi_anger,
    check_profiles,
]


def run_all() -> list[CheckResult]:
    return [c() for c in CHECKS]
