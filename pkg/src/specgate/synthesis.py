"""Closed-form single-qubit synthesis for the three-component cascades.

* ``solve_epe_time``: EOM, two-scatter PS, EOM on a time-bin qubit (exact).
* ``solve_pep_time``: PS, EOM, PS on a time-bin qubit, Mach-Zehnder form (exact).
* ``solve_pep_frequency``: PS, EOM, PS on a frequency-bin qubit; unit fidelity
  at the cost of success probability ``J0(mu)^2 + J1(mu)^2``.
* ``trivial_gate_settings``: phase gates and bit flips that need fewer parts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .bessel import besselj
from .circuits import Configuration, full_unitary, reduce_to_qubit
from .components import PSProfile, RFDrive, TwoScatterPS
from .metrics import GateScore, GateTarget, fidelity, score, target_matrix
from .modespace import EncodingKind, ModeSpace, QubitEncoding, frequency_qubit, time_qubit

_EPS = 1e-12


@dataclass(frozen=True)
class SynthesisSolution:
    config: Configuration
    predicted: GateScore
    qubit: QubitEncoding
    method: str = ""
    params: dict = field(default_factory=dict, compare=False)

    @property
    def basis(self) -> EncodingKind:
        return self.qubit.kind

    def simulate(self, space: ModeSpace, target: GateTarget) -> GateScore:
        V = full_unitary(self.config, space, self.basis)
        return score(reduce_to_qubit(V, self.qubit, space), target)

    def reduced(self, space: ModeSpace) -> np.ndarray:
        return reduce_to_qubit(full_unitary(self.config, space, self.basis), self.qubit, space).w


def _wrap_half(x: float) -> float:
    """Reduce modulo ``pi`` into ``(-pi/2, pi/2]``."""
    y = math.fmod(x + math.pi / 2, math.pi)
    if y <= 0:
        y += math.pi
    return y - math.pi / 2


def _wrap_pi(x: float) -> float:
    """Reduce modulo ``2*pi`` into ``(-pi, pi]``."""
    y = math.fmod(x + math.pi, 2 * math.pi)
    if y <= 0:
        y += 2 * math.pi
    return y - math.pi


def drive_for_phase(phase: float, k: int, space: ModeSpace, phi_c: float = 0.0) -> RFDrive:
    """Single-tone drive whose phase at time bin ``k`` equals ``phase``.

    The tone peaks at ``k`` (``|sin| = 1``), which gives the smallest
    modulation index that reaches the requested phase.
    """
    theta = math.pi / 2 - 2 * math.pi * k / space.M
    if phase < 0:
        theta += math.pi
    return RFDrive.single(abs(phase), math.fmod(theta, 2 * math.pi) % (2 * math.pi), phi_c)


def _global_phase(W0: np.ndarray, T: np.ndarray) -> float:
    return float(np.angle(np.sum(W0.conj() * T)))


def _check_k(k: int, space: ModeSpace) -> None:
    time_qubit(k).modes(space)


# --- [EPE] time ---------------------------------------------------------------


def solve_epe_time(t: GateTarget, k: int, space: ModeSpace) -> SynthesisSolution:
    """Exact synthesis of ``t`` on time-bin qubit ``k`` with two single-tone EOMs."""
    _check_k(k, space)
    t = t.canonical()
    ps = TwoScatterPS.from_angle(t.c)
    p1 = _wrap_half(-t.d / 2 - math.pi / 4)
    p2 = _wrap_half(-t.b / 2 + math.pi / 4)
    al, be = ps.alpha_mag, ps.beta_mag
    W0 = np.array(
        [
            [al * np.exp(1j * (p1 + p2)), 1j * be * np.exp(1j * (p2 - p1))],
            [1j * be * np.exp(1j * (p1 - p2)), al * np.exp(-1j * (p1 + p2))],
        ]
    )
    phi_c = _global_phase(W0, target_matrix(t))
    cfg = Configuration.epe(drive_for_phase(p1, k, space, phi_c), ps, drive_for_phase(p2, k, space))
    return SynthesisSolution(
        cfg,
        GateScore(1.0, 1.0),
        time_qubit(k),
        "epe-time",
        {"phase1": p1, "phase2": p2, "phi_c": phi_c, "ps_angle": t.c},
    )


# --- [PEP] time ---------------------------------------------------------------


def _rx(x: float) -> np.ndarray:
    c, s = math.cos(x / 2), math.sin(x / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _rz(x: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * x), np.exp(0.5j * x)])


def xzx_angles(U: np.ndarray) -> tuple[float, float, float]:
    """``(lam, xi, kap)`` with ``U ~ Rx(lam) Rz(xi) Rx(kap)`` up to global phase."""
    Hd = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    Z = Hd @ np.asarray(U, dtype=complex) @ Hd
    Z = Z / np.sqrt(np.linalg.det(Z))
    p, q = Z[0, 0], Z[1, 0]
    xi = 2 * math.atan2(abs(q), abs(p))
    if abs(q) < 1e-14:
        lam, kap = 0.0, -2 * float(np.angle(p))
    elif abs(p) < 1e-14:
        lam, kap = 2 * float(np.angle(q)) + math.pi, 0.0
    else:
        s = -2 * float(np.angle(p))
        dif = 2 * float(np.angle(q)) + math.pi
        lam, kap = (s + dif) / 2, (s - dif) / 2
    cands = [(lam, xi, kap), (lam + math.pi, -xi, kap - math.pi)]
    cands = [tuple(_wrap_pi(v) for v in c) for c in cands]
    return min(cands, key=lambda c: abs(c[0]) + abs(c[2]))


def splitter_for_rx(x: float) -> TwoScatterPS:
    """Two-scatter PS whose block equals ``Rx(x)`` up to a sign."""
    t = abs(x)
    if t > math.pi:
        t = 2 * math.pi - t
        x = -x
    a, b = math.cos(t / 2), math.sin(t / 2)
    sign = -1 if x >= 0 else 1
    if b < _EPS:
        a, b, sign = 1.0, 0.0, 1
    if a < _EPS:
        a = 0.0
    return TwoScatterPS(a, b, 0.0, sign)


def solve_pep_time(t: GateTarget, k: int, space: ModeSpace) -> SynthesisSolution:
    """Exact synthesis on time-bin qubit ``k`` as splitter, phase, splitter."""
    _check_k(k, space)
    t = t.canonical()
    T = target_matrix(t)
    lam, xi, kap = xzx_angles(T)
    ps1, ps2 = splitter_for_rx(kap), splitter_for_rx(lam)
    phase = -xi / 2
    D = np.diag([np.exp(1j * phase), np.exp(-1j * phase)])
    W0 = ps2.block() @ D @ ps1.block()
    phi_c = _global_phase(W0, T)
    cfg = Configuration.pep(ps1, drive_for_phase(phase, k, space, phi_c), ps2)
    return SynthesisSolution(
        cfg,
        GateScore(1.0, 1.0),
        time_qubit(k),
        "pep-time",
        {"rx1": kap, "rz": xi, "rx2": lam, "phase": phase, "phi_c": phi_c},
    )


# --- [PEP] frequency ----------------------------------------------------------


def pep_frequency_mu(c: float) -> float:
    """Modulation index with unit fidelity: ``J0(mu) sin(c/2) = J1(mu) cos(c/2)``."""
    c = float(c)
    if not -1e-15 <= c <= math.pi + 1e-12:
        raise ValueError(f"c must lie in [0, pi], got {c}")
    if c < _EPS:
        return 0.0
    sh, ch = math.sin(c / 2), math.cos(c / 2)
    g = lambda m: besselj(0, m) * sh - besselj(1, m) * ch
    return brentq(g, 0.0, 3.5, xtol=1e-13)


def pep_frequency_success(mu: float) -> float:
    return besselj(0, mu) ** 2 + besselj(1, mu) ** 2


def pep_frequency_fidelity(mu: float, c: float) -> float:
    j0, j1 = besselj(0, mu), besselj(1, mu)
    return (j0 * math.cos(c / 2) + j1 * math.sin(c / 2)) ** 2 / (j0**2 + j1**2)


def pep_frequency_block(mu: float, theta: float, phi_c: float) -> np.ndarray:
    """Ideal (infinite-mode) EOM action on one adjacent-bin pair."""
    j0, j1 = besselj(0, mu), besselj(1, mu)
    return np.exp(1j * phi_c) * np.array(
        [[j0, -np.exp(-1j * theta) * j1], [np.exp(1j * theta) * j1, j0]]
    )


def pep_frequency_config(
    t: GateTarget, j: int, space: ModeSpace, mu: float, theta: float = 0.0
) -> Configuration:
    """PS phases that align every entry of the reduced block with ``t``.

    Only the two bins of qubit ``j`` are programmed; every other bin is left at
    zero phase.
    """
    t = t.canonical()
    m0, m1 = frequency_qubit(j).modes(space)
    ph1 = np.zeros(space.M)
    ph2 = np.zeros(space.M)
    ph1[m1] = theta + t.d
    ph2[m0] = -(t.b + t.d) / 2
    ph2[m1] = (t.b - t.d) / 2 - theta
    return Configuration.pep(PSProfile(ph1), RFDrive.single(mu, theta, t.a), PSProfile(ph2))


def solve_pep_frequency(
    t: GateTarget, j: int, space: ModeSpace, mu: float | None = None
) -> SynthesisSolution:
    """Unit-fidelity synthesis on frequency-bin qubit ``j``.

    ``mu`` defaults to the unit-fidelity root; passing it explicitly gives the
    fidelity/success trade-off at that modulation index.
    """
    t = t.canonical()
    if mu is None:
        mu = pep_frequency_mu(t.c)
    cfg = pep_frequency_config(t, j, space, mu)
    pred = GateScore(pep_frequency_fidelity(mu, t.c), pep_frequency_success(mu))
    return SynthesisSolution(cfg, pred, frequency_qubit(j), "pep-frequency", {"mu": mu, "theta": 0.0})


# --- trivial gates ------------------------------------------------------------


def _is_mult(x: float, period: float, tol: float = 1e-9) -> bool:
    r = math.fmod(x, period)
    return min(abs(r), abs(abs(r) - period)) < tol


def trivial_gate_settings(t: GateTarget, space: ModeSpace, k: int = 0) -> SynthesisSolution | None:
    """Reduced-resource settings on time-bin qubit ``k``, or ``None``.

    Diagonal targets need one EOM; ``c = pi`` targets need the PS alone when
    ``b - d = pi (mod 2*pi)`` and one PS plus one EOM otherwise.
    """
    _check_k(k, space)
    t = t.canonical()
    T = target_matrix(t)
    zero = RFDrive()
    flat = PSProfile.flat(space)
    if t.c < 1e-12:
        p = _wrap_half(-(t.b + t.d) / 2)
        W0 = np.diag([np.exp(1j * p), np.exp(-1j * p)])
        cfg = Configuration.epe(drive_for_phase(p, k, space, _global_phase(W0, T)), flat, zero)
        return SynthesisSolution(cfg, GateScore(1.0, 1.0), time_qubit(k), "trivial-eom", {"phase": p})
    if abs(t.c - math.pi) < 1e-12:
        swap = TwoScatterPS(0.0, 1.0, 0.0, 1)
        if _is_mult(t.b - t.d - math.pi, 2 * math.pi):
            gamma = _global_phase(swap.block(), T)
            ps = TwoScatterPS(0.0, 1.0, gamma, 1)
            cfg = Configuration.epe(zero, ps, zero)
            return SynthesisSolution(cfg, GateScore(1.0, 1.0), time_qubit(k), "trivial-ps", {"gamma": gamma})
        p = _wrap_half(math.pi / 2 - (t.b - t.d) / 2)
        W0 = np.diag([np.exp(1j * p), np.exp(-1j * p)]) @ swap.block()
        drive = drive_for_phase(p, k, space, _global_phase(W0, T))
        cfg = Configuration.epe(zero, swap, drive)
        return SynthesisSolution(cfg, GateScore(1.0, 1.0), time_qubit(k), "trivial-ps-eom", {"phase": p})
    return None


def solve(t: GateTarget, config: str, encoding: str, qubit: int, space: ModeSpace) -> SynthesisSolution:
    """Dispatch on configuration kind and encoding."""
    config, encoding = config.upper(), EncodingKind(encoding).value
    if encoding == "time":
        if config == "EPE":
            return solve_epe_time(t, qubit, space)
        if config == "PEP":
            return solve_pep_time(t, qubit, space)
    elif config == "PEP":
        return solve_pep_frequency(t, qubit, space)
    raise NotImplementedError(f"no closed-form solver for {config} with {encoding} encoding")
