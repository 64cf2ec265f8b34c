"""Applying one gate to many qubits at once.

Time encoding: a two-scatter PS acts identically on every time-bin qubit, so
only the EOM phase ``phi_k`` varies from qubit to qubit.  A square RF drive
makes ``phi_k`` constant over half a period and synthesizes the gate on all
``M/2`` qubits; truncated or optimized multi-tone drives approximate it.

Frequency encoding: qubits are separated by guard bins so that EOM sidebands
from one qubit do not reach its neighbours.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog, minimize

from .circuits import ConfigKind, Configuration, full_unitary, reduce_to_qubit
from .components import PSProfile, RFDrive, Tone, TwoScatterPS, as_profile, eom_time_phases, ps_time_matrix
from .metrics import GateScore, GateTarget, Thresholds, crosstalk_modes, fidelity, score, success_probability, target_matrix
from .modespace import EncodingKind, ModeSpace, QubitEncoding
from .synthesis import (
    _wrap_half,
    pep_frequency_config,
    splitter_for_rx,
    xzx_angles,
)

HADAMARD_SPLITTER = TwoScatterPS(1 / math.sqrt(2), 1 / math.sqrt(2))


@dataclass(frozen=True, eq=False)
class ParallelReport:
    per_qubit: tuple[GateScore, ...]
    thresholds: Thresholds
    config: Configuration | None
    exhausted: bool = False
    evaluations: int = 0
    notes: dict = field(default_factory=dict)

    @property
    def count_above(self) -> int:
        return sum(s.passes(self.thresholds) for s in self.per_qubit)

    @property
    def fidelities(self) -> np.ndarray:
        return np.array([s.fidelity for s in self.per_qubit])

    @property
    def success_probs(self) -> np.ndarray:
        return np.array([s.success_prob for s in self.per_qubit])


def evaluate_parallel(
    config: Configuration,
    t: GateTarget,
    kind: EncodingKind | str,
    space: ModeSpace,
    thresholds: Thresholds = Thresholds(),
) -> ParallelReport:
    """Score ``t`` on every qubit of the given encoding from one full build."""
    kind = EncodingKind(kind)
    V = full_unitary(config, space, kind)
    T = target_matrix(t)
    scores = tuple(score(reduce_to_qubit(V, QubitEncoding(kind, q), space), T) for q in range(space.n_qubits))
    return ParallelReport(scores, thresholds, config)


# --- drives -------------------------------------------------------------------


def square_drive(N: int, mu_scale: float, theta: float, phi_c: float = 0.0) -> RFDrive:
    """``mu_scale * sum_{n<=N} sin((2n+1)(x + theta)) / (2n+1)``.

    As ``N`` grows the phase tends to ``+-(pi/4) mu_scale`` on alternate
    half periods.
    """
    if N < 0:
        raise ValueError("truncation order must be >= 0")
    tones = tuple(Tone(2 * n + 1, mu_scale / (2 * n + 1), (2 * n + 1) * theta) for n in range(N + 1))
    return RFDrive(tones, phi_c)


def multitone_drive(mus, thetas, phi_c: float = 0.0) -> RFDrive:
    """``sum_n mu_n/(2n+1) sin((2n+1)(x + theta_n))`` over odd harmonics."""
    tones = tuple(
        Tone(2 * n + 1, float(m) / (2 * n + 1), (2 * n + 1) * float(th)) for n, (m, th) in enumerate(zip(mus, thetas))
    )
    return RFDrive(tones, phi_c)


# --- single-tone analytic profiles ---------------------------------------------


def qubit_phases(drive: RFDrive, space: ModeSpace) -> np.ndarray:
    return eom_time_phases(drive, space)[: space.n_qubits]


def phase_gate_fidelity_profile(drive: RFDrive, nu: float, space: ModeSpace) -> np.ndarray:
    """``cos^2(phi_k - nu/2)`` for every time-bin qubit."""
    return np.cos(qubit_phases(drive, space) - nu / 2) ** 2


def phase_parallel_config(drive: RFDrive, nu: float, kind: ConfigKind | str, space: ModeSpace) -> Configuration:
    """Cascade that applies ``diag(1, e^{-i nu})`` wherever ``phi_k = nu/2``."""
    d = drive.with_phi_c(-nu / 2)
    if ConfigKind(kind) is ConfigKind.EPE:
        return Configuration.epe(d, PSProfile.flat(space), RFDrive())
    return Configuration.pep(PSProfile.flat(space), d, PSProfile.flat(space))


def hadamard_fidelity_profile(drive: RFDrive, kind: ConfigKind | str, space: ModeSpace) -> np.ndarray:
    """``sin^4(phi_k + pi/4)`` for [EPE], ``sin^2(phi_k + pi/4)`` for [PEP]."""
    s2 = np.sin(qubit_phases(drive, space) + math.pi / 4) ** 2
    return s2**2 if ConfigKind(kind) is ConfigKind.EPE else s2


def hadamard_parallel_config(drive: RFDrive, kind: ConfigKind | str, space: ModeSpace) -> Configuration:
    """50:50 splitters with the same drive on every EOM."""
    if ConfigKind(kind) is ConfigKind.EPE:
        return Configuration.epe(drive, HADAMARD_SPLITTER, drive)
    return Configuration.pep(HADAMARD_SPLITTER, drive, HADAMARD_SPLITTER)


# --- count formulas -------------------------------------------------------------


def _window_count(r: float, M: int, reading: str) -> int:
    r = max(-1.0, min(1.0, r))
    ang = math.pi / 2 - math.asin(r)
    if reading == "outer":
        n = math.floor(M / math.pi * ang + 1e-12) + 1
    elif reading == "inner":
        n = int(M / math.pi * math.floor(ang)) + 1
    else:
        raise ValueError(f"unknown floor reading {reading!r}")
    return min(n, M // 2)


def equivalent_phase_angle(nu: float) -> float:
    """``|nu|`` reduced to ``[0, pi]``: ``diag(1, e^{-i nu})`` only depends on it.

    ``nu`` and ``nu + 2*pi`` give the same gate, and ``-nu`` is reached by
    flipping the sign of the drive.
    """
    return abs(math.remainder(nu, 2 * math.pi))


def phase_count_mu(nu: float, f_th: float) -> float:
    return equivalent_phase_angle(nu) / 2 + math.acos(math.sqrt(f_th))


def count_parallel_phase(nu: float, f_th: float, space: ModeSpace, reading: str = "outer") -> int:
    """Qubits reaching ``f_th`` for a phase gate under a single-tone drive.

    The modulation index is ``nu/2 + arccos(sqrt(f_th))`` with ``nu`` first
    reduced by :func:`equivalent_phase_angle`.  ``reading="outer"`` floors the whole ``(M/pi) * angle`` product;
    ``"inner"`` floors only the angle.
    """
    if not 0 < f_th < 1:
        raise ValueError("f_th must lie in (0, 1)")
    nu = equivalent_phase_angle(nu)
    if nu < 1e-15:
        return space.n_qubits
    a = math.acos(math.sqrt(f_th))
    return _window_count((nu / 2 - a) / (nu / 2 + a), space.M, reading)


def hadamard_delta(kind: ConfigKind | str, f_th: float) -> float:
    power = 0.25 if ConfigKind(kind) is ConfigKind.EPE else 0.5
    return math.pi / 2 - math.asin(f_th**power)


def hadamard_count_mu(kind: ConfigKind | str, f_th: float) -> float:
    return math.pi / 4 + hadamard_delta(kind, f_th)


def count_parallel_hadamard(kind: ConfigKind | str, f_th: float, space: ModeSpace, reading: str = "outer") -> int:
    """Qubits reaching ``f_th`` for a Hadamard gate under a single-tone drive."""
    if not 0 < f_th < 1:
        raise ValueError("f_th must lie in (0, 1)")
    dn = hadamard_delta(kind, f_th)
    return _window_count((math.pi / 4 - dn) / (math.pi / 4 + dn), space.M, reading)


# --- brute-force oracle ---------------------------------------------------------


def brute_force_count(fid_of_phase, mu: float, f_th: float, space: ModeSpace, refine: int = 4096) -> int:
    """Largest number of qubits with ``F >= f_th`` over the tone phase ``theta``.

    The phase of qubit ``k`` is ``mu * sin(2*pi*k/M + theta)``.  ``theta`` runs
    over ``M * refine`` equally spaced values in ``[0, 2*pi)``; for each one
    the qubits are counted directly.
    """
    M, h = space.M, space.n_qubits
    x = 2 * np.pi * np.arange(M * refine) / (M * refine)
    ok = (fid_of_phase(mu * np.sin(x)) >= f_th - 1e-12).reshape(M, refine).astype(np.int64)
    # count(theta = 2*pi*(b*refine + rho)/(M*refine)) = sum_{k<h} ok[(b + k) % M, rho]
    ext = np.concatenate([ok, ok[:h]], axis=0)
    c = np.concatenate([np.zeros((1, refine), np.int64), np.cumsum(ext, axis=0)], axis=0)
    counts = c[h : h + M] - c[:M]
    return int(counts.max())


def brute_force_count_phase(nu: float, f_th: float, space: ModeSpace, refine: int = 4096) -> int:
    return brute_force_count(lambda p: np.cos(p - nu / 2) ** 2, phase_count_mu(nu, f_th), f_th, space, refine)


def brute_force_count_hadamard(kind: ConfigKind | str, f_th: float, space: ModeSpace, refine: int = 4096) -> int:
    power = 4 if ConfigKind(kind) is ConfigKind.EPE else 2
    return brute_force_count(
        lambda p: np.sin(p + math.pi / 4) ** power, hadamard_count_mu(kind, f_th), f_th, space, refine
    )


# --- fixed-PS settings for a whole register --------------------------------------


@dataclass(frozen=True)
class RegisterPlan:
    """PS settings and the constant EOM phase(s) that realise ``t`` on every qubit.

    ``levels`` holds one phase per EOM ([EPE]: two, [PEP]: one).
    """

    kind: ConfigKind
    splitters: tuple[TwoScatterPS, ...]
    levels: tuple[float, ...]


def register_plan(t: GateTarget, kind: ConfigKind | str) -> RegisterPlan:
    kind = ConfigKind(kind)
    t = t.canonical()
    if kind is ConfigKind.EPE:
        p1 = _wrap_half(-t.d / 2 - math.pi / 4)
        p2 = _wrap_half(-t.b / 2 + math.pi / 4)
        return RegisterPlan(kind, (TwoScatterPS.from_angle(t.c),), (p1, p2))
    lam, xi, kap = xzx_angles(target_matrix(t))
    return RegisterPlan(kind, (splitter_for_rx(kap), splitter_for_rx(lam)), (-xi / 2,))


def plan_config(plan: RegisterPlan, drives: tuple[RFDrive, ...]) -> Configuration:
    if plan.kind is ConfigKind.EPE:
        d1, d2 = drives if len(drives) == 2 else (drives[0], drives[0])
        return Configuration.epe(d1, plan.splitters[0], d2)
    return Configuration.pep(plan.splitters[0], drives[0], plan.splitters[1])


def square_drive_config(
    t: GateTarget, kind: ConfigKind | str, N: int, space: ModeSpace, theta: float | None = None
) -> Configuration:
    """Truncated square drives whose half-period levels realise ``t``."""
    plan = register_plan(t, kind)
    th = math.pi / space.M if theta is None else theta
    drives = tuple(square_drive(N, 4 * p / math.pi, th) for p in plan.levels)
    return plan_config(plan, drives)


class RegisterEvaluator:
    """Exact per-qubit scores for time-bin registers with fixed PS settings.

    Equivalent to :func:`evaluate_parallel` on the time basis but caches the
    PS matrices, so only the EOM diagonals change between calls.
    """

    def __init__(self, plan: RegisterPlan, t: GateTarget, space: ModeSpace):
        self.plan, self.space = plan, space
        self.T = target_matrix(t)
        self.P = [ps_time_matrix(as_profile(s, space), space) for s in plan.splitters]
        h = space.n_qubits
        k = np.arange(h)
        self.m = np.stack([k, k + h], axis=1)  # (h, 2)
        self.calls = 0

    def reduced(self, drives: tuple[RFDrive, ...]) -> np.ndarray:
        sp = self.space
        e = [np.exp(1j * (eom_time_phases(d, sp) + d.phi_c)) for d in drives]
        m = self.m
        rows, cols = m[:, :, None], m[:, None, :]
        if self.plan.kind is ConfigKind.EPE:
            e1, e2 = (e[0], e[1]) if len(e) == 2 else (e[0], e[0])
            return e2[rows] * self.P[0][rows, cols] * e1[cols]
        V = (self.P[1] * e[0]) @ self.P[0]
        return V[rows, cols]

    def scores(self, drives: tuple[RFDrive, ...]) -> tuple[np.ndarray, np.ndarray]:
        self.calls += 1
        W = self.reduced(drives)
        nw = np.sum(np.abs(W) ** 2, axis=(1, 2))
        nt = float(np.sum(np.abs(self.T) ** 2))
        ov = np.sum(W.conj() * self.T, axis=(1, 2))
        return np.abs(ov) ** 2 / (nw * nt), nw / nt


# --- multi-tone optimizer ---------------------------------------------------------


@dataclass
class _Search:
    ev: RegisterEvaluator
    n_drives: int
    n_tones: int
    th: Thresholds
    budget: int
    used: int = 0
    best_x: np.ndarray | None = None
    best_count: int = -1
    cache: dict = field(default_factory=dict)

    def drives(self, x: np.ndarray) -> tuple[RFDrive, ...]:
        x = np.asarray(x).reshape(self.n_drives, 2, self.n_tones)
        return tuple(multitone_drive(x[i, 0], x[i, 1]) for i in range(self.n_drives))

    def evaluate(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        key = np.asarray(x, dtype=float).tobytes()
        if key in self.cache:
            return self.cache[key]
        self.used += 1
        F, P = self.ev.scores(self.drives(x))
        self.cache[key] = (F, P)
        n = int(np.sum((F >= self.th.fidelity) & (P >= self.th.success_prob)))
        if n > self.best_count:
            self.best_count, self.best_x = n, np.array(x, dtype=float)
        return F, P

    @property
    def left(self) -> int:
        return self.budget - self.used

    def deficit(self, F: np.ndarray, P: np.ndarray) -> np.ndarray:
        return np.maximum(self.th.fidelity - F, self.th.success_prob - P)


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    out, start = [], None
    for i, v in enumerate(list(mask) + [False]):
        if v and start is None:
            start = i
        elif not v and start is not None:
            out.append((start, i - 1))
            start = None
    return out


def chebyshev_amplitudes(n_tones: int, theta: float, lo: int, hi: int, level: float, space: ModeSpace) -> tuple[np.ndarray, float]:
    """Odd-harmonic amplitudes with common phase that best flatten the drive.

    Minimises ``max_k |sum_n a_n sin((2n+1)(x_k + theta)) - level|`` over time
    bins ``lo..hi`` (a linear program).  Returns ``mu_n = (2n+1) a_n`` and the
    minimax error.
    """
    x = 2 * np.pi * np.arange(lo, hi + 1) / space.M
    S = np.stack([np.sin((2 * n + 1) * (x + theta)) for n in range(n_tones)], axis=1)
    ones = np.ones((len(x), 1))
    A = np.block([[S, -ones], [-S, -ones]])
    b = np.concatenate([np.full(len(x), level), np.full(len(x), -level)])
    c = np.zeros(n_tones + 1)
    c[-1] = 1.0
    res = linprog(c, A_ub=A, b_ub=b, bounds=[(None, None)] * (n_tones + 1), method="highs")
    if not res.success:
        raise RuntimeError(f"linear program failed: {res.message}")
    return res.x[:n_tones] * (2 * np.arange(n_tones) + 1), float(res.x[-1])


class _Done(Exception):
    def __init__(self, x):
        self.x = x


def optimize_multitone(
    kind: ConfigKind | str,
    t: GateTarget,
    n_tones: int,
    thresholds: Thresholds = Thresholds(),
    space: ModeSpace = ModeSpace(),
    budget: int = 2000,
    shared: bool = True,
    warm_start: np.ndarray | None = None,
    theta_grid: int = 8,
    subproblem_fev: int = 300,
) -> ParallelReport:
    """Maximise the number of time-bin qubits passing both thresholds.

    The PS settings are fixed to the single-qubit values for ``t``, so each
    EOM should hold a constant phase level over half a period.  The search
    runs over ``(mu_n, theta_n)`` of every tone, counting exact simulations
    against ``budget``:

    1. seeds: truncated square drives on a ``theta_grid``-point phase grid
       and ``warm_start`` (a previous solution, zero-padded to ``n_tones``);
    2. for each grid phase and both window parities, minimax (linear program)
       fits of the levels over a window centred on the half period, with the
       window size bisected on whether every qubit in it passes;
    3. from the best point, Nelder-Mead on the worst deficit inside a window
       of consecutive qubits that grows one qubit at a time.

    Fully deterministic.  ``shared`` drives both [EPE] modulators with one
    signal.  ``exhausted`` is set when the budget ran out; the report then
    holds the best point seen so far.
    """
    if n_tones < 1:
        raise ValueError("n_tones must be >= 1")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    kind = ConfigKind(kind)
    plan = register_plan(t, kind)
    levels = plan.levels
    if kind is ConfigKind.EPE and shared:
        if not math.isclose(math.remainder(levels[0] - levels[1], math.pi), 0.0, abs_tol=1e-12):
            raise ValueError("a shared drive needs equal EOM phases; use shared=False")
        levels = levels[:1]
    nd = len(levels)
    h = space.n_qubits
    ev = RegisterEvaluator(plan, t, space)
    s = _Search(ev, nd, n_tones, thresholds, budget)

    def passing_run(x):
        F, P = s.evaluate(x)
        d = s.deficit(F, P)
        runs = _runs(d <= 0)
        if not runs:
            k = int(np.argmin(d))
            return (k, k), False
        return max(runs, key=lambda r: r[1] - r[0]), True

    cands: list[tuple[np.ndarray, tuple[int, int], bool]] = []
    if warm_start is not None:
        w = np.asarray(warm_start, dtype=float).reshape(nd, 2, -1)
        pad = np.zeros((nd, 2, n_tones))
        n = min(n_tones, w.shape[2])
        pad[:, :, :n] = w[:, :, :n]
        cands.append((pad.ravel(), *passing_run(pad.ravel())))
    thetas = [2 * math.pi / space.M * i / theta_grid for i in range(theta_grid)]
    for th in thetas:
        if s.left <= 0:
            break
        x = np.zeros((nd, 2, n_tones))
        x[:, 0, :] = np.array(levels)[:, None] * 4 / math.pi
        x[:, 1, :] = th
        cands.append((x.ravel(), *passing_run(x.ravel())))

    # minimax-fit seeds
    centre = h // 2
    for th in thetas:
        for left in (centre, centre - 1):
            def fit(w):
                lo, hi = left - w, centre + w
                x = np.zeros((nd, 2, n_tones))
                for di, p in enumerate(levels):
                    x[di, 0, :], _ = chebyshev_amplitudes(n_tones, th, lo, hi, p, space)
                    x[di, 1, :] = th
                return x.ravel(), (lo, hi)

            wlo, whi = 0, min(left, h - 1 - centre)
            while wlo < whi and s.left > 0:
                mid = (wlo + whi + 1) // 2
                x, (lo, hi) = fit(mid)
                F, P = s.evaluate(x)
                if np.all(s.deficit(F, P)[lo : hi + 1] <= 0):
                    wlo = mid
                    cands.append((x, *passing_run(x)))
                else:
                    whi = mid - 1

    x, (lo, hi), feasible = max(cands, key=lambda c: (c[2], c[1][1] - c[1][0]))

    def window_min(x0, a, b, maxfev):
        def g(y):
            if s.used >= s.budget:
                return 1e3
            F, P = s.evaluate(y)
            v = float(np.max(s.deficit(F, P)[a : b + 1]))
            if v <= -1e-9:
                raise _Done(np.array(y))
            return v

        x0 = np.asarray(x0, dtype=float)
        steps = np.tile(np.concatenate([np.full(n_tones, 0.05), np.full(n_tones, 0.01)]), nd)
        simplex = np.vstack([x0, x0 + np.diag(steps)])
        try:
            res = minimize(g, x0, method="Nelder-Mead", options={"initial_simplex": simplex, "maxfev": maxfev})
            return np.asarray(res.x), float(res.fun)
        except _Done as done:
            return done.x, -1e-9

    if not feasible and s.left > 0:
        x, val = window_min(x, lo, hi, min(subproblem_fev, s.left))

    while s.left > 0:
        F, P = s.evaluate(x)
        d = s.deficit(F, P)
        nxt = [c for c in ((lo - 1, hi), (lo, hi + 1)) if c[0] >= 0 and c[1] < h]
        if not nxt:
            break
        nxt.sort(key=lambda c: d[c[0]] if c[0] < lo else d[c[1]])
        grown = False
        for c in nxt:
            if s.left <= 0:
                break
            if np.all(d[c[0] : c[1] + 1] <= 0):
                lo, hi = c
                grown = True
                break
            xn, val = window_min(x, c[0], c[1], min(subproblem_fev, s.left))
            if val <= 0:
                x, (lo, hi) = xn, c
                grown = True
                break
        if not grown:
            break

    exhausted = s.left <= 0
    xb = s.best_x
    drives = s.drives(xb)
    F, P = ev.scores(drives)
    per = tuple(GateScore(float(min(f, 1.0)), float(min(p, 1.0))) for f, p in zip(F, P))
    notes = {"params": xb.reshape(nd, 2, n_tones).tolist(), "shared": nd == 1 and kind is ConfigKind.EPE}
    return ParallelReport(per, thresholds, plan_config(plan, drives), exhausted, s.used, notes)


def tone_sweep(
    kind: ConfigKind | str,
    t: GateTarget,
    max_tones: int,
    thresholds: Thresholds = Thresholds(),
    space: ModeSpace = ModeSpace(),
    budget: int = 2000,
    shared: bool = True,
) -> list[ParallelReport]:
    """Optimised reports for 1..max_tones, each warm-started from the previous."""
    out, warm = [], None
    for n in range(1, max_tones + 1):
        rep = optimize_multitone(kind, t, n, thresholds, space, budget, shared, warm)
        if out and rep.count_above < out[-1].count_above:
            raise AssertionError("warm-started optimizer lost ground")
        warm = np.array(rep.notes["params"])
        out.append(rep)
    return out


# --- frequency-encoding guard bands -------------------------------------------------


@dataclass(frozen=True)
class GuardBandRow:
    spacing: int
    n_qubits: int
    crosstalk_probability: float
    crosstalk_amplitude: float
    worst_fidelity: float
    worst_success_prob: float


def guard_band_layout(spacing: int, space: ModeSpace) -> list[tuple[int, int]]:
    """Adjacent-bin qubits separated by ``spacing`` unused bins (cyclically)."""
    if spacing < 0 or spacing + 2 > space.M:
        raise ValueError(f"guard spacing {spacing} does not fit in M={space.M}")
    pitch = 2 + spacing
    return [(q * pitch, q * pitch + 1) for q in range(space.M // pitch)]


def guard_band_config(t: GateTarget, spacing: int, space: ModeSpace, mu: float) -> Configuration:
    """[PEP] settings for ``t`` on every qubit of the layout, one shared tone."""
    t = t.canonical()
    one = pep_frequency_config(t, 0, space, mu)  # per-qubit pattern on bins 0, 1
    ph1, ph2 = np.zeros(space.M), np.zeros(space.M)
    for m in guard_band_layout(spacing, space):
        ph1[list(m)] = one.stages[0].phases[[0, 1]]
        ph2[list(m)] = one.stages[2].phases[[0, 1]]
    return Configuration.pep(PSProfile(ph1), RFDrive.single(mu, 0.0, t.a), PSProfile(ph2))


def guard_band_scan(
    t: GateTarget,
    kind: ConfigKind | str,
    max_spacing: int,
    space: ModeSpace = ModeSpace(),
    mu: float | None = None,
) -> list[GuardBandRow]:
    """Nearest-neighbour crosstalk and worst per-qubit scores versus guard spacing.

    Every qubit of the layout is driven at once.  Only [PEP] has closed-form
    frequency-bin settings; [EPE] raises ``NotImplementedError``.
    """
    from .synthesis import pep_frequency_mu

    if ConfigKind(kind) is not ConfigKind.PEP:
        raise NotImplementedError("guard-band scans need closed-form frequency settings, available for PEP only")
    if max_spacing + 2 > space.M:
        raise ValueError(f"spacing {max_spacing} exceeds M={space.M}")
    t = t.canonical()
    mu = pep_frequency_mu(t.c) if mu is None else mu
    T = target_matrix(t)
    rows = []
    for g in range(max_spacing + 1):
        layout = guard_band_layout(g, space)
        V = full_unitary(guard_band_config(t, g, space, mu), space, EncodingKind.FREQUENCY)
        xp = xa = 0.0
        n = len(layout)
        if n > 1:
            for q in range(n):
                for nb in ((q + 1) % n, (q - 1) % n):
                    if nb == q:
                        continue
                    xp = max(xp, crosstalk_modes(V, layout[q], layout[nb], "probability"))
                    xa = max(xa, crosstalk_modes(V, layout[q], layout[nb], "amplitude"))
        fs, ps = [], []
        for m in layout:
            W = V[np.ix_(m, m)]
            fs.append(fidelity(W, T))
            ps.append(success_probability(W, T))
        rows.append(GuardBandRow(g, n, xp, xa, min(fs), min(ps)))
    return rows


def first_spacing_below(rows: list[GuardBandRow], limit: float = 1e-3, norm: str = "probability") -> int | None:
    attr = "crosstalk_probability" if norm == "probability" else "crosstalk_amplitude"
    for r in rows:
        if getattr(r, attr) < limit:
            return r.spacing
    return None
