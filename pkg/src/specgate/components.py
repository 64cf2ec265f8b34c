"""Matrix models of the pulse shaper (PS) and electro-optic phase modulator (EOM).

The PS is diagonal in the frequency basis and the EOM is diagonal in the time
basis.  Each has an exact representation in the other basis obtained by DFT
conjugation (see :mod:`specgate.modespace` for the orientation).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError
from .modespace import ModeSpace, dft_matrix


def _readonly(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class PSProfile:
    """One phase per frequency bin (radians)."""

    phases: np.ndarray

    def __post_init__(self):
        arr = _readonly(self.phases)
        if arr.ndim != 1:
            raise DimensionError("PS profile must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            raise ValueError("PS phases must be finite")
        object.__setattr__(self, "phases", arr)

    def __len__(self):
        return len(self.phases)

    @classmethod
    def flat(cls, space: ModeSpace, phase: float = 0.0) -> "PSProfile":
        return cls(np.full(space.M, phase))

    def __eq__(self, other):
        if not isinstance(other, PSProfile) or len(other) != len(self):
            return NotImplemented
        d = np.angle(np.exp(1j * (self.phases - other.phases)))
        return bool(np.all(np.abs(d) < 1e-12))


@dataclass(frozen=True)
class TwoScatterPS:
    """PS setting that couples time bin ``k`` only to ``k`` and ``k + M/2``.

    ``alpha_mag``/``beta_mag`` are the transmitted/scattered amplitudes,
    ``gamma`` a global phase and ``sign`` selects the ``+-i`` branch.
    """

    alpha_mag: float
    beta_mag: float
    gamma: float = 0.0
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.alpha_mag < -1e-12 or self.beta_mag < -1e-12:
            raise ValueError("amplitudes are magnitudes and must be >= 0")
        if abs(self.alpha_mag**2 + self.beta_mag**2 - 1.0) > 1e-12:
            raise ValueError(
                f"|alpha|^2 + |beta|^2 must be 1, got {self.alpha_mag**2 + self.beta_mag**2!r}"
            )

    @classmethod
    def from_angle(cls, angle: float, gamma: float = 0.0, sign: int = 1) -> "TwoScatterPS":
        """Splitter with ``|alpha| = cos(angle/2)``, ``|beta| = sin(angle/2)``, angle in ``[0, pi]``."""
        return cls(float(np.cos(angle / 2)), float(np.sin(angle / 2)), gamma, sign)

    @property
    def alpha(self) -> complex:
        return self.alpha_mag * np.exp(1j * self.gamma)

    @property
    def beta(self) -> complex:
        return self.sign * 1j * self.beta_mag * np.exp(1j * self.gamma)

    def block(self) -> np.ndarray:
        """The 2x2 action on ``(|t_k>, |t_{k+M/2}>)``."""
        a, b = self.alpha, self.beta
        return np.array([[a, b], [b, a]])


@dataclass(frozen=True)
class Tone:
    """``mu * sin(harmonic * 2*pi*k/M + theta)``."""

    harmonic: int
    mu: float
    theta: float = 0.0

    def __post_init__(self):
        if int(self.harmonic) != self.harmonic or self.harmonic < 1:
            raise ValueError(f"harmonic must be a positive integer, got {self.harmonic}")


@dataclass(frozen=True)
class RFDrive:
    """Sum of RF tones plus a constant phase ``phi_c``."""

    tones: tuple[Tone, ...] = field(default_factory=tuple)
    phi_c: float = 0.0

    def __post_init__(self):
        tones = tuple(t if isinstance(t, Tone) else Tone(*t) for t in self.tones)
        harmonics = [t.harmonic for t in tones]
        if len(set(harmonics)) != len(harmonics):
            raise ValueError(f"duplicate harmonics in drive: {harmonics}")
        object.__setattr__(self, "tones", tones)

    @classmethod
    def single(cls, mu: float, theta: float = 0.0, phi_c: float = 0.0) -> "RFDrive":
        return cls((Tone(1, mu, theta),), phi_c)

    @property
    def is_odd(self) -> bool:
        """Only odd harmonics: then ``phi_{k+M/2} = -phi_k``."""
        return all(t.harmonic % 2 for t in self.tones)

    def with_phi_c(self, phi_c: float) -> "RFDrive":
        return RFDrive(self.tones, phi_c)


ZERO_DRIVE = RFDrive()


# --- pulse shaper -----------------------------------------------------------


def _check_len(profile: PSProfile, space: ModeSpace | None):
    if space is not None and len(profile) != space.M:
        raise DimensionError(f"PS profile has {len(profile)} phases, mode space has M={space.M}")


def ps_frequency_matrix(profile: PSProfile, space: ModeSpace | None = None) -> np.ndarray:
    _check_len(profile, space)
    return np.diag(np.exp(1j * profile.phases))


def ps_time_matrix(profile: PSProfile, space: ModeSpace) -> np.ndarray:
    """PS in the time basis, ``F^dagger P F``.

    Element ``(k', k)`` is ``(1/M) sum_j exp(2i*pi*(k'-k)*j/M + i*phi_j)``.
    """
    _check_len(profile, space)
    F = dft_matrix(space)
    return (F.conj().T * np.exp(1j * profile.phases)) @ F


def two_scatter_phasors(alpha: complex, beta: complex, separation: int, M: int) -> np.ndarray:
    """``alpha + beta * exp(-2i*pi*m*j/M)`` for every bin ``j``.

    These are the PS transmissions that scatter ``|t_k>`` into ``|t_k>`` and
    ``|t_{k+m}>`` only; they have unit modulus (a physical phase-only PS)
    only when ``m = M/2`` and ``alpha * conj(beta)`` is imaginary.
    """
    j = np.arange(M)
    return alpha + beta * np.exp(-2j * np.pi * separation * j / M)


def two_scatter_profile(ps: TwoScatterPS, space: ModeSpace) -> PSProfile:
    z = two_scatter_phasors(ps.alpha, ps.beta, space.M // 2, space.M)
    return PSProfile(np.angle(z))


def two_scatter_time_matrix(ps: TwoScatterPS, space: ModeSpace) -> np.ndarray:
    """Closed form ``e^{i gamma} [[|a| I, +-i|b| I], [+-i|b| I, |a| I]]``."""
    h = space.M // 2
    eye = np.eye(h)
    return np.block([[ps.alpha * eye, ps.beta * eye], [ps.beta * eye, ps.alpha * eye]])


def as_profile(ps: PSProfile | TwoScatterPS, space: ModeSpace) -> PSProfile:
    return two_scatter_profile(ps, space) if isinstance(ps, TwoScatterPS) else ps


# --- electro-optic modulator ------------------------------------------------


def eom_time_phases(drive: RFDrive, space: ModeSpace) -> np.ndarray:
    """Phase written on each time bin, excluding the constant ``phi_c``."""
    x = space.time_angles()
    phi = np.zeros(space.M)
    for t in drive.tones:
        phi += t.mu * np.sin(t.harmonic * x + t.theta)
    return phi


def eom_time_matrix(drive: RFDrive, space: ModeSpace) -> np.ndarray:
    return np.diag(np.exp(1j * (eom_time_phases(drive, space) + drive.phi_c)))


def eom_frequency_matrix(drive: RFDrive, space: ModeSpace) -> np.ndarray:
    """EOM in the frequency basis, ``F E F^dagger`` (exact, includes aliasing)."""
    F = dft_matrix(space)
    e = np.exp(1j * (eom_time_phases(drive, space) + drive.phi_c))
    return (F * e) @ F.conj().T
