"""Three-component cascades and their reduction to single-qubit 2x2 blocks.

Stages are listed in signal order (first element acts first); matrices compose
right to left, so ``[EPE]`` is ``V = E2 @ P @ E1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from .components import (
    PSProfile,
    RFDrive,
    TwoScatterPS,
    as_profile,
    eom_frequency_matrix,
    eom_time_matrix,
    eom_time_phases,
    ps_frequency_matrix,
    ps_time_matrix,
)
from .errors import DimensionError, UnitarityError
from .modespace import EncodingKind, ModeSpace, QubitEncoding, dft_matrix, qubit_basis_vectors

PSLike = Union[PSProfile, TwoScatterPS]


class ConfigKind(str, Enum):
    EPE = "EPE"
    PEP = "PEP"


@dataclass(frozen=True)
class Configuration:
    kind: ConfigKind
    stages: tuple

    def __post_init__(self):
        kind = ConfigKind(self.kind)
        object.__setattr__(self, "kind", kind)
        stages = tuple(self.stages)
        if len(stages) != 3:
            raise ValueError(f"a configuration has exactly 3 stages, got {len(stages)}")
        if kind is ConfigKind.EPE:
            expected = (RFDrive, (PSProfile, TwoScatterPS), RFDrive)
        else:
            expected = ((PSProfile, TwoScatterPS), RFDrive, (PSProfile, TwoScatterPS))
        for i, (s, ty) in enumerate(zip(stages, expected)):
            if not isinstance(s, ty):
                raise TypeError(f"stage {i} of {kind.value} must be {ty}, got {type(s).__name__}")
        object.__setattr__(self, "stages", stages)

    @classmethod
    def epe(cls, drive1: RFDrive, ps: PSLike, drive2: RFDrive) -> "Configuration":
        return cls(ConfigKind.EPE, (drive1, ps, drive2))

    @classmethod
    def pep(cls, ps1: PSLike, drive: RFDrive, ps2: PSLike) -> "Configuration":
        return cls(ConfigKind.PEP, (ps1, drive, ps2))

    @classmethod
    def identity(cls, kind: ConfigKind | str, space: ModeSpace) -> "Configuration":
        ps = PSProfile.flat(space)
        d = RFDrive()
        return cls.epe(d, ps, d) if ConfigKind(kind) is ConfigKind.EPE else cls.pep(ps, d, ps)


@dataclass(frozen=True, eq=False)
class ReducedGate:
    """The 2x2 block ``W[a, b] = <a_L| V |b_L>`` of a mode-space operator."""

    w: np.ndarray
    qubit: QubitEncoding

    def __post_init__(self):
        w = np.array(self.w, dtype=complex)
        if w.shape != (2, 2):
            raise DimensionError(f"reduced gate must be 2x2, got {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("reduced gate has non-finite entries")
        w.flags.writeable = False
        object.__setattr__(self, "w", w)

    @property
    def norm2(self) -> float:
        """``Tr(W^dagger W)``."""
        return float(np.sum(np.abs(self.w) ** 2))


def stage_matrix(stage, space: ModeSpace, basis: EncodingKind) -> np.ndarray:
    basis = EncodingKind(basis)
    if isinstance(stage, RFDrive):
        return eom_time_matrix(stage, space) if basis is EncodingKind.TIME else eom_frequency_matrix(stage, space)
    prof = as_profile(stage, space)
    if len(prof) != space.M:
        raise DimensionError(f"PS profile has {len(prof)} phases, mode space has M={space.M}")
    return ps_time_matrix(prof, space) if basis is EncodingKind.TIME else ps_frequency_matrix(prof, space)


def full_unitary(
    config: Configuration, space: ModeSpace, basis: EncodingKind | str = EncodingKind.TIME
) -> np.ndarray:
    """The ``M x M`` operator of the cascade expressed in ``basis``."""
    s1, s2, s3 = (stage_matrix(s, space, basis) for s in config.stages)
    return s3 @ s2 @ s1


def reduce_to_qubit(V: np.ndarray, enc: QubitEncoding, space: ModeSpace | None = None) -> ReducedGate:
    V = np.asarray(V)
    if V.ndim != 2 or V.shape[0] != V.shape[1]:
        raise DimensionError(f"operator must be square, got {V.shape}")
    space = space or ModeSpace(V.shape[0])
    if V.shape[0] != space.M:
        raise DimensionError(f"operator is {V.shape[0]}-dimensional, mode space has M={space.M}")
    m = list(enc.modes(space))
    return ReducedGate(V[np.ix_(m, m)], enc)


def reduce_with_vectors(V: np.ndarray, v0: np.ndarray, v1: np.ndarray) -> np.ndarray:
    """``[[<v0|V|v0>, <v0|V|v1>], [<v1|V|v0>, <v1|V|v1>]]`` for arbitrary basis vectors."""
    B = np.column_stack([v0, v1])
    return B.conj().T @ V @ B


def mapped_basis_vectors(space: ModeSpace, enc: QubitEncoding, to: EncodingKind) -> tuple[np.ndarray, np.ndarray]:
    """Encoding vectors re-expressed in the basis ``to``."""
    e0, e1 = qubit_basis_vectors(space, enc)
    native = EncodingKind.FREQUENCY if enc.kind is EncodingKind.FREQUENCY else EncodingKind.TIME
    to = EncodingKind(to)
    if native is to:
        return e0, e1
    F = dft_matrix(space)
    # vectors transform with the same matrix as operators: A_freq = F A_time F^dagger
    M = F if to is EncodingKind.FREQUENCY else F.conj().T
    return M @ e0, M @ e1


# --- closed-form matrix elements (independent oracle) -----------------------


def appendix_a_pep_element(
    phi1: np.ndarray, psi: np.ndarray, phi2: np.ndarray, k: int, k_prime: int
) -> complex:
    """Time-basis element ``(P2 E P1)[k', k]`` as the explicit triple sum.

    ``phi1``/``phi2`` are the PS phases per frequency bin and ``psi`` the EOM
    phases per time bin (including any constant offset).
    """
    phi1, psi, phi2 = (np.asarray(x, dtype=float) for x in (phi1, psi, phi2))
    M = len(psi)
    j = np.arange(M)[:, None, None]
    j1 = np.arange(M)[None, :, None]
    j2 = np.arange(M)[None, None, :]
    expo = (
        psi[j]
        + phi1[j1]
        + phi2[j2]
        + 2 * np.pi / M * ((j - k) * j1 + (k_prime - j) * j2)
    )
    return complex(np.exp(1j * expo).sum() / M**2)


def appendix_a_epe_element(
    psi1: np.ndarray, phi: np.ndarray, psi2: np.ndarray, k: int, k_prime: int
) -> complex:
    """Time-basis element ``(E2 P E1)[k', k]``.

    ``e^{i(psi2_k' + psi1_k)} / M * sum_j e^{2i*pi*(k'-k)*j/M} e^{i phi_j}``.
    """
    psi1, phi, psi2 = (np.asarray(x, dtype=float) for x in (psi1, phi, psi2))
    M = len(phi)
    j = np.arange(M)
    s = np.exp(1j * (2 * np.pi * (k_prime - k) * j / M + phi)).sum()
    return complex(np.exp(1j * (psi2[k_prime] + psi1[k])) * s / M)


def drive_phases(drive: RFDrive, space: ModeSpace) -> np.ndarray:
    """Total EOM phase per time bin, constant offset included."""
    return eom_time_phases(drive, space) + drive.phi_c


def check_unitary(V: np.ndarray, tol: float = 1e-9) -> float:
    """Return ``max |V^dagger V - I|``; raise :class:`UnitarityError` above ``tol``."""
    err = float(np.max(np.abs(V.conj().T @ V - np.eye(V.shape[0]))))
    if err > tol:
        raise UnitarityError(f"operator deviates from unitarity by {err:.3e} (tolerance {tol:.1e})")
    return err
