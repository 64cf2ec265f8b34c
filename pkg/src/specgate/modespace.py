"""Finite mode space shared by the time and frequency bases.

All physics is done in dimensionless mode indices: phases only ever depend on
``2*pi*k/M``.  The physical spacings are carried as metadata.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import EncodingRangeError


class EncodingKind(str, Enum):
    FREQUENCY = "frequency"  # adjacent bins {2j, 2j+1}
    TIME = "time"  # antipodal bins {k, k + M/2}


@dataclass(frozen=True)
class ModeSpace:
    """``M`` optical modes, addressable either as time bins or frequency bins.

    ``delta_omega`` is the frequency-bin spacing and ``Omega`` the RF fundamental
    (both rad/s).  When ``Omega`` is omitted it is taken equal to the bin spacing,
    which is the matching condition under which an EOM sideband lands exactly
    on the neighbouring bin.
    """

    M: int = 128
    delta_omega: float = 2 * np.pi * 10e9
    Omega: float | None = None

    def __post_init__(self):
        if not isinstance(self.M, (int, np.integer)) or isinstance(self.M, bool):
            raise TypeError(f"M must be an integer, got {self.M!r}")
        if self.M < 4 or self.M % 2:
            raise ValueError(f"M must be even and >= 4, got {self.M}")
        if self.Omega is None:
            object.__setattr__(self, "Omega", self.delta_omega)

    @property
    def n_qubits(self) -> int:
        return self.M // 2

    @property
    def delta_t(self) -> float:
        """Time-bin width: one RF period divided into ``M`` bins."""
        return 2 * np.pi / (self.Omega * self.M)

    def time_angles(self) -> np.ndarray:
        """``2*pi*k/M`` for every time bin ``k``."""
        return 2 * np.pi * np.arange(self.M) / self.M


@dataclass(frozen=True)
class QubitEncoding:
    kind: EncodingKind
    index: int

    def __post_init__(self):
        object.__setattr__(self, "kind", EncodingKind(self.kind))

    def modes(self, space: ModeSpace) -> tuple[int, int]:
        """Mode indices carrying ``|0_L>`` and ``|1_L>``."""
        if not 0 <= self.index < space.n_qubits:
            raise EncodingRangeError(
                f"qubit index {self.index} outside [0, {space.n_qubits - 1}] for M={space.M}"
            )
        if self.kind is EncodingKind.FREQUENCY:
            return 2 * self.index, 2 * self.index + 1
        return self.index, self.index + space.M // 2


def frequency_qubit(j: int) -> QubitEncoding:
    return QubitEncoding(EncodingKind.FREQUENCY, j)


def time_qubit(k: int) -> QubitEncoding:
    return QubitEncoding(EncodingKind.TIME, k)


@lru_cache(maxsize=16)
def _dft(M: int) -> np.ndarray:
    jk = np.outer(np.arange(M), np.arange(M))
    F = np.exp(-2j * np.pi * jk / M) / np.sqrt(M)
    F.flags.writeable = False
    return F


def dft_matrix(space: ModeSpace | int) -> np.ndarray:
    """Unitary DFT with ``F[j, k] = exp(-2i*pi*j*k/M) / sqrt(M)``.

    Operators change basis as ``A_freq = F A_time F^dagger``; this is the
    orientation under which a sinusoidal EOM produces the sideband series
    ``sum_k exp(i*k*theta) J_k(mu) |w_{j+k}>``.  The returned array is cached
    and read-only.
    """
    M = space.M if isinstance(space, ModeSpace) else int(space)
    if M < 1:
        raise ValueError("DFT size must be positive")
    return _dft(M)


def to_frequency_basis(A: np.ndarray, space: ModeSpace) -> np.ndarray:
    """Re-express a time-basis operator in the frequency basis: ``F A F^dagger``."""
    F = dft_matrix(space)
    return F @ A @ F.conj().T


def to_time_basis(A: np.ndarray, space: ModeSpace) -> np.ndarray:
    """Inverse of :func:`to_frequency_basis`: ``F^dagger A F``."""
    F = dft_matrix(space)
    return F.conj().T @ A @ F


def qubit_basis_vectors(space: ModeSpace, enc: QubitEncoding) -> tuple[np.ndarray, np.ndarray]:
    """Standard basis vectors for ``|0_L>, |1_L>`` in the encoding's native basis."""
    m0, m1 = enc.modes(space)
    e0 = np.zeros(space.M, dtype=complex)
    e1 = np.zeros(space.M, dtype=complex)
    e0[m0] = 1.0
    e1[m1] = 1.0
    return e0, e1
