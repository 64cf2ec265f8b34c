"""Gate targets and the scores used to compare a reduced gate with a target."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .circuits import ReducedGate
from .errors import UndefinedFidelityError
from .modespace import ModeSpace, QubitEncoding

TWO_PI = 2 * math.pi


def _wrap(x: float) -> float:
    """Reduce to ``[0, 2*pi)``."""
    y = math.fmod(x, TWO_PI)
    if y < 0:
        y += TWO_PI
    return 0.0 if abs(y - TWO_PI) < 1e-15 else y


@dataclass(frozen=True)
class GateTarget:
    """Target ``e^{ia} [[cos(c/2) e^{-i(b+d)/2}, -sin(c/2) e^{-i(b-d)/2}], [sin(c/2) e^{i(b-d)/2}, cos(c/2) e^{i(b+d)/2}]]``."""

    a: float
    b: float
    c: float
    d: float

    def canonical(self) -> "GateTarget":
        """Same matrix with ``c`` in ``[0, pi]`` and the other angles in ``[0, 2*pi)``."""
        a, b, c, d = self.a, self.b, self.c, self.d
        c = math.fmod(c, 2 * TWO_PI)
        if c < 0:
            c += 2 * TWO_PI
        if c >= TWO_PI:
            c -= TWO_PI
            a += math.pi
        if c > math.pi:
            c = TWO_PI - c
            b += math.pi
            d += math.pi
        # each 2*pi shift of b or d flips the overall sign
        for name in ("b", "d"):
            v = b if name == "b" else d
            turns = math.floor(v / TWO_PI)
            v -= turns * TWO_PI
            if v >= TWO_PI:  # rounding of tiny negative inputs
                v -= TWO_PI
                turns += 1
            if turns % 2:
                a += math.pi
            if name == "b":
                b = v
            else:
                d = v
        return GateTarget(_wrap(a), _wrap(b), c, _wrap(d))

    def matrix(self) -> np.ndarray:
        return target_matrix(self)

    @classmethod
    def from_matrix(cls, U: np.ndarray) -> "GateTarget":
        """Parameters of a 2x2 unitary (inverse of :func:`target_matrix`)."""
        U = np.asarray(U, dtype=complex)
        a = float(np.angle(np.linalg.det(U))) / 2
        V = U * np.exp(-1j * a)
        p, q = V[0, 0], V[1, 0]
        c = 2 * math.atan2(abs(q), abs(p))
        if abs(p) < 1e-12:
            s, dif = 0.0, 2 * float(np.angle(q))
        elif abs(q) < 1e-12:
            s, dif = -2 * float(np.angle(p)), 0.0
        else:
            s, dif = -2 * float(np.angle(p)), 2 * float(np.angle(q))
        return cls(a, (s + dif) / 2, c, (s - dif) / 2)


def target_matrix(t: GateTarget) -> np.ndarray:
    ch, sh = math.cos(t.c / 2), math.sin(t.c / 2)
    sp, sm = (t.b + t.d) / 2, (t.b - t.d) / 2
    m = np.array(
        [
            [ch * np.exp(-1j * sp), -sh * np.exp(-1j * sm)],
            [sh * np.exp(1j * sm), ch * np.exp(1j * sp)],
        ]
    )
    return np.exp(1j * t.a) * m


PI = math.pi

PRESETS: dict[str, GateTarget] = {
    "identity": GateTarget(0.0, 0.0, 0.0, 0.0),
    "pauli-x": GateTarget(-PI / 2, PI / 2, PI, -PI / 2),
    "pauli-y": GateTarget(PI / 2, 0.0, PI, 0.0),
    "pauli-z": GateTarget(-PI / 2, -PI, 0.0, 0.0),
    "hadamard": GateTarget(PI / 2, 0.0, PI / 2, PI),
}


def phase_gate(nu: float) -> GateTarget:
    """``diag(1, e^{-i nu})``."""
    return GateTarget(-nu / 2, -nu, 0.0, 0.0)


def preset(name: str, nu: float | None = None) -> GateTarget:
    key = name.strip().lower()
    if key == "phase":
        if nu is None:
            raise ValueError("phase preset needs an angle nu")
        return phase_gate(nu)
    if key not in PRESETS:
        raise KeyError(f"unknown gate preset {name!r}; choose from {sorted([*PRESETS, 'phase'])}")
    return PRESETS[key]


@dataclass(frozen=True)
class GateScore:
    fidelity: float
    success_prob: float

    def __post_init__(self):
        for name in ("fidelity", "success_prob"):
            v = getattr(self, name)
            if not (-1e-12 <= v <= 1 + 1e-9):
                raise ValueError(f"{name}={v!r} outside [0, 1]")

    def passes(self, th: "Thresholds") -> bool:
        return self.fidelity >= th.fidelity and self.success_prob >= th.success_prob


@dataclass(frozen=True)
class Thresholds:
    fidelity: float = 0.99
    success_prob: float = 0.9999


MatrixLike = Union[ReducedGate, GateTarget, np.ndarray]


def _as_matrix(x: MatrixLike) -> np.ndarray:
    if isinstance(x, ReducedGate):
        return x.w
    if isinstance(x, GateTarget):
        return target_matrix(x)
    return np.asarray(x, dtype=complex)


def success_probability(w: MatrixLike, t: MatrixLike) -> float:
    W, T = _as_matrix(w), _as_matrix(t)
    return float(np.sum(np.abs(W) ** 2) / np.sum(np.abs(T) ** 2))


def fidelity(w: MatrixLike, t: MatrixLike) -> float:
    """``|Tr(W^dagger T)|^2 / (Tr(W^dagger W) Tr(T^dagger T))``."""
    W, T = _as_matrix(w), _as_matrix(t)
    nw = float(np.sum(np.abs(W) ** 2))
    if nw <= 1e-300:
        raise UndefinedFidelityError("fidelity is undefined for a zero reduced gate")
    nt = float(np.sum(np.abs(T) ** 2))
    overlap = np.sum(W.conj() * T)
    return float(abs(overlap) ** 2 / (nw * nt))


def score(w: MatrixLike, t: MatrixLike) -> GateScore:
    return GateScore(fidelity(w, t), success_probability(w, t))


def crosstalk_modes(
    V: np.ndarray, source: Sequence[int], dest: Sequence[int], norm: str = "probability"
) -> float:
    """Leakage from the modes ``source`` into the modes ``dest``.

    ``"probability"``: largest total probability ``sum_dest |V[d, s]|^2`` over
    single source modes.  ``"amplitude"``: largest single ``|V[d, s]|``.
    """
    block = np.abs(np.asarray(V)[np.ix_(list(dest), list(source))])
    if norm == "probability":
        return float(np.max(np.sum(block**2, axis=0)))
    if norm == "amplitude":
        return float(np.max(block))
    raise ValueError(f"unknown crosstalk norm {norm!r}")


def crosstalk(
    V: np.ndarray,
    enc_a: QubitEncoding,
    enc_b: QubitEncoding,
    space: ModeSpace | None = None,
    norm: str = "probability",
) -> float:
    """Leakage from qubit ``enc_a`` into qubit ``enc_b`` under ``V``."""
    if enc_a.kind is not enc_b.kind:
        raise ValueError("crosstalk compares qubits of the same encoding kind")
    if enc_a.index == enc_b.index:
        raise ValueError("crosstalk needs two distinct qubits")
    space = space or ModeSpace(np.asarray(V).shape[0])
    return crosstalk_modes(V, enc_a.modes(space), enc_b.modes(space), norm)
