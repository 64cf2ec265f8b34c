"""Single-qubit gate synthesis with electro-optic modulators and pulse shapers."""

__version__ = "0.1.0"

from .circuits import ConfigKind, Configuration, ReducedGate, full_unitary, reduce_to_qubit
from .components import PSProfile, RFDrive, Tone, TwoScatterPS
from .metrics import GateScore, GateTarget, Thresholds, fidelity, preset, success_probability, target_matrix
from .modespace import EncodingKind, ModeSpace, QubitEncoding, frequency_qubit, time_qubit

__all__ = [
    "ConfigKind",
    "Configuration",
    "EncodingKind",
    "GateScore",
    "GateTarget",
    "ModeSpace",
    "PSProfile",
    "QubitEncoding",
    "RFDrive",
    "ReducedGate",
    "Thresholds",
    "Tone",
    "TwoScatterPS",
    "fidelity",
    "frequency_qubit",
    "full_unitary",
    "preset",
    "reduce_to_qubit",
    "success_probability",
    "target_matrix",
    "time_qubit",
]
