"""Exception types raised by specgate."""


class SpecgateError(Exception):
    """Base class for all package errors."""


class DimensionError(SpecgateError, ValueError):
    """An array does not match the dimension of the mode space."""


class EncodingRangeError(SpecgateError, ValueError):
    """A qubit index lies outside ``[0, M/2 - 1]``."""


class UndefinedFidelityError(SpecgateError, ZeroDivisionError):
    """Fidelity requested for a reduced gate with zero norm."""


class UnitarityError(SpecgateError, ArithmeticError):
    """A constructed matrix violates unitarity beyond tolerance."""
