"""Exception and warning types shared across the library."""


class NumericDomainError(ValueError):
    """Base class for errors raised when inputs leave a routine's numeric domain."""


class DomainError(NumericDomainError):
    """Argument outside the mathematical domain of a special function."""


class NegativityError(NumericDomainError):
    """A quantity that must be a nonnegative square came out negative.

    Typically means the operator is not positive semi-definite at the
    supplied ground energy, or construction seeds are inconsistent.
    """


class SingularityError(NumericDomainError):
    """A recursion polynomial or wavefunction vanished where a division is required."""


class WindowError(NumericDomainError):
    """Index outside the model's bound-state window (finite Morse spectrum)."""


class DivergenceError(NumericDomainError):
    """A series that must converge failed its numeric ratio test."""


class QuadratureError(NumericDomainError):
    """Quadrature failed to converge at the requested node counts."""


class UnsupportedModelError(NumericDomainError):
    """Operation is only implemented for a subset of the model catalogue."""


class TruncationWarning(UserWarning):
    """Truncated series tail estimate exceeds the requested tolerance."""


class DecoupledChainWarning(UserWarning):
    """An off-diagonal coefficient vanished; the chain splits into blocks."""
