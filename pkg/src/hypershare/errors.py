"""Exception types shared across the package, with CLI exit codes."""


class HyperShareError(Exception):
    """Base class for all package-specific errors."""

    exit_code = 1


class NotPrimeError(HyperShareError, ValueError):
    """Requested field modulus is not prime (or outside the supported range)."""

    exit_code = 7


class FormatError(HyperShareError, ValueError):
    """Malformed text input; carries a 1-based line number when known."""

    exit_code = 2

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class VertexRangeError(HyperShareError, ValueError):
    """Vertex id outside the declared range."""

    exit_code = 2


class SizeOverflowError(HyperShareError, ValueError):
    """An enumeration (e.g. a partite complement) would exceed its cap."""

    exit_code = 6


class CoverFailureError(HyperShareError, RuntimeError):
    """Random partite cover hit its coloring cap before covering all edges."""

    exit_code = 4


class PartitionFailureError(HyperShareError, RuntimeError):
    """Random block partition hit its retry cap."""

    exit_code = 5


class NotQualifiedError(HyperShareError, ValueError):
    """Reconstruction attempted with a set the scheme does not accept."""

    exit_code = 3


class FieldMismatchError(HyperShareError, ValueError):
    """Operands or span programs built over different fields."""

    exit_code = 1


class FieldTooSmallError(HyperShareError, ValueError):
    """Field modulus too small for the requested construction."""

    exit_code = 7


class DegreeOverflowError(HyperShareError, ValueError):
    """Polynomial construction would exceed the per-variable degree bound."""

    exit_code = 1


class TargetSelectionError(HyperShareError, RuntimeError):
    """No verified target completion found within the retry cap."""

    exit_code = 8


class EnumerationTooLargeError(HyperShareError, RuntimeError):
    """A brute-force enumeration exceeds the configured budget."""

    exit_code = 6


class DuplicatePointError(HyperShareError, ValueError):
    """Interpolation points share an x coordinate."""

    exit_code = 1


class InfeasibleCountError(HyperShareError, ValueError):
    """Requested edge count exceeds the number of available k-sets."""

    exit_code = 9
