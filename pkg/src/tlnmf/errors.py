"""Exception and warning types shared across the package."""


class TlnmfError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(TlnmfError, ValueError):
    """Operands have incompatible or invalid shapes."""


class NotAntisymmetric(TlnmfError, ValueError):
    """A matrix expected to satisfy E + E.T = 0 does not."""


class SingularInput(TlnmfError, ValueError):
    """A matrix required to be (numerically) nonsingular is rank deficient."""


class NonFinite(TlnmfError, ValueError):
    """A computation produced (or would produce) NaN or infinity."""


class DegenerateColumn(TlnmfError, ValueError):
    """A dictionary column has (numerically) zero mass and cannot be normalized."""


class InvalidParameter(TlnmfError, ValueError):
    """A numeric parameter is outside its admissible range."""


class NotADescentDirection(TlnmfError, ValueError):
    """Line search started with a nonnegative directional derivative."""


class SizeGuard(TlnmfError, ValueError):
    """A test-only operation was called beyond its intended problem size."""


class InvalidCount(TlnmfError, ValueError):
    """A selection count is outside [1, M]."""


class ConfigError(TlnmfError, ValueError):
    """A run configuration is inconsistent or names an unknown option."""


class UnsupportedFormat(TlnmfError, ValueError):
    """An input file is recognized but uses an unsupported encoding."""


class CorruptHeader(TlnmfError, ValueError):
    """An input file is truncated or its header is malformed."""


class SignalTooShort(TlnmfError, ValueError):
    """The signal is shorter than one analysis frame."""


class MissingArtifact(TlnmfError, FileNotFoundError):
    """A run directory lacks an expected output file."""


class LineSearchWarning(RuntimeWarning):
    """The line search hit its evaluation budget without certifying Wolfe conditions."""
