"""Exception types shared across the package."""


class ResidencyError(Exception):
    """Base class for all errors raised by this package."""


class InvalidWarpedHistory(ResidencyError):
    """A run-length encoded history violates its structural invariants."""


class HistoryLengthMismatch(ResidencyError):
    """Two sequences that must tile the same span have different lengths."""


class EmptyHistory(ResidencyError):
    """A solver was given a history with no time units."""


class InstanceTooLarge(ResidencyError):
    """The brute-force enumeration budget would be exceeded."""


class InsufficientData(ResidencyError):
    """Not enough observations to produce a result."""


class ConfigError(ResidencyError):
    """Invalid generator or experiment configuration."""


class ParseError(ResidencyError):
    """Malformed input data.

    ``line`` is the 1-based line number in the input, when known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyInput(ResidencyError):
    """An input stream contained no usable records."""


class UsageError(ResidencyError):
    """Bad command-line invocation."""
