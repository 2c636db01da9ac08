"""Exception types shared across the package."""


class WavekelmError(Exception):
    """Base class for all package errors."""


class ConfigError(WavekelmError, ValueError):
    """Invalid value or configuration: bad hyperparameter, bad flag combination."""


class ShapeError(WavekelmError, ValueError):
    """Operand dimensions do not line up."""


class ParseError(WavekelmError, ValueError):
    """Malformed input file; the message carries the row/column location."""


class NumericError(WavekelmError, RuntimeError):
    """A factorization or solve failed beyond recovery."""
