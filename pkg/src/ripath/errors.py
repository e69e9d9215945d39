"""Error types shared across the package.

Every failure the library raises deliberately is a subclass of
:class:`RipathError`, so callers (notably the CLI) can map error kinds
to exit codes without string matching.
"""


class RipathError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(RipathError):
    """An input vector or matrix has the wrong dimension."""


class ConfigError(RipathError):
    """A configuration value is invalid or inconsistent."""


class DegenerateSample(RipathError):
    """A fitted sample is degenerate (for estimators: zero spread)."""


class NonInjectiveGenerator(RipathError):
    """A linear generator matrix is not injective."""


class WeightFormatError(RipathError):
    """A generator weight file is malformed or its layer shapes do not chain."""


class DegenerateProjection(RipathError):
    """Projection basis is degenerate (collinear or zero endpoints)."""


class NumericFailure(RipathError):
    """A numeric computation produced a non-finite value.

    Carries the optimization trace accumulated so far in ``trace``
    (``None`` when the failure happened outside the optimizer loop).
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
