"""Exception hierarchy shared by every module."""


class QBernsteinError(Exception):
    """Base class for errors raised by this package."""


class ArgumentError(QBernsteinError, ValueError):
    """An argument violates an operation's precondition."""


class SizeLimitError(QBernsteinError):
    """Enumeration requested beyond the configured size limit."""


class TruncationError(QBernsteinError):
    """A cumulant sequence is asked for an order past its truncation."""


class ResourceError(QBernsteinError):
    """A configured resource cap (terms, spanning rows) was exceeded."""


class CertificateError(QBernsteinError):
    """A certificate failed to expand to zero.

    The nonzero residual polynomial is kept on ``residual``.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class RuleNotApplicable(QBernsteinError):
    """An inference rule's side condition does not hold."""


class SpectralRefusal(RuleNotApplicable):
    """Spectral shrinking refused: the real root set cannot be certified exactly."""
