class CrossCertError(Exception):
    """Base class for all errors raised by crosscert."""


class InvalidParameterError(CrossCertError, ValueError):
    pass


class RadicandMismatchError(CrossCertError, ValueError):
    pass


class SearchExhaustedError(CrossCertError, RuntimeError):
    """The halving search hit its floor without finding a feasible lambda."""

    def __init__(self, message, params=None, last_lambda=None):
        super().__init__(message)
        self.params = params
        self.last_lambda = last_lambda


class UnsupportedFieldError(CrossCertError, ValueError):
    """Explicit enumeration needs a prime q."""


class SizeGuardError(CrossCertError, RuntimeError):
    def __init__(self, message, estimate=None, limit=None):
        super().__init__(message)
        self.estimate = estimate
        self.limit = limit
