class FinHilbertError(Exception):
    pass


class DomainError(FinHilbertError, ValueError):
    """A point lies outside the open interval an operation is defined on."""


class PreconditionError(FinHilbertError, ValueError):
    pass


class DataError(FinHilbertError, ValueError):
    """Samples are non-finite, or a pairing or integral diverges."""


class UnsupportedWeightError(FinHilbertError):
    pass


class ConfigError(FinHilbertError):
    pass
