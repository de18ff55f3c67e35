"""Exception hierarchy. Each family maps onto one CLI exit code."""


class ChordNetError(Exception):
    exit_code = 1


class ConfigError(ChordNetError):
    """Bad configuration or parameters (exit code 1)."""

    exit_code = 1


class DataError(ChordNetError):
    """Input data that cannot be analyzed (exit code 2)."""

    exit_code = 2


class NumericalError(ChordNetError):
    """A numerical routine failed to converge or to produce a result (exit code 3)."""

    exit_code = 3


class EmptyGraphError(DataError):
    pass


class AlignmentError(DataError):
    pass


class HarnessError(DataError):
    pass


class FitError(NumericalError):
    pass


class EigenvalueLookupError(NumericalError, LookupError):
    pass
