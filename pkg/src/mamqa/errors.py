"""Exception types shared across the package."""


class CapacityError(Exception):
    """Problem size exceeds a hard cap (dense diagonalization or exhaustive enumeration)."""


class NumericError(Exception):
    """An eigensolve failed its residual check; carries the offending residual in the message."""


class FormatError(ValueError):
    """A file (instance JSON, schedule CSV, solution-set CSV) violates its documented format."""


class ConnectivityError(ValueError):
    """An edge list does not describe a connected graph over all spins."""


class UndefinedMetricError(ValueError):
    """A metric is undefined for the given input (e.g. spacing of a single point)."""


class UnsupportedDimensionError(ValueError):
    """An operation restricted to two objectives received a different dimension."""


class OverwriteRefusalError(Exception):
    """An output target exists and --force was not given."""
