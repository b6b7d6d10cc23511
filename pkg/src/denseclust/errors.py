"""Exception hierarchy shared by the whole package."""


class DenseclustError(Exception):
    """Base class for all library errors."""


class ParameterError(DenseclustError):
    """A caller-supplied parameter is out of its valid range."""


class DimensionMismatchError(DenseclustError):
    """Two points (or a point and a dataset) disagree on dimensionality."""


class DatasetValidationError(DenseclustError):
    """A dataset violates one of its structural invariants."""


class NonFiniteCoordinateError(DatasetValidationError):
    """A coordinate is NaN or infinite."""


class TruthLengthError(DatasetValidationError):
    """Ground-truth label vector length differs from the point count."""


class UnfinishedLabelingError(DenseclustError):
    """An operation requiring a finished labeling saw an unclassified tag."""


class NoKneeError(DenseclustError):
    """The sorted k-distance vector has no slope jump to estimate a radius from."""


class ParseError(DenseclustError):
    """A dataset or config file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UndefinedResultError(DenseclustError):
    """The requested statistic is undefined for the given inputs."""
