from typing import Any, List, Optional


class BaseError(Exception):
    code = 1
    description = 'Unhandled exception'

    def __init__(self, message: str, code: Optional[int] = None, errors: Optional[List[Any]] = None) -> None:
        super().__init__(message)
        self.message = message
        if code is not None:
            self.code = code
        self.errors = errors
        self.run_id = None  # type: Optional[str]


class ReliefscanException(BaseError):
    pass


class ConfigError(BaseError):
    """The run configuration contained unknown keys or invalid values."""
    code = 2


class FormatError(BaseError):
    """An interchange file did not follow its documented format."""
    code = 3

    def __init__(self, message: str, path: Any = None, line: Optional[int] = None, column: Optional[int] = None) -> None:
        self.path = path
        self.line = line
        self.column = column
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append('line {}'.format(line))
        if column is not None:
            where.append('col {}'.format(column))
        if where:
            message = '{} ({})'.format(message, ', '.join(where))
        super().__init__(message)


class DimensionMismatch(BaseError):
    """Two grids that must share a shape do not."""
    code = 3


class ManifestError(BaseError):
    """The dataset manifest is empty, inconsistent or refers to missing files."""
    code = 3


class InpaintError(BaseError):
    """Missing heights could not be filled."""
    code = 4


class ResampleError(BaseError):
    """A resampling request is incompatible with the grid."""
    code = 4


class SynthError(BaseError):
    """The synthetic sample configuration is invalid."""
    code = 4


class SegmenterError(BaseError):
    """The segmenter could not be loaded or applied."""
    code = 5


class FeatureMismatch(SegmenterError):
    """The model and the feature stack disagree on the feature layout."""
    pass


class TrainingError(SegmenterError):
    """Training could not proceed."""

    def __init__(self, message: str, epoch: Optional[int] = None) -> None:
        self.epoch = epoch
        if epoch is not None:
            message = '{} (epoch {})'.format(message, epoch)
        super().__init__(message)


class FoldError(BaseError):
    """Folds could not be planned for the manifest."""
    code = 6


class RegimeError(BaseError):
    """An experimental regime was aborted by a failed fold."""
    code = 6


class StatisticsError(BaseError):
    """Statistical test inputs violate the test's preconditions."""
    code = 7


class DegenerateStatistic(StatisticsError):
    """The test statistic is undefined for the data (e.g. every value tied)."""
    pass
