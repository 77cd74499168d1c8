"""Exception hierarchy shared by every factorlab module.

Two families matter to callers (and to the CLI exit-code mapping):

* ``ValidationError`` - the input was malformed, out of range, or otherwise
  unusable before any numerics ran (CLI exit code 2).
* ``NumericalError`` - the computation itself degenerated: rank deficiency,
  exact collinearity, or a kernel that failed to converge (CLI exit code 3).

Anything else that escapes is an internal error (CLI exit code 1).
"""


class FactorLabError(Exception):
    """Base class for all errors raised by factorlab."""


class ValidationError(FactorLabError):
    """Bad or unusable input detected before/while building a computation."""


class NumericalError(FactorLabError):
    """The numerics degenerated; no trustworthy result exists."""


# --- validation family -------------------------------------------------


class DimensionMismatch(ValidationError):
    """Array shapes or lengths do not line up."""


class DomainError(ValidationError):
    """An argument is outside the mathematical domain of the operation."""


class SchemaError(ValidationError):
    """A required column is missing from a CSV header."""

    def __init__(self, column: str):
        self.column = column
        super().__init__(f"required column {column!r} missing from header")


class ParseError(ValidationError):
    """A cell could not be parsed as a number."""

    def __init__(self, row: int, column: str, text: str = ""):
        self.row = row
        self.column = column
        super().__init__(f"row {row}, column {column!r}: cannot parse {text!r}")


class MissingValue(ValidationError):
    """A cell is empty; missing data is rejected, never imputed."""

    def __init__(self, row: int, column: str):
        self.row = row
        self.column = column
        super().__init__(f"row {row}, column {column!r}: missing value")


class EmptyInput(ValidationError):
    """No usable rows were supplied."""


class UnknownColumn(ValidationError):
    """A named column does not exist in the frame."""

    def __init__(self, column: str):
        self.column = column
        super().__init__(f"unknown column {column!r}")


class IndexOutOfRange(ValidationError):
    """A 1-based row index falls outside the frame."""


class InsufficientRows(ValidationError):
    """Too few rows for the requested fit."""


class ConfigInvalid(ValidationError):
    """A model configuration violates its invariants."""


class LagTooLarge(ValidationError):
    """Requested autocorrelation lag is not smaller than the series."""


class KTooLarge(ValidationError):
    """More cross-validation folds than rows."""


class ConstantPredictor(ValidationError):
    """A predictor has zero variance and cannot be screened or transformed."""

    def __init__(self, column: str):
        self.column = column
        super().__init__(f"predictor {column!r} is constant")


class ZeroVariance(ValidationError):
    """A series has zero variance where positive variance is required."""


# --- numerical family --------------------------------------------------


class RankDeficient(NumericalError):
    """The design matrix is numerically rank deficient.

    ``column`` identifies the first dependent column: an integer index for
    the low-level solver, a column name once a frame is involved.
    """

    def __init__(self, column):
        self.column = column
        super().__init__(f"design matrix is rank deficient at column {column!r}")


class CollinearSingular(NumericalError):
    """An auxiliary collinearity regression is itself singular."""

    def __init__(self, column: str):
        self.column = column
        super().__init__(f"predictor {column!r} is exactly collinear with the others")


class ConvergenceError(NumericalError):
    """An iterative kernel hit its iteration cap before converging."""
