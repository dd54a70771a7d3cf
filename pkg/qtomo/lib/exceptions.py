from .constants import exit_io, exit_numerical, exit_usage


class TomographyException(Exception):
    """Base class for every error raised by qtomo. `exit_code` is what the
    CLI returns when the exception escapes a subcommand.
    """

    exit_code = exit_usage

    def __init__(self, message="Generic qtomo exception."):
        self.message = message
        super().__init__(self.message)


class InvalidGridException(TomographyException):
    """Exception raised when grid, angle or refinement parameters are out of range."""

    def __init__(self, message="Invalid grid parameters."):
        super().__init__(message)


class AxisMismatchException(TomographyException):
    """Exception raised when two fields that must share axes do not, or when a
    transform is asked for dimensions the field does not have.
    """

    def __init__(self, message="Axes do not match."):
        super().__init__(message)


class StateConstructionException(TomographyException):
    """Exception raised when an analytic state cannot be represented on the grid."""

    def __init__(self, message="Unable to construct this state on the given grid."):
        super().__init__(message)


class AngleNotFoundException(TomographyException):
    """Exception raised when a tomogram is asked for an angle it was not sampled at."""

    def __init__(self, message="This angle is not part of the tomogram."):
        super().__init__(message)


class NumericalContractViolation(TomographyException):
    """Exception raised when a numerical contract is breached, e.g. an imaginary
    residue that should vanish for hermitian input.
    """

    exit_code = exit_numerical

    def __init__(self, message="Numerical contract violated."):
        super().__init__(message)


class FieldFormatException(TomographyException):
    """Exception raised when a QTF/QTG file is malformed or truncated."""

    exit_code = exit_io

    def __init__(self, message="Unable to parse this field file."):
        super().__init__(message)


class OutputExistsException(TomographyException):
    """Exception raised when the output already exists with different contents and
    `replace=False`.
    """

    exit_code = exit_io

    def __init__(
        self,
        message="Output file already exists with different contents, pass replace=True to overwrite it.",
    ):
        super().__init__(message)
