"""Exception hierarchy shared by all modules."""


class CodingError(Exception):
    """Base class for every error raised by pmds_regen."""


class FieldError(CodingError, ValueError):
    pass


class MixedFieldsError(FieldError):
    pass


class ZeroElementError(FieldError, ZeroDivisionError):
    """Inverse, division or order of zero."""


class NoSubfieldError(FieldError):
    """Raised when an operation needs a designated subfield GF(q) and none was set."""


class FieldTooSmallError(CodingError, ValueError):
    pass


class InvalidParametersError(CodingError, ValueError):
    pass


class DimensionMismatchError(CodingError, ValueError):
    pass


class SingularMatrixError(CodingError, ArithmeticError):
    pass


class NoSolutionError(CodingError, ArithmeticError):
    """The linear system is inconsistent."""


class UnderdeterminedError(CodingError, ArithmeticError):
    """The linear system has more than one solution."""


class UnrecoverableError(CodingError):
    """An erasure pattern cannot be decoded.

    ``row`` carries the offending array row when the code is an array code.
    """

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class WordNotInCodeError(CodingError):
    pass


class DuplicateLocatorError(InvalidParametersError):
    pass


class DependentLocatorsError(InvalidParametersError):
    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class RepairError(CodingError, ValueError):
    pass


class NoGroupingError(CodingError):
    def __init__(self, message, column=None, pattern=None):
        super().__init__(message)
        self.column = column
        self.pattern = pattern


class SearchExhaustedError(CodingError):
    pass


class BudgetExceededError(CodingError):
    pass
