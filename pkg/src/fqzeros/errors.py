"""Exception hierarchy shared by all fqzeros modules."""


class FqZerosError(Exception):
    """Base class for every error raised by fqzeros."""


class NotPrimePower(FqZerosError, ValueError):
    pass


class FieldTooLarge(FqZerosError, ValueError):
    pass


class DivisionByZero(FqZerosError, ZeroDivisionError):
    pass


class FieldMismatch(FqZerosError, ValueError):
    pass


class MixedParameters(FqZerosError, ValueError):
    pass


class IndexOutOfRange(FqZerosError, IndexError):
    pass


class OutOfValidity(FqZerosError, ValueError):
    """Parameters fall outside the range where a closed form is valid."""


class DegreeTooLarge(FqZerosError, ValueError):
    pass


class BothZero(FqZerosError, ValueError):
    pass


class AllZero(FqZerosError, ValueError):
    pass


class NotDivisible(FqZerosError, ArithmeticError):
    pass


class DivisionByZeroPoly(FqZerosError, ZeroDivisionError):
    pass


class RankDeficient(FqZerosError, ValueError):
    pass


class PointOnL(FqZerosError, ValueError):
    pass


class BadLambdas(FqZerosError, ValueError):
    pass


class TooMany(FqZerosError, ValueError):
    pass


class TooLarge(FqZerosError, ValueError):
    pass


class NotClose(FqZerosError, ValueError):
    pass


class NotCoprimeClose(FqZerosError, ValueError):
    pass


class StructureViolation(FqZerosError, AssertionError):
    """A structure theorem failed on a concrete instance."""


class BudgetExceeded(FqZerosError, RuntimeError):
    pass


class ParseError(FqZerosError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
