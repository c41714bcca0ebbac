"""Exception types raised across the package."""


class UnitonError(Exception):
    """Base class for every structured failure raised by this package."""


class DivisionByZero(UnitonError, ZeroDivisionError):
    pass


class PoleAtPoint(UnitonError):
    pass


class ExprSyntaxError(UnitonError, SyntaxError):
    def __init__(self, message, text="", position=0):
        super().__init__(f"{message} at position {position}")
        self.text = text
        self.position = position


class SizeMismatch(UnitonError, ValueError):
    pass


class InvalidType(UnitonError, ValueError):
    pass


class UnknownType(UnitonError, ValueError):
    pass


class DegenerateDenominator(UnitonError):
    pass


class DegenerateData(UnitonError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DegenerateCurve(UnitonError):
    pass


class InconsistentBorder(UnitonError, AssertionError):
    pass


class NotSkew(UnitonError, ValueError):
    pass


class NotInHPlus(UnitonError, AssertionError):
    pass


class NotLambdaStable(UnitonError, AssertionError):
    pass


class NumericBreakdown(UnitonError, ArithmeticError):
    pass


class TypeMismatch(UnitonError, ValueError):
    pass


class NotFull(UnitonError):
    pass


class NotIsotropic(UnitonError):
    pass


class EmptyGrid(UnitonError):
    pass


class SchemaError(UnitonError, ValueError):
    pass
