"""Exception hierarchy shared by every hforge module."""

from __future__ import annotations


class HForgeError(Exception):
    """Base class for all library errors."""


class NotAPrimePower(HForgeError, ValueError):
    pass


class TableTooLarge(HForgeError, ValueError):
    pass


class DivisionByZero(HForgeError, ZeroDivisionError):
    pass


class LogOfZero(HForgeError, ValueError):
    pass


class BadModulus(HForgeError, ValueError):
    pass


class IndexOutOfRange(HForgeError, IndexError):
    pass


class NoRepresentation(HForgeError, ValueError):
    pass


class NonIntegerCount(HForgeError, ValueError):
    pass


class FitFailure(HForgeError, RuntimeError):
    pass


class ContextMismatch(HForgeError, ValueError):
    pass


class NotAdmissible(HForgeError, ValueError):
    pass


class ConditionConflict(HForgeError, RuntimeError):
    pass


class SpecViolation(HForgeError, ValueError):
    """A hypothesis of the cyclotomic block builder does not hold."""

    def __init__(self, hypothesis: str, detail: str = "") -> None:
        self.hypothesis = hypothesis
        super().__init__(f"{hypothesis}: {detail}" if detail else hypothesis)


class OrderMismatch(HForgeError, ValueError):
    pass


class ParamMismatch(HForgeError, ValueError):
    pass


class CalibrationExhausted(HForgeError, RuntimeError):
    pass


class BoundTooLarge(HForgeError, ValueError):
    pass


class ParseError(HForgeError, ValueError):
    pass


class PipelineError(HForgeError, RuntimeError):
    """Wraps an error raised inside one named pipeline stage."""

    def __init__(self, stage: str, cause: BaseException) -> None:
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
