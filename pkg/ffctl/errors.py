from __future__ import annotations


class FfctlError(Exception):
    """Base class for every error raised by ffctl."""


class InputError(FfctlError):
    pass


class PolynomialSyntaxError(InputError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at offset {position})")
        self.message = message
        self.position = position


class JobSpecError(InputError):
    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{where}{message}")
        self.message = message
        self.line = line
        self.column = column


class RingMismatchError(InputError):
    pass


class PreconditionError(InputError):
    pass


class ResourceLimitError(FfctlError):
    pass


class ExponentOverflowError(ResourceLimitError):
    pass


class AvoidanceExhaustedError(ResourceLimitError):
    def __init__(self, message: str, searched: int) -> None:
        super().__init__(f"{message} ({searched} combinations searched)")
        self.searched = searched


class OracleLimitError(ResourceLimitError):
    pass


class ConsistencyError(FfctlError):
    """An internal invariant failed; always a bug."""
