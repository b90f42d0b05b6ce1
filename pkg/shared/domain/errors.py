"""Error hierarchy shared by every context."""
from typing import Optional


class QkdSimError(Exception):
    """Base class of all simulator errors."""


class DomainError(QkdSimError, ValueError):
    """An input lies outside the physical domain of an operation."""


class ScenarioParseError(DomainError):
    """A scenario file or override could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, source: str = "<scenario>"):
        self.line = line
        self.source = source
        location = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(location + message)


class CodecError(DomainError):
    """A time-tag stream cannot be encoded or decoded."""


class UndefinedQberError(DomainError):
    """No sifted pairs are available to estimate the QBER."""


class ClockLockError(DomainError):
    """No cross-correlation peak stands out of the noise floor."""

    def __init__(self, message: str, block_index: int):
        self.block_index = block_index
        super().__init__(message)


class ResourceLimitError(QkdSimError):
    """A request would exceed a configured resource guard."""


class ContractViolation(QkdSimError, ValueError):
    """A caller broke a precondition, e.g. passed an unsorted stream."""


class UnknownCommandError(QkdSimError):
    """The requested command is not registered."""
