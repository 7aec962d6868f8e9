"""error types raised by the library; the CLI maps them to exit codes."""

from typing import Optional


class OffensiveClassifierError(ValueError):
    """base class for every error raised on purpose by this package."""


class ParseError(OffensiveClassifierError):
    """malformed input file; carries the 1-based line number when known."""

    def __init__(
        self, message: str, line: Optional[int] = None, source: str = ""
    ) -> None:
        self.line = line
        self.source = source
        prefix = ":".join(
            part for part in (source, "" if line is None else str(line)) if part
        )
        if not source and line is not None:
            prefix = f"line {line}"
        super().__init__(f"{prefix}: {message}" if prefix else message)


class ValidationError(OffensiveClassifierError):
    """a domain invariant does not hold."""


class ConfigError(OffensiveClassifierError):
    """configuration is invalid or references missing files."""


class TrainingError(OffensiveClassifierError):
    """a model cannot be trained from the given data."""
