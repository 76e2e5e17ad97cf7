"""Exception hierarchy shared across the pipeline."""

from __future__ import annotations


class ImportcastError(Exception):
    """Base class for all importcast errors."""


class ParseError(ImportcastError):
    """Malformed input text; carries the 1-based line number when known."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ValidationError(ImportcastError):
    """Well-formed input that violates a domain invariant."""


class NumericError(ImportcastError):
    """NaN or non-finite value produced where a finite one is required."""


class TrainingDivergedError(NumericError):
    """Training loss exploded or went NaN; carries the offending epoch."""

    def __init__(self, message: str, epoch: int):
        super().__init__(message)
        self.epoch = epoch


class ConfigError(ImportcastError):
    """Invalid experiment configuration."""
