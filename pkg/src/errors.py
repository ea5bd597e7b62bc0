"""
Error hierarchy

Every failure raised by the library derives from AuctionLabError so callers
(the CLI in particular) can separate configuration problems from runtime ones.
"""

from __future__ import annotations

from typing import Any


class AuctionLabError(Exception):
    """Base exception for all auction-lab failures."""
    pass


class ConfigurationError(AuctionLabError):
    """Raised when a configuration value or argument is invalid."""
    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class DimensionError(AuctionLabError):
    """Raised when array shapes disagree."""
    def __init__(self, message: str, expected: Any = None, actual: Any = None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class DomainError(AuctionLabError):
    """Raised on non-finite or out-of-range numeric input."""
    pass


class DivergenceError(AuctionLabError):
    """Raised when training produces a non-finite loss."""
    def __init__(self, message: str, iteration: int, dump_path: str | None = None):
        super().__init__(message)
        self.iteration = iteration
        self.dump_path = dump_path


class SerializationError(AuctionLabError):
    """Raised when a model, dataset or config document cannot be read."""
    def __init__(self, message: str, path: str | None = None):
        super().__init__(message)
        self.path = path
