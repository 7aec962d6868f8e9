"""command-line interface for offensive-classifier."""

from .main import main

__all__ = ["main"]
