"""offensive-classifier: detect and categorize offensive language in social media."""

__version__ = "0.1.0"

from .core.classifier import TextClassifier
from .core.config import RunConfig

__all__ = ["TextClassifier", "RunConfig"]
