"""Dense paraphrasing toolkit for annotated procedural text."""

__version__ = "0.1.0"
