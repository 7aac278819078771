"""Document classification with per-class one-vs-rest model selection."""

__version__ = "0.1.0"
