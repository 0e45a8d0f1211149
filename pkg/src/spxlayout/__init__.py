"""SPX - Stress-Plus-X graph layout."""

__version__ = "0.1.0"
