"""Open cloze question generation, delivery and analysis toolkit."""

__version__ = "0.1.0"
