"""One-shot document encoder: clean text in, binary embedding matrix out."""

__version__ = "0.1.0"
