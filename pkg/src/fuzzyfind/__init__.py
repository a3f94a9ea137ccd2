"""FuzzyFind Dictionary: Golay-code fault-tolerant index over 23-bit keys."""
__version__ = "0.1.0"
