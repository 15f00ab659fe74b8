"""Exact graded commutative algebra for generator bounds of Cohen-Macaulay ideals."""

__version__ = "0.1.0"
