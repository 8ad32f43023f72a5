"""Verification engine for near-squares in binary recurrence sequences."""

from .nearsquare import NearSquareClass, SquareDecomposition, classify, is_near_square, square_decompose
from .sequences import ParameterError, RecurrenceParams, SequenceKind, factor_pair, term

__all__ = [
    "NearSquareClass",
    "ParameterError",
    "RecurrenceParams",
    "SequenceKind",
    "SquareDecomposition",
    "classify",
    "factor_pair",
    "is_near_square",
    "square_decompose",
    "term",
]
__version__ = "0.1.0"
