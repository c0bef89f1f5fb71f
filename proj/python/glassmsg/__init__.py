"""Heads-up messaging: session engine, command grammar, wire codec and metrics."""

from fractions import Fraction

from ._core import (
    FrameError,
    Session,
    TraceError,
    decode_frame,
    edit_distance,
    encode_frame,
    parse_utterance,
    replay,
)
from ._core import error_rate as _error_rate


def error_rate(produced: str, reference: str) -> Fraction:
    """Minimum string distance over the longer string, in code points."""
    return Fraction(*_error_rate(produced, reference))


__all__ = [
    "FrameError",
    "Session",
    "TraceError",
    "decode_frame",
    "edit_distance",
    "encode_frame",
    "error_rate",
    "parse_utterance",
    "replay",
]
