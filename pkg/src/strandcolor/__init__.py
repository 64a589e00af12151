"""Streaming edge coloring: online and W-streaming colorers in sublinear space."""

from . import codes, errors, randomness, stream, structures, verify
from .colorers import ALGORITHMS, ColorerConfig, build_colorer, prepare_stream
from .harness import RunResult, execute, run
from .stream import GraphStream, parse_stream, serialize_stream
from .transcript import Transcript, format_transcript, parse_transcript

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS", "ColorerConfig", "GraphStream", "RunResult", "Transcript", "build_colorer", "codes",
    "errors", "execute", "format_transcript", "parse_stream", "parse_transcript", "prepare_stream",
    "randomness", "run", "serialize_stream", "stream", "structures", "verify",
]
