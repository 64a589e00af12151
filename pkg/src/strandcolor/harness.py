"""Drive a colorer over a stream and record what happened."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .colorers import ColorerConfig, build_colorer, prepare_stream
from .colorers.base import Colorer
from .errors import ColoringAbort
from .stream import GraphStream
from .transcript import Transcript


@dataclass
class RunResult:
    transcript: Transcript
    stream: GraphStream          # the stream the colorer consumed
    colorer: Colorer
    error: ColoringAbort | None = None
    state_bits_peak: int = 0
    wall_ms: float = 0.0
    online_breaches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.error is None


def execute(colorer: Colorer, stream: GraphStream, transcript: Transcript) -> RunResult:
    """Feed every event, then finalize; a ColoringAbort stops the run and is recorded."""
    res = RunResult(transcript, stream, colorer)
    start = time.perf_counter()
    peak = colorer.state_size_bits()
    try:
        for idx, ev in enumerate(stream.events):
            out = colorer.process(ev)
            if colorer.online and sorted(a.seq for a in out) != sorted(e.seq for e in ev.edges):
                res.online_breaches.append(idx)
            transcript.assignments += out
            peak = max(peak, colorer.state_size_bits())
        tail = colorer.finalize()
        if colorer.online and tail:
            res.online_breaches.append(len(stream.events))
        transcript.assignments += tail
        peak = max(peak, colorer.state_size_bits())
        transcript.finalized = True
    except ColoringAbort as err:
        res.error = err
        transcript.errors = 1
        transcript.aborts.append(f"{type(err).__name__}: {err}")
    res.wall_ms = (time.perf_counter() - start) * 1000.0
    res.state_bits_peak = peak
    transcript.state_bits_peak = peak
    transcript.palette = len({a.color for a in transcript.assignments})
    return res


def run(algo: str, stream: GraphStream, *, profile: str = "desk", seed: int = 0, failure: float = 0.1,
        overrides: dict | None = None) -> RunResult:
    """Run the named colorer, with the usual stream conversion and wrapping."""
    prepared = prepare_stream(algo, stream)
    config = ColorerConfig(n=stream.n, delta=stream.delta, failure=failure, profile=profile, seed=seed,
                           overrides=dict(overrides or {}))
    colorer = build_colorer(algo, config, prepared.header)
    transcript = Transcript(prepared.header, algo, profile, seed, colorer.regime)
    return execute(colorer, prepared, transcript)
