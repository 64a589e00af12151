"""Coloring transcripts and their text format.

    h n=6 delta=2 mode=ea algo=greedy profile=desk seed=0 regime=main
    a 1 1 2 1
    a 2 2 3 2
    f
    s palette=2 state_bits_peak=18 errors=0

Colors are colon-joined.  ``# abort <Name>: <message>`` comment lines
record a colorer error and are read back into ``Transcript.aborts``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .colorers.base import Assignment
from .errors import ParseError
from .stream import EdgeInstance, StreamHeader, _parse_header, format_header


@dataclass
class Transcript:
    header: StreamHeader
    algo: str
    profile: str = "desk"
    seed: int = 0
    regime: str = "main"
    assignments: list = field(default_factory=list)
    finalized: bool = False
    palette: int | None = None
    state_bits_peak: int | None = None
    errors: int = 0
    aborts: list = field(default_factory=list)

    def colors(self) -> dict[int, tuple]:
        return {a.seq: a.color for a in self.assignments}


def format_color(color: tuple) -> str:
    return ":".join(str(c) for c in color)


def parse_color(text: str, line: int | None = None) -> tuple:
    try:
        color = tuple(int(p) for p in text.split(":"))
    except ValueError:
        raise ParseError(f"bad color {text!r}", line) from None
    if any(c < 0 for c in color):
        raise ParseError(f"negative color component in {text!r}", line)
    return color


def format_transcript(t: Transcript) -> str:
    head = (f"{format_header(t.header)} algo={t.algo} profile={t.profile} "
            f"seed={t.seed} regime={t.regime}")
    lines = [head]
    for a in t.assignments:
        e = a.edge
        lines.append(f"a {e.seq} {e.u} {e.v} {format_color(a.color)}")
    for msg in t.aborts:
        lines.append(f"# abort {msg}")
    if t.finalized:
        lines.append("f")
    if t.palette is not None:
        lines.append(f"s palette={t.palette} state_bits_peak={t.state_bits_peak or 0} errors={t.errors}")
    return "\n".join(lines) + "\n"


def parse_transcript(text: str) -> Transcript:
    t = None
    for no, raw in enumerate(text.splitlines(), start=1):
        if t is not None and raw.startswith("# abort "):
            t.aborts.append(raw[len("# abort "):])
            continue
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        tok = body.split()
        kind = tok[0]
        if t is None:
            if kind != "h":
                raise ParseError("transcript must start with a header line", no)
            extra = {}
            stream_tok = []
            for part in tok[1:]:
                key = part.split("=", 1)[0]
                if key in ("algo", "profile", "seed", "regime"):
                    extra[key] = part.split("=", 1)[1]
                else:
                    stream_tok.append(part)
            if "algo" not in extra:
                raise ParseError("transcript header lacks algo=", no)
            header = _parse_header(["h"] + stream_tok, no)
            try:
                seed = int(extra.get("seed", 0))
            except ValueError:
                raise ParseError("seed must be an integer", no) from None
            t = Transcript(header, extra["algo"], extra.get("profile", "desk"), seed,
                           extra.get("regime", "main"))
            continue
        if kind == "a":
            if len(tok) != 5:
                raise ParseError("assignment line needs: a seq u v color", no)
            try:
                seq, u, v = int(tok[1]), int(tok[2]), int(tok[3])
                edge = EdgeInstance(seq, u, v)
            except ValueError as err:
                raise ParseError(f"bad assignment: {err}", no) from None
            t.assignments.append(Assignment(edge, parse_color(tok[4], no)))
        elif kind == "f":
            t.finalized = True
        elif kind == "s":
            fields = dict(p.split("=", 1) for p in tok[1:] if "=" in p)
            try:
                t.palette = int(fields["palette"])
                t.state_bits_peak = int(fields["state_bits_peak"])
                t.errors = int(fields["errors"])
            except (KeyError, ValueError):
                raise ParseError("summary line needs palette=, state_bits_peak=, errors=", no) from None
        else:
            raise ParseError(f"unknown transcript line kind {kind!r}", no)
    if t is None:
        raise ParseError("empty transcript", None)
    return t
