"""Ground-truth checks over materialized streams and transcripts.

Everything here is a pure function of its inputs and holds the whole
stream in memory.
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidParams
from .stream import GraphStream

SHARED_COLOR = "SharedColorAtVertex"
MISSING = "MissingAssignment"
DUPLICATE = "DuplicateAssignment"
PROPERTY_Z = "PropertyZBreach"
DEGREE_BOUND = "DegreeBoundBreach"
ENDPOINT_MISMATCH = "EndpointMismatch"
UNKNOWN_EDGE = "UnknownEdge"


@dataclass(frozen=True)
class Violation:
    kind: str
    seqs: tuple = ()
    vertex: int | None = None
    color: tuple | None = None
    note: str = ""

    def format(self) -> str:
        parts = [self.kind]
        if self.vertex is not None:
            parts.append(f"vertex={self.vertex}")
        if self.color is not None:
            parts.append("color=" + ":".join(map(str, self.color)))
        if self.seqs:
            parts.append("seqs=" + ",".join(map(str, self.seqs)))
        if self.note:
            parts.append(self.note)
        return " ".join(parts)


def _assignments(transcript) -> list:
    return list(getattr(transcript, "assignments", transcript))


def check_proper(stream: GraphStream, transcript) -> list[Violation]:
    """All coverage and properness violations, in a deterministic order.

    Endpoints are taken from the stream; an assignment whose endpoints
    disagree is reported and otherwise checked at the stream's endpoints.
    """
    edges = {e.seq: e for e in stream.edges()}
    out: list[Violation] = []
    color_of: dict[int, tuple] = {}
    for a in _assignments(transcript):
        e = edges.get(a.seq)
        if e is None:
            out.append(Violation(UNKNOWN_EDGE, (a.seq,)))
            continue
        if a.seq in color_of:
            out.append(Violation(DUPLICATE, (a.seq,), color=a.color))
            continue
        if (a.edge.u, a.edge.v) != e.key:
            out.append(Violation(ENDPOINT_MISMATCH, (a.seq,),
                                 note=f"stream=({e.u},{e.v}) transcript=({a.edge.u},{a.edge.v})"))
        color_of[a.seq] = a.color
    for seq in sorted(edges):
        if seq not in color_of:
            out.append(Violation(MISSING, (seq,)))

    at: dict[tuple, list[int]] = defaultdict(list)
    for seq in sorted(color_of):
        e = edges[seq]
        for v in (e.u, e.v):
            at[v, color_of[seq]].append(seq)
    for (v, color), seqs in sorted(at.items(), key=lambda kv: (kv[0][0], kv[1])):
        if len(seqs) > 1:
            out.append(Violation(SHARED_COLOR, tuple(seqs), vertex=v, color=color))
    return out


def color_conflicts_by_matrix(stream: GraphStream, transcript) -> set[tuple[int, tuple]]:
    """(vertex, color) pairs carried by two or more edges, via an incidence count matrix.

    Independent of :func:`check_proper`; later duplicates of a seq are ignored.
    """
    edges = {e.seq: e for e in stream.edges()}
    seen = set()
    rows, cols = [], []
    palette: dict[tuple, int] = {}
    for a in _assignments(transcript):
        if a.seq in seen or a.seq not in edges:
            continue
        seen.add(a.seq)
        k = palette.setdefault(a.color, len(palette))
        e = edges[a.seq]
        rows += [e.u, e.v]
        cols += [k, k]
    counts = np.zeros((stream.n + 1, max(len(palette), 1)), dtype=np.int64)
    np.add.at(counts, (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64)), 1)
    colors = list(palette)
    return {(int(v), colors[k]) for v, k in zip(*np.nonzero(counts > 1))}


@dataclass
class PaletteStats:
    distinct: int
    by_prefix: dict = field(default_factory=dict)


def palette_stats(transcript, depth: int = 1) -> PaletteStats:
    """Distinct colors overall and per leading ``depth`` components.

    Colors no longer than ``depth`` are grouped under the empty prefix.
    """
    colors = {a.color for a in _assignments(transcript)}
    groups: Counter = Counter()
    for c in colors:
        groups[c[:depth] if len(c) > depth else ()] += 1
    return PaletteStats(len(colors), dict(sorted(groups.items())))


def property_z_block(degree: int, delta: int, C: int, s: int) -> int:
    """ceil(degree * C / (s * delta)), exactly."""
    return -(-degree * C // (s * delta))


def check_property_z(stream: GraphStream, delta: int, C: int, s: int) -> list[Violation]:
    """Flag a neighbor repeated within one block of a vertex's degree sequence."""
    if stream.mode != "ea":
        raise InvalidParams("property Z is defined on edge-arrival streams")
    deg: Counter = Counter()
    first: dict[tuple, int] = {}
    out = []
    for ev in stream.events:
        e = ev.edge
        for v, w in ((e.u, e.v), (e.v, e.u)):
            deg[v] += 1
            key = (v, property_z_block(deg[v], delta, C, s), w)
            if key in first:
                out.append(Violation(PROPERTY_Z, (first[key], e.seq), vertex=v, note=f"block={key[1]}"))
            else:
                first[key] = e.seq
    return out


def check_degree_bound(stream: GraphStream, delta: int | None = None) -> list[Violation]:
    """Vertices whose degree (with multiplicity) exceeds ``delta`` (default: header)."""
    limit = stream.delta if delta is None else delta
    deg: Counter = Counter()
    out = []
    for e in stream.edges():
        for v in (e.u, e.v):
            deg[v] += 1
            if deg[v] == limit + 1:
                out.append(Violation(DEGREE_BOUND, (e.seq,), vertex=v, note=f"limit={limit}"))
    return out


def partial_fraction(input_edges: int, colored: int) -> Fraction:
    if not 0 <= colored <= input_edges:
        raise InvalidParams("need 0 <= colored <= input edges")
    return Fraction(1) if input_edges == 0 else Fraction(colored, input_edges)


def below_threshold(fraction: Fraction, threshold: Fraction = Fraction(1, 3)) -> bool:
    return fraction < threshold


def report_lines(violations: list[Violation]) -> list[str]:
    return [v.format() for v in violations]


def report_json(violations: list[Violation]) -> str:
    kinds = Counter(v.kind for v in violations)
    return json.dumps({"schema": 1, "violations": len(violations), "by_kind": dict(sorted(kinds.items()))},
                      sort_keys=True)
