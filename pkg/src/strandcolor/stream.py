"""Graphs as streams: types, text format, generators and order conversions.

A stream is a header ``(n, delta, mode, a)`` plus an ordered tuple of
events.  Modes:

``ea``    edge arrival: every event is an :class:`EdgeArrival`.
``va``    vertex arrival: a vertex arrives with its edges to earlier vertices.
``osva``  one-sided vertex arrival: vertices of A = {1..a} arrive with all
          their edges, every edge crossing to B = {a+1..n}.

Edge instances are numbered 1..m in stream order; parallel edges are
separate instances with the same endpoints.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Union

from .errors import DegreeExceeded, InvalidParams, ModeViolation, ParseError, SelfLoop
from .randomness import OracleStream, random_stream

EDGE_ARRIVAL = "ea"
VERTEX_ARRIVAL = "va"
ONE_SIDED = "osva"
MODES = (EDGE_ARRIVAL, VERTEX_ARRIVAL, ONE_SIDED)


@dataclass(frozen=True, order=True)
class EdgeInstance:
    seq: int
    u: int
    v: int

    def __post_init__(self):
        if self.u > self.v:
            lo, hi = self.v, self.u
            object.__setattr__(self, "u", lo)
            object.__setattr__(self, "v", hi)

    @property
    def key(self) -> tuple[int, int]:
        return (self.u, self.v)

    def other(self, x: int) -> int:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise InvalidParams(f"vertex {x} is not an endpoint of edge {self.seq}")


@dataclass(frozen=True)
class EdgeArrival:
    edge: EdgeInstance

    @property
    def edges(self) -> tuple[EdgeInstance, ...]:
        return (self.edge,)


@dataclass(frozen=True)
class VertexArrival:
    vertex: int
    edges: tuple[EdgeInstance, ...]

    def neighbors(self) -> list[int]:
        return [e.other(self.vertex) for e in self.edges]


StreamEvent = Union[EdgeArrival, VertexArrival]


@dataclass(frozen=True)
class StreamHeader:
    n: int
    delta: int
    mode: str
    a: int | None = None

    def __post_init__(self):
        if self.n < 0 or self.delta < 0:
            raise InvalidParams("n and delta must be nonnegative")
        if self.mode not in MODES:
            raise InvalidParams(f"unknown mode {self.mode!r}")
        if self.a is not None and not 0 <= self.a <= self.n:
            raise InvalidParams("a must lie in [0, n]")
        if self.mode == ONE_SIDED and self.a is None:
            raise InvalidParams("one-sided streams need a bipartition (a=)")

    @property
    def bipartite(self) -> bool:
        return self.a is not None

    def in_a(self, x: int) -> bool:
        return self.a is not None and x <= self.a

    @property
    def bipartition(self) -> tuple[frozenset, frozenset] | None:
        if self.a is None:
            return None
        return frozenset(range(1, self.a + 1)), frozenset(range(self.a + 1, self.n + 1))

    def replace(self, **kw) -> "StreamHeader":
        d = dict(n=self.n, delta=self.delta, mode=self.mode, a=self.a)
        d.update(kw)
        return StreamHeader(**d)


@dataclass(frozen=True)
class GraphStream:
    header: StreamHeader
    events: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))

    def edges(self) -> Iterator[EdgeInstance]:
        for ev in self.events:
            yield from ev.edges

    @property
    def m(self) -> int:
        return sum(len(ev.edges) for ev in self.events)

    @property
    def n(self) -> int:
        return self.header.n

    @property
    def delta(self) -> int:
        return self.header.delta

    @property
    def mode(self) -> str:
        return self.header.mode


# -- validation -----------------------------------------------------------

def validate_stream(stream: GraphStream, lines: Sequence[int] | None = None) -> None:
    """Raise the appropriate StreamError if any stream invariant fails.

    ``lines`` optionally maps event index to source line number for messages.
    """
    h = stream.header
    deg: Counter = Counter()
    arrived: set[int] = set()
    expect = 1
    for idx, ev in enumerate(stream.events):
        line = lines[idx] if lines is not None else None
        if h.mode == EDGE_ARRIVAL and not isinstance(ev, EdgeArrival):
            raise ModeViolation("vertex event in an edge-arrival stream", line)
        if h.mode != EDGE_ARRIVAL and not isinstance(ev, VertexArrival):
            raise ModeViolation("edge event in a vertex-arrival stream", line)
        if isinstance(ev, VertexArrival):
            x = ev.vertex
            if not 1 <= x <= h.n:
                raise ParseError(f"vertex {x} outside [1, {h.n}]", line)
            if x in arrived:
                raise ModeViolation(f"vertex {x} arrives twice", line)
            if h.mode == ONE_SIDED and not h.in_a(x):
                raise ModeViolation(f"arriving vertex {x} is not in A", line)
        for e in ev.edges:
            if e.seq != expect:
                raise ParseError(f"edge seq {e.seq}, expected {expect}", line)
            expect += 1
            if e.u == e.v:
                raise SelfLoop(f"self-loop at vertex {e.u}", line)
            if not (1 <= e.u <= h.n and 1 <= e.v <= h.n):
                raise ParseError(f"edge ({e.u}, {e.v}) has an endpoint outside [1, {h.n}]", line)
            if h.a is not None and h.in_a(e.u) == h.in_a(e.v):
                raise ModeViolation(f"edge ({e.u}, {e.v}) does not cross the bipartition", line)
            if isinstance(ev, VertexArrival):
                x = ev.vertex
                if x not in (e.u, e.v):
                    raise ModeViolation(f"edge ({e.u}, {e.v}) not incident on arriving vertex {x}", line)
                y = e.other(x)
                if h.mode == VERTEX_ARRIVAL and y not in arrived:
                    raise ModeViolation(f"vertex {x} lists {y}, which has not arrived", line)
            deg[e.u] += 1
            deg[e.v] += 1
            for w in (e.u, e.v):
                if deg[w] > h.delta:
                    raise DegreeExceeded(f"vertex {w} has degree {deg[w]} > delta={h.delta}", line)
        if isinstance(ev, VertexArrival):
            arrived.add(ev.vertex)


# -- text format ----------------------------------------------------------

def _parse_header(tokens: list[str], line: int) -> StreamHeader:
    fields = {}
    for tok in tokens[1:]:
        key, sep, val = tok.partition("=")
        if not sep or key not in ("n", "delta", "mode", "a") or key in fields:
            raise ParseError(f"bad header field {tok!r}", line)
        fields[key] = val
    for key in ("n", "delta", "mode"):
        if key not in fields:
            raise ParseError(f"header missing {key}=", line)
    try:
        n = int(fields["n"])
        delta = int(fields["delta"])
        a = int(fields["a"]) if "a" in fields else None
    except ValueError as exc:
        raise ParseError(f"non-integer header value: {exc}", line) from None
    try:
        return StreamHeader(n, delta, fields["mode"], a)
    except InvalidParams as exc:
        raise ParseError(str(exc), line) from None


def parse_stream(text: str) -> GraphStream:
    header = None
    events: list = []
    lines: list[int] = []
    seq = 1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        tokens = body.split()
        tag = tokens[0]
        if header is None:
            if tag != "h":
                raise ParseError("first line must be the header 'h n=.. delta=.. mode=..'", lineno)
            header = _parse_header(tokens, lineno)
            continue
        try:
            nums = [int(t) for t in tokens[1:]]
        except ValueError:
            raise ParseError(f"non-integer vertex in {body!r}", lineno) from None
        if tag == "e":
            if len(nums) != 2:
                raise ParseError("edge line needs exactly two endpoints", lineno)
            if nums[0] == nums[1]:
                raise SelfLoop(f"self-loop at vertex {nums[0]}", lineno)
            events.append(EdgeArrival(EdgeInstance(seq, nums[0], nums[1])))
            seq += 1
        elif tag == "v":
            if not nums:
                raise ParseError("vertex line needs the arriving vertex", lineno)
            x, nbrs = nums[0], nums[1:]
            es = []
            for y in nbrs:
                if y == x:
                    raise SelfLoop(f"self-loop at vertex {x}", lineno)
                es.append(EdgeInstance(seq, x, y))
                seq += 1
            events.append(VertexArrival(x, tuple(es)))
        elif tag == "h":
            raise ParseError("duplicate header", lineno)
        else:
            raise ParseError(f"unknown line tag {tag!r}", lineno)
        lines.append(lineno)
    if header is None:
        raise ParseError("empty stream: no header line")
    stream = GraphStream(header, tuple(events))
    validate_stream(stream, lines)
    return stream


def format_header(h: StreamHeader) -> str:
    s = f"h n={h.n} delta={h.delta} mode={h.mode}"
    if h.a is not None:
        s += f" a={h.a}"
    return s


def serialize_stream(stream: GraphStream) -> str:
    out = [format_header(stream.header)]
    for ev in stream.events:
        if isinstance(ev, EdgeArrival):
            e = ev.edge
            out.append(f"e {e.u} {e.v}")
        else:
            out.append(" ".join(["v", str(ev.vertex)] + [str(y) for y in ev.neighbors()]))
    return "\n".join(out) + "\n"


# -- construction helpers -------------------------------------------------

def edge_stream(n: int, delta: int, pairs: Iterable[tuple[int, int]], a: int | None = None,
                validate: bool = True) -> GraphStream:
    """Edge-arrival stream from endpoint pairs, numbered in order."""
    events = tuple(EdgeArrival(EdgeInstance(i, u, v)) for i, (u, v) in enumerate(pairs, start=1))
    stream = GraphStream(StreamHeader(n, delta, EDGE_ARRIVAL, a), events)
    if validate:
        validate_stream(stream)
    return stream


def vertex_stream(n: int, delta: int, arrivals: Iterable[tuple[int, Sequence[int]]], mode: str = VERTEX_ARRIVAL,
                  a: int | None = None, validate: bool = True) -> GraphStream:
    """Vertex-arrival stream from ``(vertex, neighbors)`` pairs."""
    seq = 1
    events = []
    for x, nbrs in arrivals:
        es = []
        for y in nbrs:
            es.append(EdgeInstance(seq, x, y))
            seq += 1
        events.append(VertexArrival(x, tuple(es)))
    stream = GraphStream(StreamHeader(n, delta, mode, a), tuple(events))
    if validate:
        validate_stream(stream)
    return stream


def degree_profile(stream: GraphStream) -> Counter:
    deg: Counter = Counter()
    for e in stream.edges():
        deg[e.u] += 1
        deg[e.v] += 1
    return deg


def max_degree(stream: GraphStream) -> int:
    deg = degree_profile(stream)
    return max(deg.values()) if deg else 0


def edge_multiplicity(stream: GraphStream) -> Counter:
    return Counter(e.key for e in stream.edges())


def is_simple(stream: GraphStream) -> bool:
    return all(c == 1 for c in edge_multiplicity(stream).values())


# -- conversions ----------------------------------------------------------

def flatten_to_edge_arrival(stream: GraphStream) -> GraphStream:
    """Same edge instances, one EdgeArrival each, in stream order."""
    events = tuple(EdgeArrival(e) for e in stream.edges())
    return GraphStream(stream.header.replace(mode=EDGE_ARRIVAL), events)


def to_vertex_arrival(stream: GraphStream, one_sided: bool = False) -> GraphStream:
    """Regroup edges into vertex arrivals; edge instances are renumbered.

    Default: every non-isolated vertex arrives, in increasing id, with its
    edges to smaller ids (possibly none).
    ``one_sided``: each A vertex arrives, in increasing id, with all its edges.
    Within an arrival, edges keep their relative stream order.
    """
    h = stream.header
    groups: dict[int, list[int]] = {}
    if one_sided:
        if h.a is None:
            raise InvalidParams("one-sided conversion needs a bipartition")
        for e in stream.edges():
            x, y = (e.u, e.v) if h.in_a(e.u) else (e.v, e.u)
            groups.setdefault(x, []).append(y)
        mode = ONE_SIDED
    else:
        for e in stream.edges():
            groups.setdefault(e.u, [])
            groups.setdefault(e.v, []).append(e.u)
        mode = VERTEX_ARRIVAL
    return vertex_stream(h.n, h.delta, sorted(groups.items()), mode=mode, a=h.a, validate=False)


def shuffle_edges(stream: GraphStream, seed: int) -> GraphStream:
    """Edge-arrival stream with the edges in a seeded random order."""
    pairs = [e.key for e in stream.edges()]
    random_stream(seed, 1).shuffle(pairs)
    h = stream.header
    return edge_stream(h.n, h.delta, pairs, a=h.a, validate=False)


def with_delta(stream: GraphStream, delta: int) -> GraphStream:
    """Same events under a different declared max degree (validated)."""
    out = GraphStream(stream.header.replace(delta=delta), stream.events)
    validate_stream(out)
    return out


# -- generators -----------------------------------------------------------

def gen_regular_bipartite_stream(nA: int, nB: int, delta: int, seed: int, simple: bool = False) -> GraphStream:
    """One-sided stream where every A vertex has degree exactly ``delta``.

    The edge multiset is a union of ``delta`` random injections A -> B, so
    every B vertex has degree at most ``delta``.  With ``simple=True`` the
    injections are shifted copies of one random injection (a random Latin
    rectangle), which rules out parallel edges.  A = 1..nA, B = nA+1..nA+nB.
    A vertices arrive in a seeded random order.
    """
    if nA < 1 or nB < 1 or delta < 0 or nA > nB or delta > nB:
        raise InvalidParams("need 1 <= nA <= nB and 0 <= delta <= nB")
    rng = random_stream(seed, 0)
    nbrs: list[list[int]] = [[] for _ in range(nA)]
    if simple:
        base = list(range(nB))
        rng.shuffle(base)
        relabel = list(range(nB))
        rng.shuffle(relabel)
        shifts = list(range(nB))
        rng.shuffle(shifts)
        for r in shifts[:delta]:
            for i in range(nA):
                nbrs[i].append(nA + 1 + relabel[(base[i] + r) % nB])
    else:
        for _ in range(delta):
            bs = list(range(nA + 1, nA + nB + 1))
            rng.shuffle(bs)
            for i in range(nA):
                nbrs[i].append(bs[i])
    order = list(range(1, nA + 1))
    rng.shuffle(order)
    return vertex_stream(nA + nB, delta, [(x, nbrs[x - 1]) for x in order], mode=ONE_SIDED, a=nA)


def _pick_pair(rng: OracleStream, avail: list[int], present: set | None, tries: int = 32):
    """Random pair of distinct available vertices, avoiding ``present`` if given."""
    k = len(avail)
    if k < 2:
        return None
    for _ in range(tries):
        i = rng.randbelow(k)
        j = rng.randbelow(k - 1)
        if j >= i:
            j += 1
        u, v = sorted((avail[i], avail[j]))
        if present is None or (u, v) not in present:
            return (u, v)
    cands = [(avail[i], avail[j]) for i in range(k) for j in range(i + 1, k)]
    cands = [tuple(sorted(p)) for p in cands if present is None or tuple(sorted(p)) not in present]
    if not cands:
        return None
    return rng.choice(cands)


def gen_random_multigraph_stream(n: int, delta: int, repeat_bias: float, seed: int,
                                 max_edges: int | None = None) -> GraphStream:
    """Random edge-arrival multigraph of max degree <= delta.

    Each step repeats an earlier edge with probability ``repeat_bias`` (when
    some earlier edge still has room at both ends), otherwise adds a new
    pair.  Generation stops when neither is possible or ``max_edges`` is
    reached.  ``repeat_bias = 0`` yields a simple graph.
    """
    if n < 2 or delta < 1 or not 0.0 <= repeat_bias <= 1.0:
        raise InvalidParams("need n >= 2, delta >= 1 and repeat_bias in [0, 1]")
    rng = random_stream(seed, 0)
    residual = [0] + [delta] * n
    avail = list(range(1, n + 1))
    pos = {v: i for i, v in enumerate(avail)}
    present: set = set()
    distinct: list[tuple[int, int]] = []
    pairs: list[tuple[int, int]] = []

    def spend(w):
        residual[w] -= 1
        if residual[w] == 0:
            i = pos.pop(w)
            last = avail.pop()
            if last != w:
                avail[i] = last
                pos[last] = i

    def pick_repeat():
        open_ = lambda p: residual[p[0]] > 0 and residual[p[1]] > 0
        for _ in range(16):
            if not distinct:
                return None
            p = distinct[rng.randbelow(len(distinct))]
            if open_(p):
                return p
        live = [p for p in distinct if open_(p)]
        return rng.choice(live) if live else None

    limit = max_edges if max_edges is not None else n * delta // 2
    while len(pairs) < limit:
        want_repeat = repeat_bias > 0 and rng.random() < repeat_bias
        p = pick_repeat() if want_repeat else None
        if p is None:
            p = _pick_pair(rng, avail, present)
        if p is None and repeat_bias > 0:
            p = pick_repeat()
        if p is None:
            break
        if p not in present:
            present.add(p)
            distinct.append(p)
        pairs.append(p)
        spend(p[0])
        spend(p[1])
    return edge_stream(n, delta, pairs, validate=False)


def gen_bipartite_edge_stream(nA: int, nB: int, delta: int, seed: int, simple: bool = True) -> GraphStream:
    """Regular bipartite graph delivered as a shuffled edge-arrival stream."""
    vs = gen_regular_bipartite_stream(nA, nB, delta, seed, simple=simple)
    return shuffle_edges(flatten_to_edge_arrival(vs), seed)


def gen_star_stream(n: int, mode: str = EDGE_ARRIVAL) -> GraphStream:
    """Star with center 1 and leaves 2..n."""
    if n < 1:
        raise InvalidParams("n must be >= 1")
    if mode == EDGE_ARRIVAL:
        return edge_stream(n, n - 1, [(1, y) for y in range(2, n + 1)])
    if mode == ONE_SIDED:
        return vertex_stream(n, n - 1, [(1, list(range(2, n + 1)))] if n > 1 else [], mode=ONE_SIDED, a=1)
    return vertex_stream(n, n - 1, [(1, [])] + [(y, [1]) for y in range(2, n + 1)])


def gen_path_stream(n: int) -> GraphStream:
    """Path 1-2-...-n as an edge-arrival stream."""
    if n < 1:
        raise InvalidParams("n must be >= 1")
    return edge_stream(n, min(2, n - 1), [(i, i + 1) for i in range(1, n)])


def gen_greedy_adversarial_stream(delta: int) -> GraphStream:
    """Edge order on which smallest-free-color greedy needs all 2*delta - 1 colors.

    Hubs w_1..w_{delta-1} each first get delta-1 pendant edges (colors
    1..delta-1).  Vertex y is then joined to every hub, so its edges take
    colors delta..2*delta-2.  Finally x gets delta-1 pendant edges (colors
    1..delta-1) and the edge x-y is forced to color 2*delta - 1.
    """
    if delta < 1:
        raise InvalidParams("delta must be >= 1")
    k = delta - 1
    nxt = [1]

    def new():
        v = nxt[0]
        nxt[0] += 1
        return v

    pairs = []
    hubs = []
    for _ in range(k):
        w = new()
        hubs.append(w)
        for _ in range(k):
            pairs.append((w, new()))
    y = new()
    pairs += [(y, w) for w in hubs]
    x = new()
    for _ in range(k):
        pairs.append((x, new()))
    pairs.append((x, y))
    return edge_stream(nxt[0] - 1, delta, pairs)
