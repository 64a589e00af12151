"""Colorers built out of other colorers.

An inner factory is any callable ``factory(config, in_a) -> Colorer`` where
``in_a(v)`` says whether ``v`` is on the arriving side of the bipartition
the instance works on.  Each wrapper prefixes inner colors with the index
of the instance that produced them.
"""

from __future__ import annotations

import math
from collections import Counter, OrderedDict
from fractions import Fraction

from ..codes import BinaryCode, build_code
from ..errors import InvalidParams, NoFreeInstance, Unroutable
from ..randomness import BitOracle, OracleStream, consumer_offset, derive_seed
from ..stream import EdgeArrival, EdgeInstance, VertexArrival
from ..structures import bits_for, clique_edge_coloring
from .base import Assignment, Colorer, ColorerConfig, prefixed
from .greedy import GreedyColorer


class TwoSidedWrapper(Colorer):
    """Bipartite vertex arrivals on both sides via two one-sided instances.

    Instance 1 takes arrivals of A-side vertices, instance 2 of B-side ones.
    """

    name = "two-sided"
    modes = ("va", "osva")

    def __init__(self, inner_factory, config: ColorerConfig, in_a):
        super().__init__(config)
        self.in_a = in_a
        self.instances = [inner_factory(config.child(1), in_a),
                          inner_factory(config.child(2), lambda v: not in_a(v))]
        self.online = all(i.online for i in self.instances)
        self.regime = self.instances[0].regime
        self.stats["events"] = [0, 0]
        self.stats["max_arrival_degree"] = [0, 0]

    def process(self, event) -> list[Assignment]:
        k = 0 if self.in_a(event.vertex) else 1
        self.stats["events"][k] += 1
        self.stats["max_arrival_degree"][k] = max(self.stats["max_arrival_degree"][k], len(event.edges))
        return prefixed((k + 1,), self.instances[k].process(event))

    def finalize(self) -> list[Assignment]:
        out = []
        for k, inst in enumerate(self.instances):
            out += prefixed((k + 1,), inst.finalize())
        return out

    def state_size_bits(self) -> int:
        return sum(i.state_size_bits() for i in self.instances)

    def palette_bound(self) -> int:
        return sum(i.palette_bound() for i in self.instances)


class GenToBptRouter(Colorer):
    """Split a general stream into ``t`` bipartite streams using a binary code.

    Part ``i`` has sides ``A_i = {v : code(v)_i = 0}`` and its complement.  An
    edge goes to the first part where its endpoints' codewords differ and
    neither endpoint is overloaded there: ``deg_i(v) * t <= overload * deg(v)``.
    Because fewer than ``t / overload`` parts can be overloaded at a vertex,
    a code of distance ``d`` always leaves a part when
    ``d > 2 t / overload``.

    Constants (desk / paper): code length ``max(16, 4 ceil(log2 n))`` /
    ``4 ceil(log2 n)``, relative distance 1/8 / 1/400, overload 16 / 1200.
    Every part instance is built with max degree
    ``min(delta, floor(overload (delta - 1) / t) + 1)``, the largest degree
    the routing rule allows.

    ``mode`` is ``ea`` (each edge routed on its own) or ``va`` (an arrival is
    split into one arrival per part).  ``strict`` turns a breach of the
    per-part degree bound into an AssertionError instead of a counter.

    State model: one degree counter of ``ceil(log2(delta + 1))`` bits per
    vertex and part, plus the part instances.
    """

    name = "router"

    def __init__(self, inner_factory, config: ColorerConfig, mode: str = "va",
                 code: BinaryCode | None = None, overload: int | None = None, strict: bool | None = None):
        super().__init__(config)
        if mode not in ("ea", "va"):
            raise InvalidParams("router mode must be ea or va")
        self.mode = mode
        self.modes = (mode,)
        n = max(config.n, 2)
        logn = math.ceil(math.log2(n))
        if code is None:
            t = config.const("code_length", max(16, 4 * logn), max(8, 4 * logn))
            rel = Fraction(config.const("code_distance", Fraction(1, 8), Fraction(1, 400)))
            code = build_code(n, t, rel, derive_seed(config.seed, 0xC0DE))
        self.code = code
        self.t = code.length
        self.overload = overload if overload is not None else config.const("overload", 16, 1200)
        self.strict = strict if strict is not None else bool(config.const("router_strict", False))
        d = config.delta
        self.part_delta = min(d, (self.overload * (d - 1)) // self.t + 1) if d >= 1 else 0
        self.factory = inner_factory
        self.parts: dict[int, Colorer] = {}
        self.deg: Counter = Counter()
        self.part_deg: Counter = Counter()
        self.counter_bits = config.n * self.t * bits_for(d + 1)
        self.stats.update(bound_breaches=0, max_part_degree=0)
        probe = self._make(1)
        self.online = probe.online
        self.regime = probe.regime
        self._part_bound = probe.palette_bound()
        self.parts.clear()

    def _make(self, i: int) -> Colorer:
        inst = self.parts.get(i)
        if inst is None:
            code = self.code
            side = lambda v, i=i: code.bit(v, i) == 0
            inst = self.factory(self.config.child(100 + i, delta=self.part_delta), side)
            self.parts[i] = inst
        return inst

    def route(self, edge: EdgeInstance) -> int:
        x, y = edge.u, edge.v
        wx, wy = self.code.word(x), self.code.word(y)
        dx, dy = self.deg[x], self.deg[y]
        t, o = self.t, self.overload
        for i in range(1, self.t + 1):
            if ((wx ^ wy) >> (i - 1)) & 1 and self.part_deg[x, i] * t <= o * dx \
                    and self.part_deg[y, i] * t <= o * dy:
                self._commit(x, i)
                self._commit(y, i)
                return i
        raise Unroutable(f"edge {edge.seq} ({x}, {y}) has no admissible part; "
                         f"deg=({dx}, {dy}), codeword distance {bin(wx ^ wy).count('1')}",
                         vertex=x, edge=edge)

    def _commit(self, v: int, i: int) -> None:
        self.part_deg[v, i] += 1
        self.deg[v] += 1
        pd = self.part_deg[v, i]
        self.stats["max_part_degree"] = max(self.stats["max_part_degree"], pd)
        # per-part degree never exceeds overload * deg / t + 1
        if pd * self.t > self.overload * self.deg[v] + self.t:
            self.stats["bound_breaches"] += 1
            if self.strict:
                raise AssertionError(f"part degree {pd} at vertex {v} breaks the routing bound")

    def process(self, event) -> list[Assignment]:
        if self.mode == "ea":
            e = event.edge
            i = self.route(e)
            return prefixed((i,), self._make(i).process(EdgeArrival(e)))
        x = event.vertex
        groups: OrderedDict[int, list] = OrderedDict()
        for e in event.edges:
            groups.setdefault(self.route(e), []).append(e)
        out = []
        for i, es in groups.items():
            out += prefixed((i,), self._make(i).process(VertexArrival(x, tuple(es))))
        return out

    def finalize(self) -> list[Assignment]:
        out = []
        for i in sorted(self.parts):
            out += prefixed((i,), self.parts[i].finalize())
        return out

    def state_size_bits(self) -> int:
        return self.counter_bits + sum(p.state_size_bits() for p in self.parts.values())

    def palette_bound(self) -> int:
        return self.t * self._part_bound


class TradeoffWrapper(Colorer):
    """Trade colors for space by contracting groups of ``s`` consecutive vertices.

    Group ``i`` is ``{s(i-1)+1, .., s i}``.  Edges inside a group get color
    ``(0, delta * (chi(<x>, <y>) - 1) + d_min)`` where ``chi`` edge-colors
    K_s, ``<x> = (x - 1) mod s + 1`` and ``d_min`` is the running degree of
    the smaller endpoint.  Other edges go to the inner colorer on the
    contracted graph (max degree ``s * delta``) with prefix 1.

    State model: one degree counter per vertex plus the inner instance.
    """

    name = "tradeoff"
    modes = ("ea",)

    def __init__(self, inner_factory, config: ColorerConfig, s: int | None = None):
        super().__init__(config)
        self.s = s if s is not None else config.const("group_size", 2)
        if self.s < 1:
            raise InvalidParams("group size must be >= 1")
        self.chi = clique_edge_coloring(self.s) if self.s >= 2 else {}
        groups = -(-config.n // self.s)
        self.inner = inner_factory(config.child(1, n=groups, delta=self.s * config.delta), lambda v: True)
        self.online = self.inner.online
        self.regime = self.inner.regime
        self.deg: Counter = Counter()
        self.pending: dict[int, EdgeInstance] = {}

    def _restore(self, assignments) -> list[Assignment]:
        return [Assignment(self.pending.pop(a.seq), (1,) + a.color) for a in assignments]

    def process(self, event) -> list[Assignment]:
        e = event.edge
        x, y = e.u, e.v
        self.deg[x] += 1
        self.deg[y] += 1
        s = self.s
        gx, gy = -(-x // s), -(-y // s)
        if gx == gy:
            rx, ry = (x - 1) % s + 1, (y - 1) % s + 1
            c = self.config.delta * (self.chi[min(rx, ry), max(rx, ry)] - 1) + self.deg[min(x, y)]
            return [Assignment(e, (0, c))]
        self.pending[e.seq] = e
        return self._restore(self.inner.process(EdgeArrival(EdgeInstance(e.seq, gx, gy))))

    def finalize(self) -> list[Assignment]:
        return self._restore(self.inner.finalize())

    def state_size_bits(self) -> int:
        return self.config.n * bits_for(self.config.delta + 1) + self.inner.state_size_bits()

    def palette_bound(self) -> int:
        return self.inner.palette_bound() + self.s * self.config.delta


class VaToEaConverter(Colorer):
    """W-streaming bipartite edge-arrival coloring from one-sided vertex-arrival colorers.

    Edges wait in a pool P.  When an A vertex collects ``r = ceil(sqrt(delta))``
    pooled edges, that star is sent as one arrival to a random instance,
    out of ``2r``, that has not yet seen the vertex.  An edge whose pooled
    multiplicity exceeds ``tau = max(1, floor(sqrt(delta) / (9 ln(n / failure))))``
    is moved, with all its pooled copies, to a side pool L.  Instances have
    max degree ``ceil(4 delta / 2r)``.  At the end P and L are colored
    greedily from a separate palette of ``2 delta - 1`` colors (prefix 0).

    State model: pooled edges at two vertex ids each, distinct L edges with
    a multiplicity, one received-bit per (instance, vertex), plus instances.
    """

    name = "va-to-ea"
    online = False
    modes = ("ea",)

    def __init__(self, inner_factory, config: ColorerConfig, in_a):
        super().__init__(config)
        d = max(config.delta, 1)
        self.in_a = in_a
        self.root = math.isqrt(d - 1) + 1 if d > 1 else 1
        self.count = 2 * self.root
        self.inner_delta = -(-4 * config.delta // self.count)
        self.tau = max(1, math.floor(math.sqrt(d) / (9 * math.log(max(config.n, 2) / config.failure))))
        self.factory = inner_factory
        self.instances: dict[int, Colorer] = {}
        self.received: dict[int, set] = {i: set() for i in range(1, self.count + 1)}
        self.rng = OracleStream(BitOracle(config.seed), consumer_offset(0))
        self.pool: dict[int, list[EdgeInstance]] = {}
        self.mult: Counter = Counter()
        self.side: list[EdgeInstance] = []
        self.side_keys: Counter = Counter()
        self.pooled = 0
        self.id_bits = bits_for(config.n + 1)
        self.stats.update(max_root_degree={}, load=Counter(), stars=0, side_edges=0)
        probe = self._inst(1)
        self.regime = probe.regime
        self._inner_bound = probe.palette_bound()

    def _inst(self, i: int) -> Colorer:
        inst = self.instances.get(i)
        if inst is None:
            inst = self.instances[i] = self.factory(self.config.child(10 + i, delta=self.inner_delta), self.in_a)
        return inst

    def process(self, event) -> list[Assignment]:
        e = event.edge
        if self.in_a(e.u) == self.in_a(e.v):
            raise InvalidParams(f"edge {e.seq} does not cross the bipartition")
        x = e.u if self.in_a(e.u) else e.v
        key = e.key
        bucket = self.pool.setdefault(x, [])
        bucket.append(e)
        self.pooled += 1
        self.mult[key] += 1
        if self.mult[key] > self.tau:
            moved = [f for f in bucket if f.key == key]
            bucket[:] = [f for f in bucket if f.key != key]
            self.pooled -= len(moved)
            del self.mult[key]
            self.side += moved
            self.side_keys[key] += len(moved)
            self.stats["side_edges"] += len(moved)
            return []
        if len(bucket) < self.root:
            return []
        choices = [j for j in range(1, self.count + 1) if x not in self.received[j]]
        if not choices:
            raise NoFreeInstance(f"vertex {x} was already sent to every instance", vertex=x)
        i = self.rng.choice(choices)
        self.received[i].add(x)
        star = self.pool.pop(x)
        self.pooled -= len(star)
        for f in star:
            self.mult[f.key] -= 1
            if self.mult[f.key] == 0:
                del self.mult[f.key]
            self.stats["load"][f.other(x), i] += 1
        roots = self.stats["max_root_degree"]
        roots[i] = max(roots.get(i, 0), len(star))
        self.stats["stars"] += 1
        return prefixed((i,), self._inst(i).process(VertexArrival(x, tuple(star))))

    def finalize(self) -> list[Assignment]:
        rest = [f for bucket in self.pool.values() for f in bucket] + self.side
        rest.sort(key=lambda f: f.seq)
        greedy = GreedyColorer(self.config)
        out = [Assignment(f, (0, greedy.color_edge(f))) for f in rest]
        self.pool.clear()
        self.side.clear()
        self.pooled = 0
        for i in sorted(self.instances):
            out += prefixed((i,), self.instances[i].finalize())
        return out

    def state_size_bits(self) -> int:
        return (self.pooled * 2 * self.id_bits
                + len(self.side_keys) * (2 * self.id_bits + bits_for(self.config.delta + 1))
                + self.count * self.config.n
                + sum(i.state_size_bits() for i in self.instances.values()))

    def palette_bound(self) -> int:
        return self.count * self._inner_bound + max(0, 2 * self.config.delta - 1)
