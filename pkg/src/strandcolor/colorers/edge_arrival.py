"""Colorers for adversarial edge arrivals."""

from __future__ import annotations

import math

from ..errors import EmptyIntersection, LevelExhausted, OverflowPaletteExhausted, PermutationExhausted, PoolMemoryCap
from ..randomness import BitOracle, LazyUniformPermutation, OracleStream, consumer_offset
from ..structures import FreeColorTracker, RefCountedEdgePool, bits_for, next_power_of_two
from .base import Assignment, Colorer, ColorerConfig, make_permutation, round_up_pow2
from .greedy import GreedyColorer


def _block_size(config: ColorerConfig, delta: int, desk: int, paper: int) -> int:
    # least power of two >= c * sqrt(delta * log2(n / failure)); "block_size" pins it
    if "block_size" in config.overrides:
        return config.overrides["block_size"]
    c = config.const("c_block", desk, paper)
    return next_power_of_two(c * math.sqrt(delta * config.log_n_over_delta))


class RandEAColorer(Colorer):
    """Randomized O(delta) coloring: each vertex keeps a free-color window.

    The color of an edge is drawn uniformly from the intersection of the two
    endpoints' windows.  Delta is rounded up to a power of two.  Constants
    (desk / paper): C = 16 / 128 times delta, window
    ``s = 2^ceil(log2(c sqrt(delta log2(n / failure))))`` with c = 16 / 128.
    Small delta (below ``log2(n / failure)``) or ``s > C`` falls back to greedy.
    ``advice`` optionally maps a vertex to its permutation of [C].

    State model: ``s + ceil(log2(C / s))`` bits per vertex.
    """

    name = "rand-ea"
    modes = ("ea",)

    def __init__(self, config: ColorerConfig, advice=None):
        super().__init__(config)
        self.advice = advice
        self.delta = round_up_pow2(max(config.delta, 1))
        self.C = config.const("c_palette", 16, 128) * self.delta
        self.s = _block_size(config, self.delta, 16, 128)
        self.fallback = None
        if config.delta < config.log_n_over_delta or self.s > self.C:
            self.fallback = GreedyColorer(config)
            self.regime = "greedy"
        self.oracle = BitOracle(config.seed)
        self.rng = OracleStream(self.oracle, consumer_offset(0))
        self.trackers: dict[int, FreeColorTracker] = {}
        self.stats["min_intersection"] = None

    def _tracker(self, v: int) -> FreeColorTracker:
        t = self.trackers.get(v)
        if t is None:
            if self.advice is not None:
                sigma = self.advice(v)
            else:
                sigma = make_permutation(self.config, self.C, self.oracle, v)
            t = self.trackers[v] = FreeColorTracker(self.C, self.s, self.delta, sigma, owner=v)
        return t

    def process(self, event) -> list[Assignment]:
        if self.fallback is not None:
            return self.fallback.process(event)
        e = event.edge
        tx, ty = self._tracker(e.u), self._tracker(e.v)
        both = tx.free_view() & ty.free_view()
        m = self.stats["min_intersection"]
        self.stats["min_intersection"] = len(both) if m is None else min(m, len(both))
        if not both:
            raise EmptyIntersection(f"free windows of {e.u} and {e.v} are disjoint", edge=e)
        c = self.rng.choice(sorted(both))
        tx.remove_and_update(c)
        ty.remove_and_update(c)
        return [Assignment(e, (c,))]

    def state_size_bits(self) -> int:
        if self.fallback is not None:
            return self.fallback.state_size_bits()
        return self.config.n * (self.s + bits_for(self.C // self.s))

    def palette_bound(self) -> int:
        return self.fallback.palette_bound() if self.fallback is not None else self.C


class PartialColorer:
    """One layer of the deterministic edge-arrival colorer.

    Colors an edge with the smallest color free in both endpoints' windows,
    or returns None.  Each window records which pooled edges it colored;
    those references are released when the window moves on.  A colored
    edge still in the pool afterwards is marked with ``M = 1`` and class
    ``(layer, c)`` at ``level``.
    """

    def __init__(self, C: int, s: int, delta: int, sigma_of, pool: RefCountedEdgePool,
                 level: int = 0, layer: int = 1, ref_bits: int = 0):
        self.C, self.s, self.delta = C, s, delta
        self.sigma_of = sigma_of
        self.pool = pool
        self.level, self.layer = level, layer
        self.ref_bits = ref_bits
        self.trackers: dict[int, FreeColorTracker] = {}
        self.refs = 0
        self.attempted = 0
        self.colored = 0

    def _drop(self, key) -> None:
        self.refs -= 1
        self.pool.decref(key)

    def tracker(self, v: int) -> FreeColorTracker:
        t = self.trackers.get(v)
        if t is None:
            t = self.trackers[v] = FreeColorTracker(self.C, self.s, self.delta, self.sigma_of(v),
                                                    on_drop=self._drop, owner=v)
        return t

    def process(self, edge) -> int | None:
        self.attempted += 1
        tx, ty = self.tracker(edge.u), self.tracker(edge.v)
        both = tx.free_view() & ty.free_view()
        if not both:
            return None
        c = min(both)
        key = edge.key
        for t in (tx, ty):
            self.pool.incref(key)
            self.refs += 1
            t.remove_and_update(c, key)
        if key in self.pool:
            self.pool.set_meta(key, self.level, 1, (self.layer, c))
        self.colored += 1
        return c

    @property
    def fraction(self) -> float:
        return self.colored / self.attempted if self.attempted else 1.0

    def state_bits(self, n: int) -> int:
        return n * (self.s + bits_for(self.C // self.s)) + self.refs * self.ref_bits


class DetEALevel:
    """All layers of one level plus the overflow palette D.

    Palette ``C = 32 delta_l``.  There are ``ceil(log_{3/2} delta_l)`` layers
    when ``delta_l`` reaches the threshold (desk 16, paper
    ``256 log2(n / failure)``), otherwise none.  An edge no layer colors goes
    to D: it takes the smallest class of ``[C]`` unused by D edges at either
    endpoint and keeps a permanent pool reference.
    """

    def __init__(self, config: ColorerConfig, level: int, delta: int, pool: RefCountedEdgePool,
                 sigma_of, ref_bits: int):
        self.level, self.delta = level, delta
        self.C = config.const("c_level_palette", 32) * delta
        threshold = config.const("layer_threshold", 16, 256 * config.log_n_over_delta)
        self.layers_count = math.ceil(math.log(delta, 1.5)) if delta >= threshold and delta > 1 else 0
        s = _block_size(config, delta, 16, 512)
        self.s = max(min(s, self.C), self.C // delta)
        self.pool = pool
        self.n = config.n
        self.layers = [PartialColorer(self.C, self.s, delta, sigma_of, pool, level, xi + 1, ref_bits)
                       for xi in range(self.layers_count)]
        self.overflow: dict[int, set] = {}
        self.overflow_edges = 0
        self.id_bits = bits_for(config.n + 1)

    def process(self, edge) -> tuple[int, int]:
        for layer in self.layers:
            c = layer.process(edge)
            if c is not None:
                return layer.layer, c
        ux = self.overflow.setdefault(edge.u, set())
        uy = self.overflow.setdefault(edge.v, set())
        for c in range(1, self.C + 1):
            if c not in ux and c not in uy:
                break
        else:
            raise OverflowPaletteExhausted(f"overflow palette of level {self.level} exhausted", edge=edge)
        ux.add(c)
        uy.add(c)
        key = edge.key
        self.pool.incref(key)
        self.pool.set_meta(key, self.level, 1, (0, c))
        self.overflow_edges += 1
        return 0, c

    def state_bits(self) -> int:
        return (sum(layer.state_bits(self.n) for layer in self.layers)
                + self.overflow_edges * (2 * self.id_bits + bits_for(self.C)))

    def palette(self) -> int:
        return (self.layers_count + 1) * self.C


class DetEAColorer(Colorer):
    """Deterministic edge-arrival coloring for multigraphs.

    Level ``l`` handles max degree ``delta / 2^l``.  A pooled edge with class
    ``(i, j)`` at level ``l`` reuses it for its next ``2^l - 1`` copies as
    ``(l, i, (j - 1) 2^l + M)``; after that it moves to the next level.  New
    edges, and edges whose level count is 0, are colored by the level.

    ``advice`` maps ``(level, v)`` to a permutation of the level palette;
    without it permutations come from the oracle.
    """

    name = "det-ea"
    modes = ("ea",)

    def __init__(self, config: ColorerConfig, advice=None):
        super().__init__(config)
        self.delta = round_up_pow2(max(config.delta, 1))
        self.top = self.delta.bit_length() - 1
        self.oracle = BitOracle(config.seed)
        self.advice = advice
        self.levels: dict[int, DetEALevel] = {}
        id_bits = bits_for(config.n + 1)
        self.ref_bits = 2 * id_bits
        entry = 2 * id_bits
        self._palette = 0
        for l in range(self.top + 1):
            probe = self._spec(l)
            entry += bits_for((1 << l) + 1) + bits_for(probe[1] + 1) + bits_for(probe[0])
            self._palette += (probe[1] + 1) * probe[0] * (1 << l)
        self.pool = RefCountedEdgePool(entry)
        self.stats.update(level_hits=[0] * (self.top + 1), overflow_edges=0)

    def _spec(self, l: int) -> tuple[int, int]:
        d = self.delta >> l
        C = self.config.const("c_level_palette", 32) * d
        threshold = self.config.const("layer_threshold", 16, 256 * self.config.log_n_over_delta)
        layers = math.ceil(math.log(d, 1.5)) if d >= threshold and d > 1 else 0
        return C, layers

    def _level(self, l: int) -> DetEALevel:
        lv = self.levels.get(l)
        if lv is None:
            d = self.delta >> l
            C = self._spec(l)[0]
            cache: dict = {}

            def sigma_of(v, l=l, C=C):
                p = cache.get(v)
                if p is None:
                    if self.advice is not None:
                        p = self.advice(l, v)
                    else:
                        p = make_permutation(self.config, C, self.oracle, v + l * (self.config.n + 1))
                    cache[v] = p
                return p

            lv = self.levels[l] = DetEALevel(self.config, l, d, self.pool, sigma_of, self.ref_bits)
        return lv

    def process(self, event) -> list[Assignment]:
        e = event.edge
        key = e.key
        for l in range(self.top + 1):
            if key in self.pool:
                M, klass = self.pool.get_meta(key, l)
                if M > 0:
                    if M == 1 << l:
                        continue
                    self.pool.set_meta(key, l, M + 1, klass)
                    i, j = klass
                    self.stats["level_hits"][l] += 1
                    return [Assignment(e, (l, i, (j - 1) * (1 << l) + M + 1))]
            xi, c = self._level(l).process(e)
            self.stats["level_hits"][l] += 1
            if xi == 0:
                self.stats["overflow_edges"] += 1
            return [Assignment(e, (l, xi, (c - 1) * (1 << l) + 1))]
        raise LevelExhausted(f"edge {e.seq} passed every level", edge=e)

    def state_size_bits(self) -> int:
        return self.pool.state_bits() + sum(lv.state_bits() for lv in self.levels.values())

    def palette_bound(self) -> int:
        return self._palette


class ConjEAColorer(Colorer):
    """2*delta - 1 edge-arrival coloring that grows both endpoints' pools.

    Each vertex walks its own permutation of [2 delta - 1].  Until the two
    pools share a color, each endpoint whose walk is not finished adds its
    next color.  The edge takes a uniform color from the intersection.
    ``pool_cap`` bounds the total pool size.
    """

    name = "conj-ea"
    modes = ("ea",)

    def __init__(self, config: ColorerConfig):
        super().__init__(config)
        self.C = max(1, 2 * config.delta - 1)
        self.cap = config.const("pool_cap", None)
        self.oracle = BitOracle(config.seed)
        self.rng = OracleStream(self.oracle, consumer_offset(0))
        self.sigma: dict[int, LazyUniformPermutation] = {}
        self.pointer: dict[int, int] = {}
        self.pool: dict[int, set] = {}
        self.total = 0
        self.stats["pool_peak"] = 0

    def _vertex(self, v: int) -> set:
        if v not in self.sigma:
            self.sigma[v] = LazyUniformPermutation(self.C, self.oracle, consumer_offset(v))
            self.pointer[v] = 1
            self.pool[v] = set()
        return self.pool[v]

    def _grow(self, v: int):
        h = self.pointer[v]
        if h > self.C:
            return None
        c = self.sigma[v].forward(h)
        self.pointer[v] = h + 1
        self.pool[v].add(c)
        self.total += 1
        if self.total > self.stats["pool_peak"]:
            self.stats["pool_peak"] = self.total
            if self.cap is not None and self.total > self.cap:
                raise PoolMemoryCap(f"retained pools hold {self.total} > cap {self.cap}", vertex=v)
        return c

    def process(self, event) -> list[Assignment]:
        e = event.edge
        x, y = e.u, e.v
        fx, fy = self._vertex(x), self._vertex(y)
        common = fx & fy
        while not common:
            cx, cy = self._grow(x), self._grow(y)
            if cx is None and cy is None:
                raise PermutationExhausted(f"both permutations of {x} and {y} exhausted", edge=e)
            common = {c for c in (cx, cy) if c is not None and c in fx and c in fy}
        c = self.rng.choice(sorted(common))
        fx.discard(c)
        fy.discard(c)
        self.total -= 2
        return [Assignment(e, (c,))]

    def state_size_bits(self) -> int:
        return self.total * bits_for(self.C) + len(self.pointer) * bits_for(self.C + 2)

    def palette_bound(self) -> int:
        return 2 * self.config.delta - 1 if self.config.delta else 0
