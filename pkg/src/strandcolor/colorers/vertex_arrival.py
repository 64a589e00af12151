"""Colorers for one-sided vertex arrivals.

Each event is a :class:`VertexArrival`; the arriving vertex is on the
"arriving" side and every other endpoint is on the fixed side.  Per-vertex
state lives only on the fixed side, keyed by vertex id, so these colorers
do not need to know the bipartition itself.
"""

from __future__ import annotations

import math
from collections import OrderedDict

from ..errors import (IndexOverflow, NoSaturatingMatching, PermutationExhausted, PointerOverflow,
                      PoolMemoryCap)
from ..randomness import BitOracle, LazyUniformPermutation, OracleStream, consumer_offset
from ..structures import bits_for, saturating_matching
from .base import Assignment, Colorer, ColorerConfig, make_permutation
from .greedy import GreedyColorer


class BptRandVAColorer(Colorer):
    """Randomized 5*delta coloring with one lazy random permutation per fixed vertex.

    Fixed vertex ``y`` hands out ``sigma_y[h_y], sigma_y[h_y + 1], ...``,
    skipping colors the arriving vertex already used in this event.  Below
    ``delta < ceil(6 ln(n / failure))`` the edges go to greedy instead.

    State model: one pointer of ``ceil(log2(C + 2))`` bits per touched fixed
    vertex.  Permutations are oracle reads, not state.
    """

    name = "bpt-rand-va"
    modes = ("osva",)

    def __init__(self, config: ColorerConfig):
        super().__init__(config)
        d = config.delta
        self.C = config.const("palette_factor", 5, 5) * d
        self.cutoff = math.ceil(6 * math.log(max(config.n, 2) / config.failure))
        self.fallback = GreedyColorer(config) if d < self.cutoff else None
        if self.fallback is not None:
            self.regime = "greedy"
        self.oracle = BitOracle(config.seed)
        self.sigma: dict[int, LazyUniformPermutation] = {}
        self.pointer: dict[int, int] = {}
        self.pointer_bits = bits_for(self.C + 2)
        self.stats["max_pointer"] = 0

    def _perm(self, y: int) -> LazyUniformPermutation:
        p = self.sigma.get(y)
        if p is None:
            p = self.sigma[y] = LazyUniformPermutation(self.C, self.oracle, consumer_offset(y))
        return p

    def process(self, event) -> list[Assignment]:
        if self.fallback is not None:
            return self.fallback.process(event)
        x = event.vertex
        C = self.C
        used: set[int] = set()
        out = []
        for e in event.edges:
            y = e.other(x)
            sigma = self._perm(y)
            h = self.pointer.get(y, 1)
            while h <= C and sigma.forward(h) in used:
                h += 1
            if h > C:
                raise PointerOverflow(f"pointer of vertex {y} ran past C={C}", vertex=y, edge=e)
            c = sigma.forward(h)
            used.add(c)
            self.pointer[y] = h + 1
            self.stats["max_pointer"] = max(self.stats["max_pointer"], h)
            out.append(Assignment(e, (c,)))
        return out

    def oracle_bits(self) -> int:
        return sum(p.bits_consumed for p in self.sigma.values())

    def state_size_bits(self) -> int:
        if self.fallback is not None:
            return self.fallback.state_size_bits()
        return len(self.pointer) * self.pointer_bits

    def palette_bound(self) -> int:
        return self.fallback.palette_bound() if self.fallback is not None else self.C


class BptDetVAColorer(Colorer):
    """Deterministic coloring driven by per-vertex permutation advice.

    Fixed vertex ``y`` keeps a block counter ``b_y`` and a set ``Q_y`` of
    unused slots in block ``b_y``.  For each arrival, every fixed neighbor
    offers the colors ``sigma_y[(b_y - 1) s + Q_y]``; a neighbor joined by
    ``d >= s / theta`` parallel edges also offers the fresh index range
    ``b_y s + 1 .. (b_y + ceil(f d / s)) s``.  A saturating matching from the
    arriving edges to offered colors picks the colors.

    Constants (desk / paper): C = 64 / 2^18 times delta,
    s = ceil(8 / 2^18 times log2(n delta / failure)), theta = 4 / 16,
    f = 4 / 64, and a block refresh after s / r low-degree removals with
    r = 4 / 2^17.  After a high-degree neighbor, ``b_y`` advances past the
    fresh range it offered: by ``ceil(f d / s) + 1``.

    ``advice`` optionally maps a fixed vertex to its permutation; by default
    permutations are drawn from the oracle.

    State model per touched fixed vertex: ``s`` bits for Q and
    ``ceil(log2(C / s + 2))`` bits for the block counter.
    """

    name = "bpt-det-va"
    modes = ("osva",)

    def __init__(self, config: ColorerConfig, advice=None):
        super().__init__(config)
        n, d, fail = max(config.n, 2), config.delta, config.failure
        logterm = math.log2(n * max(d, 1) / fail)
        self.C = config.const("c_palette", 64, 1 << 18) * d
        self.s = math.ceil(config.const("c_block", 8, 1 << 18) * logterm)
        self.theta = config.const("high_degree_divisor", 4, 16)
        self.fresh = config.const("fresh_factor", 4, 64)
        self.refresh_divisor = config.const("refresh_divisor", 4, 1 << 17)
        self.fallback = GreedyColorer(config) if d <= logterm else None
        if self.fallback is not None:
            self.regime = "greedy"
        self.oracle = BitOracle(config.seed)
        self.advice = advice
        self.sigma: dict = {}
        self.block: dict[int, int] = {}
        self.free: dict[int, set] = {}
        self.vertex_bits = self.s + bits_for(self.C // max(self.s, 1) + 2)
        self.stats.update(max_index=0, high_degree_events=0)

    def _perm(self, y: int):
        p = self.sigma.get(y)
        if p is None:
            if self.advice is not None:
                p = self.advice(y) if callable(self.advice) else self.advice[y]
            else:
                p = make_permutation(self.config, self.C, self.oracle, y)
            self.sigma[y] = p
        return p

    def _state(self, y: int):
        if y not in self.block:
            self.block[y] = 1
            self.free[y] = set(range(1, self.s + 1))
        return self.block[y], self.free[y]

    def process(self, event) -> list[Assignment]:
        if self.fallback is not None:
            return self.fallback.process(event)
        x = event.vertex
        s = self.s
        groups: OrderedDict[int, list] = OrderedDict()
        for e in event.edges:
            groups.setdefault(e.other(x), []).append(e)

        offered: dict[int, list[int]] = {}
        high: dict[int, bool] = {}
        for y, es in groups.items():
            b, q = self._state(y)
            d = len(es)
            idx = [(b - 1) * s + i for i in sorted(q)]
            high[y] = d * self.theta >= s
            if high[y]:
                idx.extend(range(b * s + 1, (b + math.ceil(self.fresh * d / s)) * s + 1))
            top = max(idx) if idx else 0
            if top > self.C:
                raise IndexOverflow(f"index {top} exceeds C={self.C} at vertex {y}", vertex=y)
            self.stats["max_index"] = max(self.stats["max_index"], top)
            offered[y] = self._perm(y).forward_many(idx)

        left = list(event.edges)
        adjacency = [offered[e.other(x)] for e in left]
        try:
            match = saturating_matching(left, adjacency)
        except NoSaturatingMatching as err:
            raise NoSaturatingMatching(err.witness, f"no saturating matching for arrival of {x}",
                                       vertex=x) from None

        out = []
        for e in left:
            c = match[e]
            y = e.other(x)
            if not high[y]:
                b = self.block[y]
                self.free[y].discard(self._perm(y).inverse(c) - (b - 1) * s)
            out.append(Assignment(e, (c,)))

        for y, es in groups.items():
            if high[y]:
                self.stats["high_degree_events"] += 1
                self.free[y] = set(range(1, s + 1))
                self.block[y] += math.ceil(self.fresh * len(es) / s) + 1
            elif len(self.free[y]) <= s - s / self.refresh_divisor:
                self.block[y] += 1
                self.free[y] = set(range(1, s + 1))
        return out

    def state_size_bits(self) -> int:
        if self.fallback is not None:
            return self.fallback.state_size_bits()
        return len(self.block) * self.vertex_bits

    def palette_bound(self) -> int:
        return self.fallback.palette_bound() if self.fallback is not None else self.C


class ConjVAColorer(Colorer):
    """2*delta - 1 coloring that keeps every tried-but-unused color.

    Fixed vertex ``b`` grows a pool ``F_b`` by walking its permutation until
    the pool has a color the arriving vertex has not used yet, then a random
    such color is taken.  Edges of an arrival are handled in random order.
    ``pool_cap`` (total pool entries) guards the unproven space bound.

    State model: pool entries at ``ceil(log2 C)`` bits plus one pointer per
    touched fixed vertex.
    """

    name = "conj-va"
    modes = ("osva",)

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

    def process(self, event) -> list[Assignment]:
        a = event.vertex
        order = list(range(len(event.edges)))
        self.rng.shuffle(order)
        used: set[int] = set()
        colors = {}
        C = self.C
        for k in order:
            e = event.edges[k]
            b = e.other(a)
            if b not in self.sigma:
                self.sigma[b] = LazyUniformPermutation(C, self.oracle, consumer_offset(b))
                self.pointer[b] = 1
                self.pool[b] = set()
            pool = self.pool[b]
            while pool <= used:
                h = self.pointer[b]
                if h > C:
                    raise PermutationExhausted(f"permutation of vertex {b} exhausted", vertex=b, edge=e)
                pool.add(self.sigma[b].forward(h))
                self.pointer[b] = h + 1
                self.total += 1
                self._note_peak()
            c = self.rng.choice(sorted(pool - used))
            pool.discard(c)
            self.total -= 1
            used.add(c)
            colors[k] = c
        return [Assignment(e, (colors[k],)) for k, e in enumerate(event.edges)]

    def _note_peak(self):
        if self.total > self.stats["pool_peak"]:
            self.stats["pool_peak"] = self.total
            if self.cap is not None and self.total > self.cap:
                raise PoolMemoryCap(f"retained pools hold {self.total} > cap {self.cap}")

    def state_size_bits(self) -> int:
        return self.total * bits_for(self.C) + len(self.pointer) * bits_for(self.C + 2)

    def palette_bound(self) -> int:
        return 2 * self.config.delta - 1 if self.config.delta else 0
