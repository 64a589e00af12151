"""Shared substrate for the colorers.

FreeColorTracker
    Sliding window over a permutation of [C].  The window is block ``b`` of
    ``s`` consecutive positions; ``H`` holds the positions not yet used.
    After ``s * delta / C`` removals the tracker moves to the next block, so
    a vertex of degree ``delta`` walks through at most ``C / s`` blocks.
RefCountedEdgePool
    Edge keys with reference counts and per-level metadata.
saturating_matching
    Hopcroft-Karp; on failure returns a Hall violator.
clique_edge_coloring
    Round-robin (circle method) coloring of K_s.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping, Sequence

from .errors import (BlockOverflow, ColorNotFree, InvalidParams, MissingEntry,
                     NoSaturatingMatching, UnderflowRef)


def is_power_of_two(x: int) -> bool:
    return x >= 1 and (x & (x - 1)) == 0


def next_power_of_two(x: float) -> int:
    """Least power of two >= x (and >= 1)."""
    p = 1
    while p < x:
        p <<= 1
    return p


def bits_for(values: int) -> int:
    """Bits needed to store one of ``values`` distinct values."""
    return max(0, math.ceil(math.log2(values))) if values > 1 else 0


class FreeColorTracker:
    """Free-color window for one vertex.

    ``sigma`` is any permutation handle with ``forward``.  When ``on_drop`` is
    given, references passed to :meth:`remove_and_update` are collected and
    handed back to ``on_drop`` one by one at the next block switch.

    The block counter may step past ``C / s`` when the last block is used
    up; :class:`BlockOverflow` is raised only when such a tracker is used
    again.  A vertex that never needs another color is not an error.
    """

    __slots__ = ("C", "s", "delta", "sigma", "on_drop", "H", "b", "Q",
                 "threshold", "blocks", "_free", "_pos", "owner")

    def __init__(self, C: int, s: int, delta: int, sigma, on_drop: Callable | None = None, owner=None):
        for name, val in (("C", C), ("s", s), ("delta", delta)):
            if not is_power_of_two(val):
                raise InvalidParams(f"{name}={val} must be a power of two")
        if s > C or delta > C:
            raise InvalidParams("need s <= C and delta <= C")
        if s * delta < C:
            raise InvalidParams("s * delta / C must be >= 1")
        if sigma.size != C:
            raise InvalidParams("permutation size must equal C")
        self.C, self.s, self.delta = C, s, delta
        self.sigma = sigma
        self.on_drop = on_drop
        self.owner = owner
        self.blocks = C // s
        self.threshold = s - (s * delta) // C
        self.b = 1
        self.Q: list = []
        self._load_block()

    def _load_block(self) -> None:
        self.H = set(range(1, self.s + 1))
        if self.b > self.blocks:
            self._free = set()
            self._pos = {}
            return
        start = (self.b - 1) * self.s + 1
        if hasattr(self.sigma, "block"):
            vals = self.sigma.block(start, start + self.s - 1)
        else:
            vals = self.sigma.forward_many(range(start, start + self.s))
        self._pos = {c: i for i, c in enumerate(vals, start=1)}
        self._free = set(vals)

    def _check_block(self) -> None:
        if self.b > self.blocks:
            raise BlockOverflow(f"tracker ran past its last block ({self.blocks})", vertex=self.owner)

    @property
    def overflowed(self) -> bool:
        return self.b > self.blocks

    def current_set(self) -> set[int]:
        self._check_block()
        return set(self._free)

    def free_view(self) -> set[int]:
        """The live free set; callers must not mutate it."""
        self._check_block()
        return self._free

    def remove_and_update(self, c: int, ref: Hashable | None = None) -> None:
        self._check_block()
        if c not in self._free:
            raise ColorNotFree(f"color {c} is not currently free at vertex {self.owner}")
        self.H.discard(self._pos[c])
        self._free.discard(c)
        if ref is not None:
            self.Q.append(ref)
        if len(self.H) <= self.threshold:
            self.b += 1
            dropped, self.Q = self.Q, []
            if self.on_drop is not None:
                for r in dropped:
                    self.on_drop(r)
            self._load_block()

    def state_bits(self, ref_bits: int = 0) -> int:
        return self.s + bits_for(self.blocks) + len(self.Q) * ref_bits


def tracker_init(C: int, s: int, delta: int, sigma, on_drop=None) -> FreeColorTracker:
    return FreeColorTracker(C, s, delta, sigma, on_drop)


def tracker_current_set(t: FreeColorTracker) -> set[int]:
    return t.current_set()


def tracker_remove_and_update(t: FreeColorTracker, c: int, ref=None) -> None:
    t.remove_and_update(c, ref)


# -- reference-counted pool -----------------------------------------------

@dataclass
class PoolEntry:
    refcount: int = 0
    meta: dict = field(default_factory=dict)


class RefCountedEdgePool:
    """Edge keys with reference counts; metadata is per level ``(M, chi)``.

    An entry exists exactly while its count is positive, so an edge that
    leaves and re-enters the pool starts again with ``M = 0`` at every level.
    """

    def __init__(self, entry_bits: int = 0):
        self.entries: dict = {}
        self.entry_bits = entry_bits
        self.peak = 0

    def __contains__(self, key) -> bool:
        return key in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def refcount(self, key) -> int:
        e = self.entries.get(key)
        return e.refcount if e else 0

    def incref(self, key) -> int:
        e = self.entries.get(key)
        if e is None:
            e = self.entries[key] = PoolEntry()
            self.peak = max(self.peak, len(self.entries))
        e.refcount += 1
        return e.refcount

    touch = incref

    def decref(self, key) -> int:
        e = self.entries.get(key)
        if e is None:
            raise UnderflowRef(f"decref of {key!r} with no references")
        e.refcount -= 1
        if e.refcount == 0:
            del self.entries[key]
        return e.refcount

    def get_meta(self, key, level: int) -> tuple[int, tuple | None]:
        e = self.entries.get(key)
        if e is None:
            raise MissingEntry(key)
        return e.meta.get(level, (0, None))

    def set_meta(self, key, level: int, count: int, klass: tuple) -> None:
        e = self.entries.get(key)
        if e is None:
            raise MissingEntry(key)
        e.meta[level] = (count, klass)

    def state_bits(self) -> int:
        return len(self.entries) * self.entry_bits


pool_touch = RefCountedEdgePool.touch
pool_incref = RefCountedEdgePool.incref
pool_decref = RefCountedEdgePool.decref
pool_get_meta = RefCountedEdgePool.get_meta
pool_set_meta = RefCountedEdgePool.set_meta


# -- saturating matching --------------------------------------------------

@dataclass
class MatchingProblem:
    left: list
    adjacency: list  # aligned with ``left``


def saturating_matching(left: Sequence, adjacency: Mapping | Sequence) -> dict:
    """Left-saturating matching, or :class:`NoSaturatingMatching` with a Hall violator.

    ``adjacency`` is either a mapping from left item to right items or a
    sequence aligned with ``left``.  Left items are processed in order and
    right items in ascending order, so the result is deterministic.
    """
    if isinstance(adjacency, Mapping):
        adj = [sorted(adjacency[x]) for x in left]
    else:
        adj = [sorted(a) for a in adjacency]
    n = len(left)
    match_l = [None] * n
    match_r: dict = {}
    INF = n + 1

    while True:
        # BFS layers from free left vertices
        dist = [INF] * n
        q = deque()
        for i in range(n):
            if match_l[i] is None:
                dist[i] = 0
                q.append(i)
        found = False
        while q:
            i = q.popleft()
            for r in adj[i]:
                j = match_r.get(r)
                if j is None:
                    found = True
                elif dist[j] == INF:
                    dist[j] = dist[i] + 1
                    q.append(j)
        if not found:
            break

        def augment(i):
            for r in adj[i]:
                j = match_r.get(r)
                if j is None or (dist[j] == dist[i] + 1 and augment(j)):
                    match_l[i] = r
                    match_r[r] = i
                    return True
            dist[i] = INF
            return False

        progressed = False
        for i in range(n):
            if match_l[i] is None and augment(i):
                progressed = True
        if not progressed:
            break

    free = [i for i in range(n) if match_l[i] is None]
    if free:
        # left vertices reachable by alternating paths from one free vertex
        start = free[0]
        seen = {start}
        q = deque([start])
        while q:
            i = q.popleft()
            for r in adj[i]:
                j = match_r.get(r)
                if j is not None and j not in seen:
                    seen.add(j)
                    q.append(j)
        raise NoSaturatingMatching([left[i] for i in sorted(seen)])
    return {left[i]: match_l[i] for i in range(n)}


def hall_violated(adjacency: Sequence, subset: Sequence[int]) -> bool:
    """True iff the left index set ``subset`` has fewer neighbors than members."""
    nbrs = set()
    for i in subset:
        nbrs.update(adjacency[i])
    return len(nbrs) < len(subset)


# -- clique edge coloring -------------------------------------------------

def clique_edge_coloring(s: int) -> dict[tuple[int, int], int]:
    """Proper coloring of the edges of K_s (vertices 1..s) with at most s colors.

    Circle method: with an even number of slots ``m`` one vertex stays fixed
    and the rest rotate, giving ``m - 1`` perfect matchings.  Odd ``s`` adds a
    dummy slot, whose partner simply sits out that round.
    """
    if s < 2:
        raise InvalidParams("clique coloring needs s >= 2")
    m = s if s % 2 == 0 else s + 1
    ring = m - 1
    coloring = {}
    for r in range(ring):
        pairs = [(r, ring)]
        for k in range(1, m // 2):
            pairs.append(((r + k) % ring, (r - k) % ring))
        for a, b in pairs:
            if a < s and b < s:
                u, v = sorted((a + 1, b + 1))
                coloring[(u, v)] = r + 1
    return coloring
