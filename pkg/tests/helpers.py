"""Small independent oracles used across the test modules."""

from __future__ import annotations

from itertools import permutations

from strandcolor.colorers.base import Assignment
from strandcolor.stream import EdgeArrival, EdgeInstance, GraphStream, StreamHeader


def ea(n, delta, pairs, a=None) -> GraphStream:
    events = [EdgeArrival(EdgeInstance(i, u, v)) for i, (u, v) in enumerate(pairs, start=1)]
    return GraphStream(StreamHeader(n, delta, "ea", a), events)


def colored(pairs_and_colors) -> list[Assignment]:
    return [Assignment(EdgeInstance(i, u, v), tuple(c) if isinstance(c, tuple) else (c,))
            for i, ((u, v), c) in enumerate(pairs_and_colors, start=1)]


def naive_gf_mul(a: int, b: int, h: int, modulus: int) -> int:
    """Schoolbook shift-and-add multiplication in GF(2)[x] / modulus."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a >> h & 1:
            a ^= modulus
    return result


def hall_saturable(adjacency: list[set]) -> bool:
    """Hall's condition over every subset of left vertices (bitmask neighbor unions)."""
    n = len(adjacency)
    rights = sorted(set().union(*adjacency)) if adjacency else []
    index = {r: k for k, r in enumerate(rights)}
    masks = [sum(1 << index[r] for r in adj) for adj in adjacency]
    union = [0] * (1 << n)
    for subset in range(1, 1 << n):
        low = subset & -subset
        union[subset] = union[subset ^ low] | masks[low.bit_length() - 1]
        if bin(union[subset]).count("1") < bin(subset).count("1"):
            return False
    return True


def all_perms(C: int) -> list[tuple]:
    return list(permutations(range(1, C + 1)))


class TrackerModel:
    """Direct re-statement of the free-window rules, independent of FreeColorTracker."""

    def __init__(self, C, s, delta, mapping):
        self.C, self.s, self.delta = C, s, delta
        self.mapping = list(mapping)  # mapping[i-1] = sigma(i)
        self.b = 1
        self.H = set(range(1, s + 1))
        self.Q = []
        self.dropped = []

    def current(self):
        if self.b > self.C // self.s:
            return None
        return {self.mapping[(self.b - 1) * self.s + i - 1] for i in self.H}

    def remove(self, c, ref=None):
        pos = self.mapping.index(c) + 1 - (self.b - 1) * self.s
        assert pos in self.H
        self.H.remove(pos)
        if ref is not None:
            self.Q.append(ref)
        if len(self.H) <= self.s - self.s * self.delta // self.C:
            self.H = set(range(1, self.s + 1))
            self.b += 1
            self.dropped += self.Q
            self.Q = []
