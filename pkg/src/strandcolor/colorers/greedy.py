"""Smallest-free-color greedy over [2*delta - 1]."""

from __future__ import annotations

from ..errors import PaletteExhausted
from .base import Assignment, Colorer, ColorerConfig, smallest_free


class GreedyColorer(Colorer):
    """Online greedy; takes edge or vertex events (a vertex event is its edges in order).

    State model: one bitmap of 2*delta - 1 bits per vertex.
    """

    name = "greedy"
    modes = ("ea", "va", "osva")

    def __init__(self, config: ColorerConfig):
        super().__init__(config)
        self.limit = max(0, 2 * config.delta - 1)
        self.used: dict[int, set] = {}

    def color_edge(self, edge) -> int:
        ux = self.used.setdefault(edge.u, set())
        uy = self.used.setdefault(edge.v, set())
        c = smallest_free(self.limit, ux, uy)
        if c is None:
            raise PaletteExhausted(f"no free color in [1, {self.limit}] for edge {edge.seq}", edge=edge)
        ux.add(c)
        uy.add(c)
        return c

    def process(self, event) -> list[Assignment]:
        return [Assignment(e, (self.color_edge(e),)) for e in event.edges]

    def state_size_bits(self) -> int:
        return self.config.n * self.limit

    def palette_bound(self) -> int:
        return self.limit
