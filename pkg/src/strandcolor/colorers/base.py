"""Colorer contract, configuration and small shared helpers.

Every colorer is a single-owner state machine:

    process(event) -> list[Assignment]   colors for some edges (online: exactly this event's)
    finalize()     -> list[Assignment]   whatever is still uncolored
    state_size_bits() -> int             analytic size of the live state
    palette_bound()   -> int             most distinct colors it can emit

Colors are tuples of nonnegative ints compared structurally.  Wrappers
prepend the index of the component that produced a color, so palettes of
different components never collide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Hashable

from ..errors import InvalidParams
from ..randomness import (BitOracle, CycleWalkPermutation, Permutation, consumer_offset, derive_seed,
                          explicit_uniform_permutation, thorp_permutation)
from ..stream import EdgeInstance
from ..structures import bits_for, is_power_of_two

ColorTuple = tuple

PROFILES = ("desk", "paper")
EXPLICIT_MAX_SIZE = 1 << 22


@dataclass(frozen=True)
class Assignment:
    edge: EdgeInstance
    color: ColorTuple

    @property
    def seq(self) -> int:
        return self.edge.seq


def prefixed(prefix: tuple, assignments: list[Assignment]) -> list[Assignment]:
    return [Assignment(a.edge, prefix + a.color) for a in assignments]


@dataclass(frozen=True)
class ColorerConfig:
    """Parameters shared by all colorers.

    ``failure`` is the target failure probability (delta in the analyses).
    ``profile`` picks the constant set: ``paper`` uses the constants from the
    analyses, ``desk`` uses smaller ones that fit laptop-scale runs.
    ``overrides`` replaces any named constant; see :meth:`const`.
    """

    n: int
    delta: int
    failure: float = 0.1
    profile: str = "desk"
    seed: int = 0
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise InvalidParams(f"unknown profile {self.profile!r}")
        if self.n < 0 or self.delta < 0:
            raise InvalidParams("n and delta must be nonnegative")
        if not 0 < self.failure < 1:
            raise InvalidParams("failure must lie in (0, 1)")

    def const(self, name: str, desk, paper=None):
        if name in self.overrides:
            return self.overrides[name]
        if self.profile == "paper" and paper is not None:
            return paper
        return desk

    def child(self, *labels: int, **changes) -> "ColorerConfig":
        """Config for a sub-instance: derived seed, optionally new n/delta."""
        return replace(self, seed=derive_seed(self.seed, *labels), **changes)

    @property
    def log_n_over_delta(self) -> float:
        return math.log2(max(self.n, 2) / self.failure)


class Colorer:
    name = "abstract"
    online = True
    modes: tuple = ()

    def __init__(self, config: ColorerConfig):
        self.config = config
        self.regime = "main"
        self.stats: dict = {}

    def process(self, event) -> list[Assignment]:
        raise NotImplementedError

    def finalize(self) -> list[Assignment]:
        return []

    def state_size_bits(self) -> int:
        raise NotImplementedError

    def palette_bound(self) -> int:
        raise NotImplementedError

    def describe(self) -> str:
        return f"{self.name}[{self.regime}]"


SideFn = Callable[[int], bool]


def make_permutation(config: ColorerConfig, C: int, oracle: BitOracle, consumer: int) -> Permutation:
    """Permutation of [C] for one vertex, as selected by the config.

    ``perm_kind``: ``explicit`` (Fisher-Yates, stored) or ``thorp`` (switching
    network; cycle-walked when C is not a power of two).  ``gate_source``
    (``poly`` or ``oracle``), ``thorp_epsilon``, ``thorp_round_scale`` and
    ``thorp_s`` tune the network.
    """
    kind = config.const("perm_kind", "explicit", "thorp")
    offset = consumer_offset(consumer)
    if kind == "explicit":
        if C > EXPLICIT_MAX_SIZE:
            raise InvalidParams(f"explicit permutation of size {C} is too large; use perm_kind=thorp")
        return explicit_uniform_permutation(C, oracle, offset)
    if kind == "thorp":
        d = max(1, (C - 1).bit_length())
        base = thorp_permutation(d, config.const("thorp_epsilon", 1e-3),
                                 config.const("thorp_s", 2), oracle, offset,
                                 round_scale=config.const("thorp_round_scale", 2.0),
                                 gate_source=config.const("gate_source", "poly"))
        return base if (1 << d) == C else CycleWalkPermutation(base, C)
    raise InvalidParams(f"unknown perm_kind {kind!r}")


def smallest_free(limit: int, used_a: set, used_b: set) -> int | None:
    for c in range(1, limit + 1):
        if c not in used_a and c not in used_b:
            return c
    return None


def round_up_pow2(x: int) -> int:
    return 1 if x <= 1 else 1 << (x - 1).bit_length()


__all__ = [
    "Assignment", "ColorTuple", "ColorerConfig", "Colorer", "Hashable", "SideFn", "bits_for",
    "is_power_of_two", "make_permutation", "prefixed", "round_up_pow2", "smallest_free",
]
