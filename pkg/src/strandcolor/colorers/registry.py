"""Colorers by name, with the wrapping each stream shape needs.

One-sided vertex-arrival colorers run on two-sided bipartite streams
through :class:`TwoSidedWrapper` and on general vertex-arrival streams
through the code router on top of that.  Edge-arrival streams handed to a
vertex-arrival colorer are regrouped into vertex arrivals first.
"""

from __future__ import annotations

from ..errors import InvalidParams
from ..stream import EDGE_ARRIVAL, ONE_SIDED, GraphStream, flatten_to_edge_arrival, to_vertex_arrival
from .base import Colorer, ColorerConfig
from .edge_arrival import ConjEAColorer, DetEAColorer, RandEAColorer
from .greedy import GreedyColorer
from .vertex_arrival import BptDetVAColorer, BptRandVAColorer, ConjVAColorer
from .wrappers import GenToBptRouter, TradeoffWrapper, TwoSidedWrapper, VaToEaConverter

ONE_SIDED_COLORERS = {
    "bpt-rand-va": BptRandVAColorer,
    "bpt-det-va": BptDetVAColorer,
    "conj-va": ConjVAColorer,
}
EDGE_COLORERS = {
    "rand-ea": RandEAColorer,
    "det-ea": DetEAColorer,
    "conj-ea": ConjEAColorer,
}
ALGORITHMS = ("greedy", *ONE_SIDED_COLORERS, "w-rand-ea", "tradeoff", *EDGE_COLORERS)


def _one_sided(name):
    cls = ONE_SIDED_COLORERS[name]
    return lambda config, in_a: cls(config)


def prepare_stream(name: str, stream: GraphStream) -> GraphStream:
    """The stream the named colorer actually consumes."""
    if name not in ALGORITHMS:
        raise InvalidParams(f"unknown algorithm {name!r}")
    if name == "greedy":
        return stream
    if name in ONE_SIDED_COLORERS:
        if stream.mode == EDGE_ARRIVAL:
            return to_vertex_arrival(stream, one_sided=stream.header.a is not None)
        return stream
    return flatten_to_edge_arrival(stream)


def build_colorer(name: str, config: ColorerConfig, header) -> Colorer:
    """Colorer for a prepared stream with the given header."""
    if name == "greedy":
        return GreedyColorer(config)
    if name in ONE_SIDED_COLORERS:
        inner = _one_sided(name)
        if header.mode == ONE_SIDED:
            return inner(config, header.in_a)
        if header.a is not None:
            return TwoSidedWrapper(inner, config, header.in_a)
        return GenToBptRouter(lambda cfg, side: TwoSidedWrapper(inner, cfg, side), config, mode="va")
    if name == "w-rand-ea":
        inner = _one_sided(config.const("w_inner", "bpt-rand-va"))
        if header.a is not None:
            return VaToEaConverter(inner, config, header.in_a)
        return GenToBptRouter(lambda cfg, side: VaToEaConverter(inner, cfg, side), config, mode="ea")
    if name == "tradeoff":
        inner_name = config.const("tradeoff_inner", "greedy")
        if inner_name == "greedy":
            factory = lambda cfg, side: GreedyColorer(cfg)
        elif inner_name in EDGE_COLORERS:
            factory = lambda cfg, side, cls=EDGE_COLORERS[inner_name]: cls(cfg)
        else:
            raise InvalidParams(f"tradeoff inner colorer must be greedy or an edge-arrival colorer")
        return TradeoffWrapper(factory, config)
    if name in EDGE_COLORERS:
        return EDGE_COLORERS[name](config)
    raise InvalidParams(f"unknown algorithm {name!r}")
