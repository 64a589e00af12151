from .base import Assignment, Colorer, ColorerConfig, make_permutation, prefixed
from .edge_arrival import ConjEAColorer, DetEAColorer, DetEALevel, PartialColorer, RandEAColorer
from .greedy import GreedyColorer
from .registry import ALGORITHMS, build_colorer, prepare_stream
from .vertex_arrival import BptDetVAColorer, BptRandVAColorer, ConjVAColorer
from .wrappers import GenToBptRouter, TradeoffWrapper, TwoSidedWrapper, VaToEaConverter

__all__ = [
    "ALGORITHMS", "Assignment", "BptDetVAColorer", "BptRandVAColorer", "Colorer", "ColorerConfig",
    "ConjEAColorer", "ConjVAColorer", "DetEAColorer", "DetEALevel", "GenToBptRouter", "GreedyColorer",
    "PartialColorer", "RandEAColorer", "TradeoffWrapper", "TwoSidedWrapper", "VaToEaConverter",
    "build_colorer", "make_permutation", "prefixed", "prepare_stream",
]
