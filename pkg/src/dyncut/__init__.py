"""Fully dynamic exact edge connectivity: a randomized sketch engine and a
deterministic sparsifier engine, with exact static oracles and a replay harness."""
from .det_engine import DetEngine
from .graph import ContractionMap, DynGraph, MultiGraph, quotient
from .harness import generate, parse_stream, run
from .oracle import brute_force_mincut, capped_mincut, edge_connectivity, stoer_wagner
from .rand_engine import ConnectivityAnswer, RandEngine
from .sparsifier import DynSparsifier, build_sparsifier, nmc_violations

__all__ = [
    "ConnectivityAnswer", "ContractionMap", "DetEngine", "DynGraph", "DynSparsifier", "MultiGraph",
    "RandEngine", "brute_force_mincut", "build_sparsifier", "capped_mincut", "edge_connectivity",
    "generate", "nmc_violations", "parse_stream", "quotient", "run", "stoer_wagner",
]
