"""Influential-node ranking by global similarity centrality, with baselines and SIR evaluation."""

from .graph import (DistanceMatrix, Graph, NetworkStats, apsp, connected_components,
                    generate_watts_strogatz, largest_component, load_edge_list, network_stats)
from .gsc import NodeVectors, distance_corr, gsc_scores, nc_score, node_vectors, pearson_p
from .ranking import Ranking
from .sir import SirParams, SirReport, simulate_source, spreading_capability
from .evaluate import accuracy_sweep, cdf_curve, kendall, monotonicity, topk_overlap
from .datasets import load_dataset

__version__ = "0.1.0"

__all__ = [
    "DistanceMatrix", "Graph", "NetworkStats", "NodeVectors", "Ranking", "SirParams",
    "SirReport", "accuracy_sweep", "apsp", "cdf_curve", "connected_components",
    "distance_corr", "generate_watts_strogatz", "gsc_scores", "kendall", "largest_component",
    "load_dataset", "load_edge_list", "monotonicity", "nc_score", "network_stats", "node_vectors",
    "pearson_p", "simulate_source", "spreading_capability", "topk_overlap",
]
