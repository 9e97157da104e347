from __future__ import annotations

import numpy as np
import pytest

from gscrank.datasets import load_dataset
from gscrank.graph import Graph, apsp

# 13 nodes labelled 1..13; node 13 sees (3, 3, 4, 2) nodes at distances 1..4,
# node 7 sees (5, 7, 0, 0) and node 8 sees (3, 4, 5, 0)
THIRTEEN_EDGES = [(1, 4), (1, 5), (2, 3), (2, 6), (3, 4), (4, 5), (4, 7), (5, 12), (6, 7),
                  (7, 8), (7, 10), (7, 11), (8, 9), (8, 10), (10, 13), (11, 12), (11, 13),
                  (12, 13)]


def graph_from_labelled(edges, n=None):
    n = n or max(max(e) for e in edges)
    return Graph.from_edges(n, [(u - 1, v - 1) for u, v in edges],
                            [str(i) for i in range(1, n + 1)])


@pytest.fixture(scope="session")
def karate():
    return load_dataset("karate")


@pytest.fixture(scope="session")
def karate_dm(karate):
    return apsp(karate)


@pytest.fixture(scope="session")
def thirteen():
    return graph_from_labelled(THIRTEEN_EDGES)


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves):
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def cycle_graph(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def random_connected(seed, n_max=25, p_lo=0.1, p_hi=0.5, n_min=2):
    from oracles import random_connected_graph

    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_min, n_max + 1))
    edges = random_connected_graph(rng, n, float(rng.uniform(p_lo, p_hi)))
    return n, edges


# (criterion, verdict, detail) lines filled in by test_acceptance.py
ACCEPTANCE: list[tuple[str, str, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit, verdict, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{verdict}  criterion {crit}: {detail}")
