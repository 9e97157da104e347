"""Slow, definition-level reference implementations used only by the tests.

Nothing here imports the package under test.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

INF = 10**9


def adjacency_sets(n, edges):
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def floyd_warshall(n, edges):
    d = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for u, v in edges:
        d[u][v] = d[v][u] = 1
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return np.array(d)


def random_connected_graph(rng, n, p):
    """Erdos-Renyi sample, redrawn until connected."""
    while True:
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
        d = floyd_warshall(n, edges)
        if n == 1 or d.max() < INF:
            return edges


def kshell_peeling(n, edges):
    """Shells by literal peeling: at level k remove nodes of degree <= k until none remain."""
    adj = adjacency_sets(n, edges)
    alive = set(range(n))
    shell = [0] * n
    k = 0
    while alive:
        k += 1
        changed = True
        while changed:
            changed = False
            for v in sorted(alive):
                if len(adj[v] & alive) <= k:
                    shell[v] = k
                    alive.discard(v)
                    changed = True
    return shell


def all_shortest_paths(adj, s, t, d):
    if s == t:
        return [[s]]
    out = []
    for w in adj[s]:
        if d[w][t] == d[s][t] - 1:
            out.extend([s] + rest for rest in all_shortest_paths(adj, w, t, d))
    return out


def betweenness_enumeration(n, edges):
    """For each unordered pair, the share of shortest paths passing through each node."""
    adj = adjacency_sets(n, edges)
    d = floyd_warshall(n, edges)
    bc = [Fraction(0)] * n
    for s, t in itertools.combinations(range(n), 2):
        if d[s][t] >= INF:
            continue
        paths = all_shortest_paths(adj, s, t, d)
        for path in paths:
            for v in path[1:-1]:
                bc[v] += Fraction(1, len(paths))
    return [float(x) for x in bc]


def kendall_pairs(x, y, variant="b"):
    n = len(x)
    conc = disc = tx = ty = 0
    for i in range(n):
        for j in range(i + 1, n):
            a = (x[i] > x[j]) - (x[i] < x[j])
            b = (y[i] > y[j]) - (y[i] < y[j])
            if a == 0:
                tx += 1
            if b == 0:
                ty += 1
            if a * b > 0:
                conc += 1
            elif a * b < 0:
                disc += 1
    pairs = n * (n - 1) // 2
    if tx == pairs or ty == pairs:
        return None
    if variant == "a":
        return (conc - disc) / pairs
    return (conc - disc) / math.sqrt((pairs - tx) * (pairs - ty))


def _pearson_exact(x, y):
    m = len(x)
    mx, my = Fraction(sum(x), m), Fraction(sum(y), m)
    cov = sum((a - mx) * (b - my) for a, b in zip(x, y))
    vx = sum((a - mx) ** 2 for a in x)
    vy = sum((b - my) ** 2 for b in y)
    if vx == 0 or vy == 0:
        return 0.0, 0
    sign = (cov > 0) - (cov < 0)
    return float(cov) / math.sqrt(float(vx * vy)), sign


def _cosine_exact(u, v):
    nu = sum(a * a for a in u)
    nv = sum(b * b for b in v)
    if nu == 0 or nv == 0:
        return 0.0
    return float(sum(a * b for a, b in zip(u, v))) / math.sqrt(float(nu * nv))


def gsc_naive(n, edges, variant="cosine"):
    """Score of every node from first principles, one pair at a time."""
    d = floyd_warshall(n, edges)
    diam = int(max(d[i][j] for i in range(n) for j in range(n)))
    ndv = [[sum(1 for j in range(n) if d[i][j] == k) for k in range(1, diam + 1)]
           for i in range(n)]
    dv = [[k * ndv[i][k - 1] for k in range(1, diam + 1)] for i in range(n)]
    avg = [Fraction(sum(dv[i]), n - 1) for i in range(n)]
    centered = [[dv[i][k] - ndv[i][k] * avg[i] for k in range(diam)] for i in range(n)]
    scores = []
    for i in range(n):
        total = 0.0
        for j in range(n):
            if j == i:
                continue
            p, sign = _pearson_exact(ndv[i], ndv[j])
            if variant == "cosine":
                c = _cosine_exact(ndv[i], ndv[j])
            else:
                c = _cosine_exact(centered[i], centered[j])
            dij = int(d[i][j])
            if sign > 0:
                nc = (1 - p) / dij + 1 + c / dij
            elif sign < 0:
                nc = (1 + p) / dij + 1 + c / dij
            else:
                nc = 1 + c / dij
            total += nc
        scores.append(total)
    return scores


def sir_expected_size(n, edges, source, beta):
    """
    Exact mean outbreak size of synchronous SIR with recovery after one step.

    Enumerates every set of newly infected nodes per step; a susceptible
    node with ``c`` infectious neighbours is infected with probability
    ``1 - (1 - beta)^c``.
    """
    beta = Fraction(beta)
    adj = adjacency_sets(n, edges)

    def grow(infected, reached):
        if not infected:
            return Fraction(len(reached))
        exposure = {}
        for u in infected:
            for w in adj[u]:
                if w not in reached:
                    exposure[w] = exposure.get(w, 0) + 1
        targets = sorted(exposure)
        total = Fraction(0)
        for mask in range(1 << len(targets)):
            prob = Fraction(1)
            new = set()
            for b, w in enumerate(targets):
                miss = (1 - beta) ** exposure[w]
                if mask >> b & 1:
                    prob *= 1 - miss
                    new.add(w)
                else:
                    prob *= miss
            if prob:
                total += prob * grow(frozenset(new), reached | new)
        return total

    return grow(frozenset([source]), frozenset([source]))
