"""Comparison centralities.

Every public function takes a connected ``Graph`` (plus a ``DistanceMatrix``
where distances are needed) and returns a ``Ranking``. ``METHODS`` maps the
command-line tags to callables with the uniform signature ``f(g, dm)``.
"""

from __future__ import annotations

from typing import Callable

import numba
import numpy as np

from .graph import DistanceMatrix, Graph, apsp
from .ranking import Ranking


class ConvergenceError(RuntimeError):
    def __init__(self, what: str, iterations: int):
        super().__init__(f"{what} did not converge after {iterations} iterations")
        self.iterations = iterations


def core_numbers(g: Graph) -> np.ndarray:
    """Shell index of every node by bucket peeling (Batagelj-Zaversnik)."""
    n = g.n
    deg = g.degrees().copy()
    if n == 0:
        return deg
    max_deg = int(deg.max())
    bins = [[] for _ in range(max_deg + 1)]
    for v in range(n):
        bins[deg[v]].append(v)
    removed = np.zeros(n, dtype=bool)
    core = np.zeros(n, dtype=np.int64)
    k = 0
    for _ in range(n):
        while True:
            k_min = next(d for d in range(max_deg + 1) if bins[d])
            v = bins[k_min].pop()
            if not removed[v] and deg[v] == k_min:
                break
        k = max(k, k_min)
        core[v] = k
        removed[v] = True
        for u in g.adjacency[v]:
            if not removed[u]:
                deg[u] -= 1
                bins[deg[u]].append(int(u))
    return core


def kshell(g: Graph, dm: DistanceMatrix | None = None) -> Ranking:
    return Ranking.for_graph("ks", g, core_numbers(g))


def neighborhood_coreness(g: Graph, dm: DistanceMatrix | None = None) -> Ranking:
    ks = core_numbers(g)
    return Ranking.for_graph("cn", g, [ks[a].sum() for a in g.adjacency])


def h_values(g: Graph) -> np.ndarray:
    """Largest ``h`` with at least ``h`` neighbours of degree ``>= h``."""
    deg = g.degrees()
    out = np.zeros(g.n, dtype=np.int64)
    for i, nb in enumerate(g.adjacency):
        ds = np.sort(deg[nb])[::-1]
        ok = ds >= np.arange(1, len(ds) + 1)
        out[i] = int(ok.sum())  # ok is a prefix of Trues
    return out


def h_index(g: Graph, dm: DistanceMatrix | None = None) -> Ranking:
    return Ranking.for_graph("h", g, h_values(g))


def local_h_index(g: Graph, dm: DistanceMatrix | None = None) -> Ranking:
    h = h_values(g)
    return Ranking.for_graph("lh", g, [h[i] + h[a].sum() for i, a in enumerate(g.adjacency)])


def gravity(g: Graph, dm: DistanceMatrix | None = None, radius: int = 3,
            mass: str = "degree") -> Ranking:
    """
    Sum of ``m(i) m(j) / d(i,j)^2`` over nodes within ``radius`` hops.

    ``mass="degree"`` gives the gravity centrality and ``mass="kshell"`` the
    shell-mass variant.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    if dm is None:
        dm = apsp(g)
    if mass == "degree":
        m = g.degrees().astype(float)
    elif mass == "kshell":
        m = core_numbers(g).astype(float)
    else:
        raise ValueError(f"unknown mass {mass!r}")
    d = dm.dist.astype(float)
    with np.errstate(divide="ignore"):
        w = np.where((d >= 1) & (d <= radius), 1.0 / (d * d), 0.0)
    scores = m * (w @ m)
    tag = "gravity" if mass == "degree" else "igc"
    return Ranking.for_graph(tag, g, scores, radius=radius)


def improved_gravity(g: Graph, dm: DistanceMatrix | None = None, radius: int = 3) -> Ranking:
    return gravity(g, dm, radius=radius, mass="kshell")


@numba.njit(cache=True)
def _brandes(indptr, indices, n):
    bc = np.zeros(n)
    sigma = np.zeros(n)
    dist = np.empty(n, dtype=np.int64)
    delta = np.zeros(n)
    stack = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        sigma[:] = 0.0
        dist[:] = -1
        delta[:] = 0.0
        sigma[s] = 1.0
        dist[s] = 0
        head = 0
        tail = 1
        queue[0] = s
        top = 0
        while head < tail:
            v = queue[head]
            head += 1
            stack[top] = v
            top += 1
            for e in range(indptr[v], indptr[v + 1]):
                w = indices[e]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue[tail] = w
                    tail += 1
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        while top > 0:
            top -= 1
            w = stack[top]
            for e in range(indptr[w], indptr[w + 1]):
                v = indices[e]
                if dist[v] == dist[w] - 1:
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    return bc / 2.0


def betweenness_values(g: Graph) -> np.ndarray:
    """Unnormalised shortest-path betweenness, each unordered pair counted once."""
    indptr, indices = g.edge_arrays()
    return _brandes(indptr, indices, g.n)


def betweenness(g: Graph, dm: DistanceMatrix | None = None) -> Ranking:
    return Ranking.for_graph("bc", g, betweenness_values(g))


def closeness(g: Graph, dm: DistanceMatrix | None = None) -> Ranking:
    if dm is None:
        dm = apsp(g)
    return Ranking.for_graph("cc", g, (g.n - 1) / dm.total_distance())


def eigenvector_values(g: Graph, tol: float = 1e-10, max_iter: int = 10000) -> np.ndarray:
    """
    Principal adjacency eigenvector by power iteration, unit L2 norm.

    On bipartite graphs the iterates alternate between two vectors; once
    that is detected the next iterate is replaced by the mean of the two,
    which removes the component along the negative eigenvalue.
    """
    a = g.csr().astype(float)
    x = np.ones(g.n) / np.sqrt(g.n)
    prev = None
    for it in range(1, max_iter + 1):
        y = a @ x
        norm = np.linalg.norm(y)
        if norm == 0:
            raise ConvergenceError("eigenvector", it)
        y /= norm
        step = np.abs(y - x).max()
        if step < tol:
            return y
        if prev is not None and np.abs(y - prev).max() < tol:
            y = x + y
            y /= np.linalg.norm(y)
        prev, x = x, y
    raise ConvergenceError("eigenvector", max_iter)


def eigenvector(g: Graph, dm: DistanceMatrix | None = None, tol: float = 1e-10,
                max_iter: int = 10000) -> Ranking:
    return Ranking.for_graph("ec", g, eigenvector_values(g, tol, max_iter))


def pagerank_values(g: Graph, damping: float = 0.85, tol: float = 1e-12,
                    max_iter: int = 100000) -> np.ndarray:
    n = g.n
    deg = g.degrees().astype(float)
    a = g.csr().astype(float)
    dangling = deg == 0
    inv = np.where(dangling, 0.0, 1.0 / np.where(dangling, 1.0, deg))
    x = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        y = damping * (a @ (x * inv)) + (damping * x[dangling].sum() + 1.0 - damping) / n
        if np.abs(y - x).sum() < tol:
            return y / y.sum()
        x = y
    raise ConvergenceError("pagerank", max_iter)


def pagerank(g: Graph, dm: DistanceMatrix | None = None, damping: float = 0.85,
             tol: float = 1e-12) -> Ranking:
    return Ranking.for_graph("pagerank", g, pagerank_values(g, damping, tol), damping=damping)


def degree(g: Graph, dm: DistanceMatrix | None = None) -> Ranking:
    return Ranking.for_graph("degree", g, g.degrees())


METHODS: dict[str, Callable[[Graph, DistanceMatrix], Ranking]] = {
    "degree": degree,
    "ks": kshell,
    "cn": neighborhood_coreness,
    "h": h_index,
    "lh": local_h_index,
    "gravity": gravity,
    "igc": improved_gravity,
    "bc": betweenness,
    "cc": closeness,
    "ec": eigenvector,
    "pagerank": pagerank,
}
