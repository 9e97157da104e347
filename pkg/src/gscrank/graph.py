"""Simple undirected graphs, shortest-path distances and network statistics."""

from __future__ import annotations

import hashlib
import io
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np
from scipy import sparse

log = logging.getLogger(__name__)

EDGE_LIST = "edge-list"
GML = "gml-subset"
FORMATS = (EDGE_LIST, GML)


class GraphFormatError(ValueError):
    """Raised when an input file cannot be parsed into a graph."""


class DisconnectedGraphError(ValueError):
    """Raised when an operation needs a connected graph."""

    def __init__(self, n_components: int):
        super().__init__(
            f"graph is disconnected ({n_components} components); "
            "use --largest-component to analyse the largest one"
        )
        self.n_components = n_components


@dataclass(eq=False)
class Graph:
    """
    Simple undirected graph on internal ids ``0..n-1``.

    Attributes
    ----------
    labels : list of str
        External label of each internal id.
    adjacency : list of numpy arrays
        Sorted neighbour ids per node.
    """

    labels: list[str]
    adjacency: list[np.ndarray]
    self_loops_dropped: int = 0
    duplicates_dropped: int = 0
    _index: dict[str, int] = field(default=None, repr=False)
    _csr: sparse.csr_matrix | None = field(default=None, repr=False)

    def __post_init__(self):
        if self._index is None:
            self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise ValueError("node labels must be unique")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   labels: Sequence[str] | None = None) -> "Graph":
        """Build a graph from id pairs; self-loops and repeats are dropped."""
        nbrs: list[set[int]] = [set() for _ in range(n)]
        loops = dups = 0
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                loops += 1
                continue
            if v in nbrs[u]:
                dups += 1
                continue
            nbrs[u].add(v)
            nbrs[v].add(u)
        if labels is None:
            labels = [str(i) for i in range(n)]
        adjacency = [np.array(sorted(s), dtype=np.int64) for s in nbrs]
        return cls(list(labels), adjacency, loops, dups)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return int(sum(len(a) for a in self.adjacency)) // 2

    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.adjacency], dtype=np.int64)

    def index(self, label: str) -> int:
        return self._index[str(label)]

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, sorted."""
        return [(u, int(v)) for u, nb in enumerate(self.adjacency) for v in nb if v > u]

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Both orientations of every edge, as CSR-style ``(indptr, indices)``."""
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum(self.degrees())
        indices = (np.concatenate(self.adjacency) if self.n
                   else np.zeros(0, dtype=np.int64))
        return indptr, indices.astype(np.int64)

    def csr(self) -> sparse.csr_matrix:
        if self._csr is None:
            indptr, indices = self.edge_arrays()
            data = np.ones(len(indices), dtype=np.float32)
            self._csr = sparse.csr_matrix((data, indices, indptr), shape=(self.n, self.n))
        return self._csr

    def subgraph(self, nodes: Sequence[int]) -> "Graph":
        """Induced subgraph; new ids follow the order of ``nodes``."""
        remap = {int(v): i for i, v in enumerate(nodes)}
        edges = [(remap[u], remap[v]) for u, v in self.edges() if u in remap and v in remap]
        return Graph.from_edges(len(nodes), edges, [self.labels[v] for v in nodes])

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with node ``i`` moved to internal id ``perm[i]`` (labels follow)."""
        perm = np.asarray(perm)
        labels = [""] * self.n
        for i, p in enumerate(perm):
            labels[p] = self.labels[i]
        return Graph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges()], labels)

    def edge_set(self) -> set[frozenset[str]]:
        """Edges keyed by external labels, for comparisons across id orders."""
        return {frozenset((self.labels[u], self.labels[v])) for u, v in self.edges()}

    def digest(self) -> str:
        """SHA-256 of the canonical label edge list; independent of id order."""
        pairs = sorted(tuple(sorted((self.labels[u], self.labels[v]))) for u, v in self.edges())
        h = hashlib.sha256()
        for a, b in pairs:
            h.update(f"{a}\t{b}\n".encode())
        return h.hexdigest()

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


_GML_BLOCK = re.compile(r"\b(node|edge)\s*\[(.*?)\]", re.S)
_GML_FIELD = re.compile(r"\b(id|source|target)\s+(\"[^\"]*\"|\S+)")


def _read_text(source) -> str:
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    elif isinstance(source, str):
        with open(source, "rb") as fh:
            data = fh.read()
    elif hasattr(source, "read"):
        data = source.read()
    else:
        with open(source, "rb") as fh:
            data = fh.read()
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise GraphFormatError(f"input is not UTF-8 text: {exc}") from None


def _edge_list_pairs(text: str) -> Iterable[tuple[str, str]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "#%":
            continue
        tokens = [t for t in re.split(r"[,\s]+", line) if t]
        if len(tokens) != 2:
            raise GraphFormatError(
                f"line {lineno}: expected 2 tokens, got {len(tokens)}: {raw.strip()!r}")
        yield tokens[0], tokens[1]


def _gml_pairs(text: str) -> Iterable[tuple[str, str]]:
    declared = []
    pairs = []
    for kind, body in _GML_BLOCK.findall(text):
        fields = {k: v.strip('"') for k, v in _GML_FIELD.findall(body)}
        if kind == "node":
            if "id" not in fields:
                raise GraphFormatError("gml node block without id")
            declared.append(fields["id"])
        else:
            if "source" not in fields or "target" not in fields:
                raise GraphFormatError("gml edge block without source/target")
            pairs.append((fields["source"], fields["target"]))
    known = set(declared)
    for s, t in pairs:
        if known and (s not in known or t not in known):
            raise GraphFormatError(f"gml edge ({s}, {t}) refers to an undeclared node")
    return declared, pairs


def load_edge_list(source: str | bytes | IO, format: str = EDGE_LIST) -> Graph:
    """
    Parse an edge list or the node/edge subset of GML into a ``Graph``.

    Labels get internal ids in order of first appearance. Duplicate edges
    (in either orientation) are merged and self-loops dropped; both are
    counted on the returned graph and logged.
    """
    text = _read_text(source)
    if format == EDGE_LIST:
        declared, pairs = [], list(_edge_list_pairs(text))
    elif format == GML:
        declared, pairs = _gml_pairs(text)
    else:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")

    index: dict[str, int] = {}
    for lab in declared:
        index.setdefault(lab, len(index))
    id_pairs = []
    for a, b in pairs:
        ia = index.setdefault(a, len(index))
        ib = index.setdefault(b, len(index))
        id_pairs.append((ia, ib))

    g = Graph.from_edges(len(index), id_pairs, list(index))
    if g.m == 0:
        raise GraphFormatError("graph has no edges")
    if g.self_loops_dropped or g.duplicates_dropped:
        log.warning("dropped %d self-loop(s) and %d duplicate edge(s)",
                    g.self_loops_dropped, g.duplicates_dropped)
    return g


def write_edge_list(g: Graph, fh: IO[str] | None = None) -> str:
    """Serialise ``g`` as ``label label`` lines; returns the text."""
    buf = io.StringIO()
    for u, v in g.edges():
        buf.write(f"{g.labels[u]} {g.labels[v]}\n")
    text = buf.getvalue()
    if fh is not None:
        fh.write(text)
    return text


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted id lists, ordered by their smallest id."""
    comp = np.full(g.n, -1, dtype=np.int64)
    out = []
    for s in range(g.n):
        if comp[s] >= 0:
            continue
        c = len(out)
        comp[s] = c
        members = [s]
        stack = [s]
        while stack:
            u = stack.pop()
            for v in g.adjacency[u]:
                if comp[v] < 0:
                    comp[v] = c
                    members.append(int(v))
                    stack.append(int(v))
        out.append(sorted(members))
    return out


def largest_component(g: Graph) -> Graph:
    """Induced subgraph on the largest component (ties: smallest first id)."""
    comps = connected_components(g)
    best = max(comps, key=len)
    if len(best) == g.n:
        return g
    log.info("kept largest component: %d of %d nodes", len(best), g.n)
    return g.subgraph(best)


@dataclass(frozen=True)
class DistanceMatrix:
    """All-pairs hop distances with per-node eccentricity and the diameter."""

    dist: np.ndarray
    ecc: np.ndarray
    diameter: int

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def total_distance(self) -> np.ndarray:
        return self.dist.sum(axis=1, dtype=np.int64)


def _bfs_block(a: sparse.csr_matrix, sources: np.ndarray, dtype) -> np.ndarray:
    # level-synchronous BFS from every source in the block at once
    n = a.shape[0]
    b = len(sources)
    dist = np.full((n, b), -1, dtype=dtype)
    frontier = np.zeros((n, b), dtype=np.float32)
    cols = np.arange(b)
    frontier[sources, cols] = 1.0
    dist[sources, cols] = 0
    level = 0
    while True:
        level += 1
        reached = (a @ frontier) > 0
        reached &= dist < 0
        if not reached.any():
            break
        dist[reached] = level
        frontier = reached.astype(np.float32)
    return dist.T


def apsp(g: Graph, block: int = 256, workers: int = 1) -> DistanceMatrix:
    """
    Exact hop distances between all pairs by breadth-first search.

    Sources are processed in blocks; each block fills its own rows, so the
    result does not depend on ``workers``.

    Raises
    ------
    DisconnectedGraphError
        If ``g`` has more than one component.
    """
    n_comp = len(connected_components(g))
    if n_comp != 1:
        raise DisconnectedGraphError(n_comp)
    n = g.n
    dtype = np.int16 if n < 32000 else np.int32
    a = g.csr()
    starts = list(range(0, n, block))
    dist = np.empty((n, n), dtype=dtype)

    def fill(s: int) -> None:
        src = np.arange(s, min(s + block, n))
        dist[src] = _bfs_block(a, src, dtype)

    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(workers) as pool:
            list(pool.map(fill, starts))
    else:
        for s in starts:
            fill(s)
    ecc = dist.max(axis=1).astype(np.int64)
    return DistanceMatrix(dist, ecc, int(ecc.max()))


@dataclass(frozen=True)
class NetworkStats:
    n: int
    m: int
    avg_degree: float
    max_degree: int
    beta_th: float
    assortativity: float

    def as_row(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "avg_degree": self.avg_degree,
            "max_degree": self.max_degree,
            "beta_th": self.beta_th,
            "assortativity": self.assortativity,
        }


def epidemic_threshold(degrees: np.ndarray) -> float:
    """Mean-field SIR threshold ``<k>/<k^2>``."""
    k = degrees.astype(float)
    return float(k.mean() / (k * k).mean())


def degree_assortativity(g: Graph) -> float:
    """Pearson correlation of degrees at the two ends of each edge (both orientations).

    Returns NaN when all edge endpoints share one degree.
    """
    k = g.degrees().astype(float)
    u, v = np.array(g.edges()).T
    x = np.concatenate([k[u], k[v]])
    y = np.concatenate([k[v], k[u]])
    x = x - x.mean()
    y = y - y.mean()
    den = np.sqrt((x * x).sum() * (y * y).sum())
    if den == 0:
        return float("nan")
    return float((x * y).sum() / den)


def network_stats(g: Graph, dm: DistanceMatrix | None = None) -> NetworkStats:
    if dm is None and len(connected_components(g)) != 1:
        raise DisconnectedGraphError(len(connected_components(g)))
    deg = g.degrees()
    return NetworkStats(
        n=g.n,
        m=g.m,
        avg_degree=2.0 * g.m / g.n,
        max_degree=int(deg.max()),
        beta_th=epidemic_threshold(deg),
        assortativity=degree_assortativity(g),
    )


def generate_watts_strogatz(n: int, k: int, p: float, seed: int) -> Graph:
    """
    Small-world graph: ring lattice of degree ``k`` with each lattice edge
    rewired to a uniformly chosen endpoint with probability ``p``.

    A rewiring that would create a self-loop or a repeated edge is redrawn,
    so the result is simple with exactly ``n*k/2`` edges.
    """
    if not (isinstance(n, (int, np.integer)) and isinstance(k, (int, np.integer))):
        raise ValueError("n and k must be integers")
    if k < 2 or k % 2:
        raise ValueError(f"k must be an even integer >= 2, got {k}")
    if n <= k:
        raise ValueError(f"need n > k, got n={n}, k={k}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    nbrs = [set() for _ in range(n)]
    for u in range(n):
        for j in range(1, k // 2 + 1):
            v = (u + j) % n
            nbrs[u].add(v)
            nbrs[v].add(u)
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            if rng.random() >= p or len(nbrs[u]) >= n - 1:
                continue
            w = int(rng.integers(n))
            while w == u or w in nbrs[u]:
                w = int(rng.integers(n))
            nbrs[u].discard(v)
            nbrs[v].discard(u)
            nbrs[u].add(w)
            nbrs[w].add(u)
    edges = [(u, v) for u in range(n) for v in nbrs[u] if v > u]
    return Graph.from_edges(n, edges)
