"""Single-seed SIR spreading simulation.

Dynamics are discrete and synchronous. In each step every infected node
tries once to infect each susceptible neighbour with probability ``beta``;
afterwards each node that was infected at the start of the step recovers
with probability ``gamma``. Newly infected nodes transmit from the next
step on. A run ends when nobody is infected; its outcome is the number of
recovered nodes, the seed included.

Random numbers come from a splitmix64 stream keyed by ``(seed, node, run)``,
so every run is reproducible on its own and results do not depend on how
work is spread over threads.
"""

from __future__ import annotations

import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numba
import numpy as np

from .graph import Graph
from .ranking import fmt_sig

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_NODE_SALT = np.uint64(0xD1B54A32D192ED03)


@numba.njit(inline="always")
def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@numba.njit(inline="always")
def _uniform(state):
    # advances a one-element splitmix64 state; returns a double in [0, 1)
    state[0] += _GOLDEN
    return np.float64(_mix(state[0]) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@numba.njit(nogil=True, cache=True)
def stream_key(seed, node, run):
    k = _mix(np.uint64(seed) + _GOLDEN)
    k = _mix(k ^ (np.uint64(node) * _NODE_SALT))
    return _mix(k + np.uint64(run))


@numba.njit(nogil=True, cache=True)
def _simulate(indptr, indices, sources, beta, gamma, seed, runs, out):
    n = len(indptr) - 1
    touched = np.zeros(n, dtype=np.int64)  # stamp of the last run that reached the node
    cur = np.empty(n, dtype=np.int64)
    nxt = np.empty(n, dtype=np.int64)
    state = np.empty(1, dtype=np.uint64)
    stamp = 0
    for si in range(len(sources)):
        src = sources[si]
        for r in range(runs):
            stamp += 1
            state[0] = stream_key(seed, src, r)
            touched[src] = stamp
            cur[0] = src
            n_cur = 1
            total = 1
            while n_cur > 0:
                n_nxt = 0
                for t in range(n_cur):
                    u = cur[t]
                    for e in range(indptr[u], indptr[u + 1]):
                        w = indices[e]
                        if touched[w] != stamp and _uniform(state) < beta:
                            touched[w] = stamp
                            nxt[n_nxt] = w
                            n_nxt += 1
                total += n_nxt
                # survivors of the recovery draw stay infectious
                if gamma < 1.0:
                    for t in range(n_cur):
                        if _uniform(state) >= gamma:
                            nxt[n_nxt] = cur[t]
                            n_nxt += 1
                for t in range(n_nxt):
                    cur[t] = nxt[t]
                n_cur = n_nxt
            out[si, r] = total
    return out


@dataclass(frozen=True)
class SirParams:
    """
    Attributes
    ----------
    beta : float
        Per-edge, per-step infection probability in ``[0, 1]``.
    gamma : float
        Per-step recovery probability in ``(0, 1]``.
    runs : int
        Independent runs per seed node.
    seed : int
    """

    beta: float
    gamma: float = 1.0
    runs: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in (0, 1], got {self.gamma}")
        if self.runs < 1:
            raise ValueError(f"runs must be positive, got {self.runs}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _run(g: Graph, sources: np.ndarray, params: SirParams) -> np.ndarray:
    indptr, indices = g.edge_arrays()
    out = np.zeros((len(sources), params.runs), dtype=np.int64)
    return _simulate(indptr, indices, sources.astype(np.int64), float(params.beta),
                     float(params.gamma), np.uint64(params.seed), params.runs, out)


def simulate_source(g: Graph, source: int, params: SirParams) -> np.ndarray:
    """Final recovered count of each run started from ``source``."""
    if not 0 <= source < g.n:
        raise ValueError(f"source {source} out of range")
    return _run(g, np.array([source]), params)[0]


@dataclass
class SirReport:
    mean: np.ndarray
    std: np.ndarray
    params: SirParams
    labels: list[str]
    digest: str = ""

    def to_csv(self) -> str:
        p = self.params
        buf = io.StringIO()
        buf.write("node,mean,std,runs,beta,gamma,seed\n")
        for lab, m, s in zip(self.labels, self.mean, self.std):
            buf.write(f"{lab},{fmt_sig(m)},{fmt_sig(s)},{p.runs},{fmt_sig(p.beta)},"
                      f"{fmt_sig(p.gamma)},{p.seed}\n")
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "graph_digest": self.digest,
            "params": asdict(self.params),
            "nodes": [{"node": lab, "mean": float(fmt_sig(m)), "std": float(fmt_sig(s))}
                      for lab, m, s in zip(self.labels, self.mean, self.std)],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def run_counts(g: Graph, params: SirParams, workers: int = 1, chunk: int = 64) -> np.ndarray:
    """``N x runs`` matrix of final recovered counts."""
    sources = np.arange(g.n)
    if workers <= 1:
        return _run(g, sources, params)
    parts = [sources[s:s + chunk] for s in range(0, g.n, chunk)]
    with ThreadPoolExecutor(workers) as pool:
        blocks = list(pool.map(lambda src: _run(g, src, params), parts))
    return np.vstack(blocks)


def spreading_capability(g: Graph, params: SirParams, workers: int = 1) -> SirReport:
    """Mean and sample standard deviation of the outbreak size from every node."""
    counts = run_counts(g, params, workers).astype(float)
    mean = counts.mean(axis=1)
    std = counts.std(axis=1, ddof=1) if params.runs > 1 else np.zeros(g.n)
    return SirReport(mean, std, params, list(g.labels), g.digest())
