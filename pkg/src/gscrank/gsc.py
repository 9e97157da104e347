"""Global similarity centrality.

Every node is described by two histograms over hop distance ``k = 1..D``
(``D`` is the graph diameter): the number of nodes at distance ``k`` and the
same counts weighted by ``k``. A pair ``(i, j)`` scores

    (1 - |p|)/d + 1 + c/d     if p != 0
    1 + c/d                   if p == 0

where ``p`` is the Pearson correlation of the two count histograms, ``c`` a
distance correlation of the pair and ``d`` their hop distance. A node's
score is the sum over all other nodes.

Two readings of the distance correlation are offered:

``"cosine"``
    Cosine similarity of the two count histograms (uncentered correlation).
``"centered"``
    Cosine similarity of ``dv - ndv * avg_dist``, i.e. the count histogram
    weighted by each bin's offset from the node's mean hop distance.

``gsc_scores`` uses ``"cosine"`` by default; see the README for why.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .graph import DistanceMatrix, Graph, apsp
from .ranking import Ranking

VARIANTS = ("cosine", "centered")
DEFAULT_VARIANT = "cosine"


@dataclass(frozen=True)
class NodeVectors:
    """
    Distance profile of one node.

    Attributes
    ----------
    ndv : numpy int64 array of length D
        ``ndv[k-1]`` counts the nodes at hop distance ``k``.
    dv : numpy int64 array of length D
        ``dv[k-1] = k * ndv[k-1]``.
    """

    ndv: np.ndarray
    dv: np.ndarray

    @property
    def total_distance(self) -> int:
        return int(self.dv.sum())

    @property
    def avg_distance(self) -> float:
        return self.total_distance / int(self.ndv.sum())


def distance_histograms(dm: DistanceMatrix) -> np.ndarray:
    """Count histograms of all nodes as an ``N x D`` int64 matrix."""
    n, width = dm.n, dm.diameter + 1
    flat = dm.dist.astype(np.int64) + width * np.arange(n)[:, None]
    counts = np.bincount(flat.ravel(), minlength=n * width).reshape(n, width)
    return counts[:, 1:]


def node_vectors(dm: DistanceMatrix, i: int) -> NodeVectors:
    ndv = np.bincount(dm.dist[i].astype(np.int64), minlength=dm.diameter + 1)[1:]
    dv = ndv * np.arange(1, dm.diameter + 1)
    return NodeVectors(ndv.astype(np.int64), dv.astype(np.int64))


def pearson_p(a: NodeVectors, b: NodeVectors) -> float | None:
    """
    Pearson correlation of two count histograms.

    Returns None when either histogram is constant.
    """
    x = [int(v) for v in a.ndv]
    y = [int(v) for v in b.ndv]
    if len(x) != len(y):
        raise ValueError("histograms must have equal length")
    n = len(x)
    sx, sy = sum(x), sum(y)
    cov = n * sum(u * v for u, v in zip(x, y)) - sx * sy
    vx = n * sum(u * u for u in x) - sx * sx
    vy = n * sum(v * v for v in y) - sy * sy
    if vx == 0 or vy == 0:
        return None
    if cov == 0:
        return 0.0
    return max(-1.0, min(1.0, cov / math.sqrt(vx * vy)))


def _cosine(u: np.ndarray, v: np.ndarray) -> float | None:
    nu, nv = float(np.dot(u, u)), float(np.dot(v, v))
    if nu == 0 or nv == 0:
        return None
    return max(-1.0, min(1.0, float(np.dot(u, v)) / math.sqrt(nu * nv)))


def centered_profile(a: NodeVectors, avg_dist: float | None = None) -> np.ndarray:
    """
    ``dv - ndv * avg_dist``.

    Without ``avg_dist`` the vector is scaled by ``N - 1`` so that it stays
    integral: ``(N-1) * dv - ndv * total_distance``.
    """
    if avg_dist is None:
        return int(a.ndv.sum()) * a.dv - a.ndv * a.total_distance
    return a.dv - a.ndv * float(avg_dist)


def distance_corr(a: NodeVectors, b: NodeVectors, avg_dist_a: float | None = None,
                  avg_dist_b: float | None = None, variant: str = "centered") -> float | None:
    """
    Distance correlation of two nodes; None when undefined.

    Parameters
    ----------
    a, b : NodeVectors
    avg_dist_a, avg_dist_b : float, optional
        Mean hop distance of each node; derived from the vectors if omitted.
        Only used by the ``"centered"`` variant.
    variant : {"centered", "cosine"}
    """
    if variant == "cosine":
        return _cosine(a.ndv.astype(float), b.ndv.astype(float))
    if variant == "centered":
        return _cosine(centered_profile(a, avg_dist_a).astype(float),
                       centered_profile(b, avg_dist_b).astype(float))
    raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def nc_score(p: float | None, dcorr: float | None, d: int) -> float:
    """Pair contribution; undefined correlations count as 0."""
    if d < 1:
        raise ValueError("pair score needs hop distance >= 1")
    p = 0.0 if p is None else p
    dcorr = 0.0 if dcorr is None else dcorr
    base = 1.0 + dcorr / d
    if p > 0:
        return (1.0 - p) / d + base
    if p < 0:
        return (1.0 + p) / d + base
    return base


def _corr_block(gram: np.ndarray, sq_rows: np.ndarray, sq_all: np.ndarray) -> np.ndarray:
    den = np.sqrt(sq_rows[:, None] * sq_all[None, :])
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(den > 0, gram / den, 0.0)
    return np.clip(out, -1.0, 1.0)


def gsc_scores(g: Graph, dm: DistanceMatrix | None = None, variant: str = DEFAULT_VARIANT,
               block: int = 128, workers: int = 1, pearson: bool = True) -> Ranking:
    """
    Global similarity centrality of every node.

    Rows are processed in fixed blocks and only a ``block x N`` slab of pair
    scores exists at any time. Results do not depend on ``workers``.

    Parameters
    ----------
    pearson : bool
        With False every pair takes the ``p == 0`` branch, leaving
        ``sum_j 1 + c/d``.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    if dm is None:
        dm = apsp(g)
    n = dm.n
    if n < 2:
        raise ValueError("need at least two nodes")
    hist = distance_histograms(dm).astype(float)  # integral values, exact in float64
    width = hist.shape[1]
    # Pearson with integer-exact numerator so the branch sign is exact
    row_sum = float(n - 1)
    var_num = width * (hist * hist).sum(axis=1) - row_sum * row_sum
    if variant == "cosine":
        prof = hist
    else:
        dvs = hist * np.arange(1, width + 1)
        prof = row_sum * dvs - hist * dvs.sum(axis=1)[:, None]
    prof_sq = (prof * prof).sum(axis=1)
    scores = np.empty(n)

    def run(start: int) -> None:
        rows = np.arange(start, min(start + block, n))
        cov_num = width * (hist[rows] @ hist.T) - row_sum * row_sum
        den = np.sqrt(np.maximum(var_num[rows][:, None] * var_num[None, :], 0.0))
        with np.errstate(invalid="ignore", divide="ignore"):
            p = np.where(den > 0, cov_num / den, 0.0)
        p = np.clip(p, -1.0, 1.0)
        p[den == 0] = 0.0
        dcorr = _corr_block(prof[rows] @ prof.T, prof_sq[rows], prof_sq)
        d = dm.dist[rows].astype(float)
        d[np.arange(len(rows)), rows] = np.inf
        bonus = np.where(cov_num > 0, 1.0 - p, np.where(cov_num < 0, 1.0 + p, 0.0))
        if not pearson:
            bonus[:] = 0.0
        nc = (bonus + dcorr) / d + 1.0
        nc[np.arange(len(rows)), rows] = 0.0
        scores[rows] = nc.sum(axis=1)

    starts = range(0, n, block)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            list(pool.map(run, starts))
    else:
        for s in starts:
            run(s)
    params = {"variant": variant} if pearson else {"variant": variant, "pearson": False}
    return Ranking.for_graph("gsc", g, scores, **params)
