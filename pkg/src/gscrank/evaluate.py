"""Ranking-quality metrics and the infection-rate sweep."""

from __future__ import annotations

import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numba
import numpy as np

from .baselines import METHODS
from .graph import DistanceMatrix, Graph, apsp
from .gsc import DEFAULT_VARIANT, gsc_scores
from .ranking import Ranking, fmt_sig, round_sig
from .sir import SirParams, spreading_capability

ALL_METHODS = tuple(METHODS) + ("gsc",)


def rank_method(tag: str, g: Graph, dm: DistanceMatrix,
                gsc_variant: str = DEFAULT_VARIANT) -> Ranking:
    if tag == "gsc":
        return gsc_scores(g, dm, variant=gsc_variant)
    try:
        return METHODS[tag](g, dm)
    except KeyError:
        raise ValueError(
            f"unknown method {tag!r}; valid: {', '.join(ALL_METHODS)}") from None


def monotonicity(r: Ranking | Sequence[float]) -> float:
    """``(1 - sum n_a (n_a - 1) / (N (N - 1)))^2`` over groups of tied scores."""
    scores = r.scores if isinstance(r, Ranking) else np.asarray(r, dtype=float)
    n = len(scores)
    if n < 2:
        raise ValueError("monotonicity needs at least two scores")
    _, sizes = np.unique(round_sig(scores), return_counts=True)
    tied = float((sizes * (sizes - 1)).sum())
    return (1.0 - tied / (n * (n - 1))) ** 2


@numba.njit(cache=True)
def _count_swaps(y):
    # bottom-up merge sort; returns the number of inversions
    n = len(y)
    a = y.copy()
    b = np.empty_like(a)
    swaps = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if a[j] < a[i]:
                    b[k] = a[j]
                    swaps += mid - i
                    j += 1
                else:
                    b[k] = a[i]
                    i += 1
                k += 1
            while i < mid:
                b[k] = a[i]
                i += 1
                k += 1
            while j < hi:
                b[k] = a[j]
                j += 1
                k += 1
        a, b = b, a
        width *= 2
    return swaps


def _tied_pairs(codes: np.ndarray) -> int:
    _, c = np.unique(codes, return_counts=True)
    return int((c * (c - 1) // 2).sum())


def kendall(x: Sequence[float], y: Sequence[float], variant: str = "b") -> float | None:
    """
    Kendall rank correlation in ``O(n log n)``.

    Values are compared after rounding to 12 significant digits.

    Parameters
    ----------
    variant : {"b", "a"}
        ``"b"`` corrects for ties; ``"a"`` divides the concordant minus
        discordant count by the number of pairs.

    Returns
    -------
    float or None
        None when either sequence is constant.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("kendall needs two 1-d sequences of equal length")
    n = len(x)
    if n < 2:
        raise ValueError("kendall needs at least two observations")
    xc = np.unique(round_sig(x), return_inverse=True)[1].astype(np.int64)
    yc = np.unique(round_sig(y), return_inverse=True)[1].astype(np.int64)
    order = np.lexsort((yc, xc))
    xs, ys = xc[order], yc[order]
    pairs = n * (n - 1) // 2
    tx = _tied_pairs(xs)
    ty = _tied_pairs(ys)
    txy = _tied_pairs(xs * (int(ys.max()) + 1) + ys)
    if tx == pairs or ty == pairs:
        return None
    discordant = int(_count_swaps(ys))
    # concordant - discordant
    s = pairs - tx - ty + txy - 2 * discordant
    if variant == "a":
        return s / pairs
    if variant == "b":
        return s / np.sqrt(float(pairs - tx) * float(pairs - ty))
    raise ValueError(f"unknown variant {variant!r}")


def cdf_curve(r: Ranking | Sequence[float]) -> list[tuple[float, float]]:
    """
    Empirical CDF of the scores with the score axis min-max scaled to [0, 1].

    One point per distinct score; a constant ranking yields ``[(0.0, 1.0)]``.
    """
    scores = r.scores if isinstance(r, Ranking) else np.asarray(r, dtype=float)
    vals, counts = np.unique(round_sig(scores), return_counts=True)
    frac = np.cumsum(counts) / len(scores)
    span = vals[-1] - vals[0]
    xs = (vals - vals[0]) / span if span > 0 else np.zeros(len(vals))
    return [(float(a), float(b)) for a, b in zip(xs, frac)]


def topk_overlap(a: Ranking, b: Ranking, k: int) -> int:
    if len(a) != len(b):
        raise ValueError("rankings cover different node sets")
    if not 1 <= k <= len(a):
        raise ValueError(f"k must lie in [1, {len(a)}]")
    return len(set(a.top(k)) & set(b.top(k)))


@dataclass(frozen=True)
class SweepRow:
    method: str
    beta: float
    tau: float | None
    runs: int
    seed: int


def derived_seed(seed: int, index: int) -> int:
    """Independent seed for the ``index``-th infection rate of a sweep."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0])


def accuracy_sweep(g: Graph, methods: Iterable[str], betas: Sequence[float],
                   params: SirParams, dm: DistanceMatrix | None = None,
                   gsc_variant: str = DEFAULT_VARIANT, workers: int = 1,
                   derive_seeds: bool = True) -> list[SweepRow]:
    """
    Kendall tau-b of each method against simulated spreading, per infection rate.

    The rate at position ``b`` of ``betas`` uses ``derived_seed(seed, b)``
    unless ``derive_seeds`` is false.
    """
    if len(betas) == 0:
        raise ValueError("beta grid is empty")
    if dm is None:
        dm = apsp(g)
    rankings = [rank_method(m, g, dm, gsc_variant) for m in methods]

    def one(ib: tuple[int, float]) -> list[SweepRow]:
        b, beta = ib
        seed = derived_seed(params.seed, b) if derive_seeds else params.seed
        p = SirParams(float(beta), params.gamma, params.runs, seed)
        rep = spreading_capability(g, p)
        return [SweepRow(r.method, float(beta), kendall(r.scores, rep.mean), p.runs, seed)
                for r in rankings]

    jobs = list(enumerate(betas))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(one, jobs))
    else:
        parts = [one(j) for j in jobs]
    return [row for part in parts for row in part]


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    buf.write("method,beta,tau,runs,seed\n")
    for r in rows:
        tau = "nan" if r.tau is None else fmt_sig(r.tau)
        buf.write(f"{r.method},{fmt_sig(r.beta)},{tau},{r.runs},{r.seed}\n")
    return buf.getvalue()


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` with ``stop`` included when it lies on the grid."""
    try:
        start, stop, step = (float(t) for t in text.split(":"))
    except ValueError:
        raise ValueError(f"beta grid must be start:stop:step, got {text!r}") from None
    if step <= 0 or stop < start:
        raise ValueError(f"empty beta grid {text!r}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]
