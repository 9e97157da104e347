"""Node rankings shared by every centrality method."""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph

SIG_DIGITS = 12


def round_sig(x: np.ndarray, digits: int = SIG_DIGITS) -> np.ndarray:
    """Round to ``digits`` significant digits; used wherever scores are compared."""
    x = np.asarray(x, dtype=float)
    flat = [float(f"{v:.{digits - 1}e}") for v in x.ravel().tolist()]
    return np.array(flat, dtype=float).reshape(x.shape)


def fmt_sig(x: float, digits: int = 10) -> str:
    s = f"{float(x):.{digits}g}"
    return "0" if s == "-0" else s


@dataclass
class Ranking:
    """
    Scores for every node of a graph, with a deterministic order.

    ``order`` lists internal ids by descending score, ties by ascending id.
    ``rank`` is the competition rank ("1224"), so tied nodes share a rank.

    Attributes
    ----------
    method : str
    scores : numpy array indexed by internal id
    labels : list of str
    digest : str
        Digest of the graph the scores were computed on.
    params : dict
    """

    method: str
    scores: np.ndarray
    labels: list[str]
    digest: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.scores = np.asarray(self.scores, dtype=float)
        if len(self.scores) != len(self.labels):
            raise ValueError("one score per node required")
        key = round_sig(self.scores)
        self.order = np.lexsort((np.arange(len(key)), -key))
        sorted_key = key[self.order]
        rank_sorted = np.empty(len(key), dtype=np.int64)
        for pos in range(len(key)):
            if pos and sorted_key[pos] == sorted_key[pos - 1]:
                rank_sorted[pos] = rank_sorted[pos - 1]
            else:
                rank_sorted[pos] = pos + 1
        self.rank = np.empty(len(key), dtype=np.int64)
        self.rank[self.order] = rank_sorted

    @classmethod
    def for_graph(cls, method: str, g: Graph, scores, **params) -> "Ranking":
        return cls(method, scores, list(g.labels), g.digest(), params)

    def __len__(self) -> int:
        return len(self.labels)

    def top(self, k: int) -> list[int]:
        """Internal ids of the first ``k`` entries."""
        return [int(i) for i in self.order[:k]]

    def top_labels(self, k: int) -> list[str]:
        return [self.labels[i] for i in self.top(k)]

    def leaders(self) -> list[str]:
        """Labels sharing rank 1."""
        return [self.labels[i] for i in self.order if self.rank[i] == 1]

    def score_of(self, label) -> float:
        return float(self.scores[self.labels.index(str(label))])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("node,score,rank\n")
        for i in self.order:
            buf.write(f"{self.labels[i]},{fmt_sig(self.scores[i])},{self.rank[i]}\n")
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "method": self.method,
            "graph_digest": self.digest,
            "params": self.params,
            "entries": [
                {"node": self.labels[i], "score": float(fmt_sig(self.scores[i])),
                 "rank": int(self.rank[i])}
                for i in self.order
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
