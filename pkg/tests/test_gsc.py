from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete_graph, path_graph, random_connected, star_graph
from gscrank.graph import Graph, apsp
from gscrank.gsc import (NodeVectors, centered_profile, distance_corr, distance_histograms,
                         gsc_scores, nc_score, node_vectors, pearson_p)
from oracles import gsc_naive


def vectors(ndv):
    ndv = np.array(ndv, dtype=np.int64)
    return NodeVectors(ndv, ndv * np.arange(1, len(ndv) + 1))


@pytest.fixture(scope="module")
def thirteen_vectors(thirteen):
    dm = apsp(thirteen)
    return {lab: node_vectors(dm, thirteen.index(str(lab))) for lab in range(1, 14)}


def test_thirteen_node_profiles(thirteen_vectors):
    v = thirteen_vectors
    assert list(v[13].ndv) == [3, 3, 4, 2]
    assert list(v[13].dv) == [3, 6, 12, 8]
    assert list(v[7].ndv) == [5, 7, 0, 0]
    assert list(v[7].dv) == [5, 14, 0, 0]
    assert list(v[8].ndv) == [3, 4, 5, 0]


def test_star_profiles():
    dm = apsp(star_graph(5))
    assert list(node_vectors(dm, 0).ndv) == [5, 0]
    assert list(node_vectors(dm, 1).ndv) == [1, 4]


def test_pearson_on_profiles(thirteen_vectors):
    v = thirteen_vectors
    assert pearson_p(v[7], v[13]) == 0.0
    # hand value 7 / sqrt(38 * 14)
    assert pearson_p(v[7], v[8]) == pytest.approx(7 / math.sqrt(38 * 14), abs=1e-12)
    assert abs(pearson_p(v[7], v[8]) - 0.3035) < 5e-4


def test_pearson_constant_vector_is_undefined():
    assert pearson_p(vectors([2, 2, 2]), vectors([1, 4, 1])) is None


def test_centered_distance_corr_hand_oracle(thirteen_vectors):
    v = thirteen_vectors
    # t7 = (-2.9167, 2.9167, 0, 0), t8 = (-3.5, -0.6667, 4.1667, 0)
    t7 = np.array([5 - 5 * 19 / 12, 14 - 7 * 19 / 12, 0, 0])
    t8 = np.array([3 - 3 * 26 / 12, 8 - 4 * 26 / 12, 15 - 5 * 26 / 12, 0])
    assert centered_profile(v[7], 19 / 12) == pytest.approx(t7)
    assert centered_profile(v[8], 26 / 12) == pytest.approx(t8)
    expected = t7 @ t8 / np.linalg.norm(t7) / np.linalg.norm(t8)
    assert distance_corr(v[7], v[8]) == pytest.approx(expected, abs=1e-12)
    assert distance_corr(v[7], v[8], 19 / 12, 26 / 12) == pytest.approx(expected, abs=1e-12)
    assert abs(distance_corr(v[7], v[8]) - 0.3654) < 5e-4


def test_cosine_distance_corr(thirteen_vectors):
    v = thirteen_vectors
    assert distance_corr(v[7], v[8], variant="cosine") == pytest.approx(43 / math.sqrt(74 * 50))
    assert distance_corr(v[7], v[13], variant="cosine") == pytest.approx(36 / math.sqrt(74 * 38))
    assert abs(distance_corr(v[7], v[8], variant="cosine") - 0.7069) < 5e-4
    assert abs(distance_corr(v[7], v[13], variant="cosine") - 0.6789) < 5e-4


def test_distance_corr_identical_and_zero():
    a = vectors([2, 5, 1])
    assert distance_corr(a, a) == pytest.approx(1.0)
    assert distance_corr(a, a, variant="cosine") == pytest.approx(1.0)
    # a node at distance 1 from everyone has an all-zero centered profile
    assert distance_corr(vectors([4, 0]), vectors([1, 3])) is None
    with pytest.raises(ValueError):
        distance_corr(a, a, variant="other")


def test_nc_score_branches():
    assert nc_score(0.0, 0.6789, 2) == pytest.approx(1.33945)
    assert nc_score(0.5, 0.0, 1) == pytest.approx(1.5)
    assert nc_score(-0.5, 0.0, 1) == pytest.approx(1.5)
    assert nc_score(None, None, 3) == 1.0
    with pytest.raises(ValueError):
        nc_score(0.1, 0.1, 0)


def test_two_node_path_is_symmetric():
    r = gsc_scores(path_graph(2))
    assert r.scores[0] == r.scores[1]


def test_complete_graph_has_undefined_pearson_everywhere():
    # every profile is constant, so each pair scores 1 + cosine / 1 = 2
    r = gsc_scores(complete_graph(5))
    assert r.scores == pytest.approx([8.0] * 5)


@pytest.mark.parametrize("variant", ["cosine", "centered"])
def test_gsc_matches_naive_oracle(variant):
    for seed in range(25):
        n, edges = random_connected(seed, n_max=25, n_min=2)
        got = gsc_scores(Graph.from_edges(n, edges), variant=variant, block=4).scores
        assert np.allclose(got, gsc_naive(n, edges, variant), rtol=0, atol=1e-9), seed


def test_gsc_blocks_and_workers_do_not_change_scores(karate, karate_dm):
    base = gsc_scores(karate, karate_dm).scores
    other = gsc_scores(karate, karate_dm, block=3, workers=4).scores
    assert np.array_equal(base, other)


def test_karate_top10_overlaps_reference(karate, karate_dm):
    reference = {"1", "34", "3", "33", "9", "14", "32", "2", "4", "31"}
    top = set(gsc_scores(karate, karate_dm).top_labels(10))
    assert len(top & reference) >= 8


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_profiles_count_every_other_node(seed):
    n, edges = random_connected(seed, n_max=20)
    dm = apsp(Graph.from_edges(n, edges))
    hist = distance_histograms(dm)
    assert (hist.sum(axis=1) == n - 1).all()
    for i in range(n):
        v = node_vectors(dm, i)
        assert np.array_equal(v.ndv, hist[i])
        assert np.array_equal(v.dv, v.ndv * np.arange(1, dm.diameter + 1))
        assert v.total_distance == dm.dist[i].sum()
        assert (v.ndv[dm.ecc[i]:] == 0).all()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_correlations_symmetric_and_bounded(seed):
    n, edges = random_connected(seed, n_max=16, n_min=3)
    dm = apsp(Graph.from_edges(n, edges))
    vs = [node_vectors(dm, i) for i in range(n)]
    rng = np.random.default_rng(seed)
    for _ in range(10):
        a, b = (vs[int(i)] for i in rng.integers(0, n, size=2))
        for f in (pearson_p, distance_corr,
                  lambda x, y: distance_corr(x, y, variant="cosine")):
            ab, ba = f(a, b), f(b, a)
            assert ab == ba or (ab is not None and ab == pytest.approx(ba, abs=1e-12))
            if ab is not None:
                assert -1.0 <= ab <= 1.0


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 30), min_size=2, max_size=8))
def test_self_correlation_is_one(ndv):
    v = vectors(ndv)
    if len(set(ndv)) > 1:
        assert pearson_p(v, v) == pytest.approx(1.0)
    if any(centered_profile(v)):
        assert distance_corr(v, v) == pytest.approx(1.0)


@settings(max_examples=40, deadline=None)
@given(st.floats(-1, 1), st.floats(0, 1), st.integers(1, 10))
def test_nonnegative_distance_corr_gives_term_at_least_one(p, c, d):
    assert nc_score(p, c, d) >= 1.0


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_gsc_relabel_equivariant(seed):
    n, edges = random_connected(seed, n_max=20, n_min=3)
    g = Graph.from_edges(n, edges)
    perm = np.random.default_rng(seed).permutation(n)
    h = g.relabel(perm)
    a, b = gsc_scores(g), gsc_scores(h)
    assert np.allclose(a.scores, b.scores[perm], atol=1e-9)
    if len(set(np.round(a.scores, 9))) == n:
        assert [perm[i] for i in a.order] == list(b.order)


@pytest.mark.parametrize("variant", ["cosine", "centered"])
def test_without_pearson_term_reduces_to_distance_part(variant):
    n, edges = random_connected(7, n_max=15, n_min=6)
    g = Graph.from_edges(n, edges)
    dm = apsp(g)
    vs = [node_vectors(dm, i) for i in range(n)]
    expected = [sum(nc_score(None, distance_corr(vs[i], vs[j], variant=variant),
                             int(dm.dist[i, j])) for j in range(n) if j != i)
                for i in range(n)]
    got = gsc_scores(g, dm, variant=variant, pearson=False).scores
    assert got == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("leaves", [3, 4, 6, 10])
def test_star_leaves_outscore_center(leaves):
    # centre: leaves * (1 + c) with c = 1/sqrt(1 + (leaves-1)^2) under the cosine
    # reading; each leaf also collects 1.5 from every other leaf at distance 2
    g = star_graph(leaves)
    c = 1 / math.sqrt(1 + (leaves - 1) ** 2)
    for pearson in (True, False):
        s = gsc_scores(g, pearson=pearson).scores
        assert s[0] == pytest.approx(leaves * (1 + c))
        assert s[1] == pytest.approx(1 + c + 1.5 * (leaves - 1))
        assert s[0] < s[1]


def test_three_node_path_center_leads():
    s = gsc_scores(path_graph(3), pearson=False).scores
    assert s[1] > s[0] == s[2]
