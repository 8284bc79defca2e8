import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cascadebayes.evaluation import (
    EdgeMarginals,
    false_positive_alarm,
    load_marginals,
    marginals_from_counts,
    roc,
    save_marginals,
    save_roc,
    top_k_edges,
)
from cascadebayes.graphs import DIRECTED, UNDIRECTED, Graph, gen_erdos_renyi
from cascadebayes.sampler import EdgeCounts


def marginals_from_matrix(q, mode=UNDIRECTED):
    q = np.asarray(q, dtype=float)
    if mode != DIRECTED:
        q = np.triu(q, 1)
        q = q + q.T
    return EdgeMarginals(q.shape[0], mode, q, samples_taken=100)


def random_truth(n, rng, mode=UNDIRECTED, p=0.4):
    g = Graph(n, mode)
    while g.edge_count == 0 or g.edge_count == g.dyad_count:
        g = Graph(n, mode)
        for i in range(n):
            lo = i + 1 if mode == UNDIRECTED else 0
            for j in range(lo, n):
                if i != j and rng.random() < p:
                    g.add_edge(i, j)
    return g


# -- marginals ----------------------------------------------------------------


def test_marginals_zero_and_full_counts():
    zero = EdgeCounts(3, UNDIRECTED, np.zeros((3, 3), dtype=np.int64), 10)
    assert marginals_from_counts(zero).q.max() == 0.0
    counts = np.zeros((3, 3), dtype=np.int64)
    counts[0, 1] = counts[0, 2] = counts[1, 2] = 10
    full = marginals_from_counts(EdgeCounts(3, UNDIRECTED, counts, 10))
    assert full.q[0, 1] == full.q[1, 0] == 1.0


def test_marginals_require_samples():
    with pytest.raises(ValueError):
        marginals_from_counts(EdgeCounts(3, UNDIRECTED, np.zeros((3, 3), dtype=np.int64), 0))


def test_merged_counts_average_marginals():
    a = np.zeros((3, 3), dtype=np.int64)
    b = np.zeros((3, 3), dtype=np.int64)
    a[0, 1] = 10
    b[0, 1] = 0
    merged = EdgeCounts.merged(
        [EdgeCounts(3, UNDIRECTED, a, 10), EdgeCounts(3, UNDIRECTED, b, 10)]
    )
    m = marginals_from_counts(merged)
    assert m.q[0, 1] == pytest.approx(0.5)


# -- top-k ---------------------------------------------------------------------


def test_top_k_zero():
    m = marginals_from_matrix(np.zeros((3, 3)))
    assert top_k_edges(m, 0) == []


def test_top_k_sorted_prefix():
    q = np.zeros((3, 3))
    q[0, 1], q[0, 2], q[1, 2] = 0.9, 0.4, 0.6
    m = marginals_from_matrix(q)
    assert top_k_edges(m, 2) == [(0, 1), (1, 2)]


def test_top_k_tie_break_lexicographic():
    m = marginals_from_matrix(np.full((3, 3), 0.5))
    assert top_k_edges(m, 2) == [(0, 1), (0, 2)]


def test_top_k_bounds():
    m = marginals_from_matrix(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        top_k_edges(m, 4)


# -- ROC -----------------------------------------------------------------------


def truth_from_edges(n, edges, mode=UNDIRECTED):
    g = Graph(n, mode)
    for i, j in edges:
        g.add_edge(i, j)
    return g


def test_roc_perfect_classifier():
    truth = truth_from_edges(4, [(0, 1), (2, 3)])
    m = marginals_from_matrix(truth.adjacency_matrix().astype(float))
    curve = roc(m, truth)
    assert curve.auc == pytest.approx(1.0)
    assert curve.fpr[0] == 0.0 and curve.tpr[-1] == 1.0


def test_roc_constant_scores_is_chance():
    truth = truth_from_edges(4, [(0, 1), (2, 3)])
    m = marginals_from_matrix(np.full((4, 4), 0.7))
    curve = roc(m, truth)
    assert curve.auc == pytest.approx(0.5)
    assert list(curve.fpr) == [0.0, 1.0]
    assert list(curve.tpr) == [0.0, 1.0]


def test_roc_monotone_curve_and_endpoints():
    rng = np.random.default_rng(0)
    truth = random_truth(8, rng)
    q = rng.random((8, 8))
    m = marginals_from_matrix(q)
    curve = roc(m, truth)
    assert (np.diff(curve.fpr) >= 0).all()
    assert (np.diff(curve.tpr) >= 0).all()
    assert (curve.fpr[0], curve.tpr[0]) == (0.0, 0.0)
    assert (curve.fpr[-1], curve.tpr[-1]) == (1.0, 1.0)
    assert 0.0 <= curve.auc <= 1.0


def mann_whitney_auc(m, truth):
    """Oracle: probability a random (true-edge, non-edge) pair is ordered
    correctly, ties counting one half."""
    pos, neg = [], []
    for i, j in m.dyads():
        (pos if truth.has_edge(i, j) else neg).append(m.q[i, j])
    total = 0.0
    for a in pos:
        for b in neg:
            total += 1.0 if a > b else (0.5 if a == b else 0.0)
    return total / (len(pos) * len(neg))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([UNDIRECTED, DIRECTED]))
def test_roc_auc_equals_mann_whitney(seed, mode):
    rng = np.random.default_rng(seed)
    truth = random_truth(6, rng, mode=mode)
    # quantized scores force plenty of ties
    q = np.round(rng.random((6, 6)) * 4) / 4
    m = marginals_from_matrix(q, mode=mode)
    curve = roc(m, truth)
    assert curve.auc == pytest.approx(mann_whitney_auc(m, truth), abs=1e-10)


def test_roc_invariant_under_monotone_transform():
    rng = np.random.default_rng(3)
    truth = random_truth(7, rng)
    q = rng.random((7, 7))
    base = roc(marginals_from_matrix(q), truth)
    transformed = roc(marginals_from_matrix(np.sqrt(q) * 0.5 + 0.1), truth)
    assert transformed.auc == pytest.approx(base.auc, abs=1e-12)
    assert np.allclose(transformed.fpr, base.fpr)


def test_roc_degenerate_truth_rejected():
    m = marginals_from_matrix(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        roc(m, Graph(3, UNDIRECTED))
    full = Graph(3, UNDIRECTED)
    for i in range(3):
        for j in range(i + 1, 3):
            full.add_edge(i, j)
    with pytest.raises(ValueError):
        roc(m, full)


def test_roc_dimension_mismatch():
    m = marginals_from_matrix(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        roc(m, truth_from_edges(4, [(0, 1)]))


# -- false positive alarm ---------------------------------------------------------


def test_fpa_perfect_marginals():
    truth = truth_from_edges(5, [(0, 1), (1, 2), (3, 4)])
    m = marginals_from_matrix(truth.adjacency_matrix().astype(float))
    assert false_positive_alarm(m, truth) == pytest.approx(1.0)


def test_fpa_top_ranked_false_positive_kills_small_instances():
    # with M = 10 dyads no prefix can absorb one false positive at 1%
    truth = truth_from_edges(5, [(0, 1), (1, 2), (3, 4)])
    q = truth.adjacency_matrix().astype(float) * 0.8
    q[0, 2] = q[2, 0] = 0.99  # a confident false edge on top
    m = marginals_from_matrix(q)
    assert false_positive_alarm(m, truth) == 0.0


def test_fpa_scan_matches_direct_enumeration():
    rng = np.random.default_rng(11)
    truth = random_truth(9, rng)
    q = rng.random((9, 9))
    m = marginals_from_matrix(q)
    dyads = sorted(m.dyads(), key=lambda d: (-m.q[d], d[0], d[1]))
    best = 0.0
    fp = tp = 0
    for k, d in enumerate(dyads, start=1):
        if truth.has_edge(*d):
            tp += 1
        else:
            fp += 1
        if fp / k <= 0.01:
            best = tp / truth.edge_count
    assert false_positive_alarm(m, truth) == pytest.approx(best)


def test_fpa_nonincreasing_in_tighter_tolerance():
    rng = np.random.default_rng(4)
    truth = random_truth(10, rng)
    q = rng.random((10, 10)) ** 0.3
    m = marginals_from_matrix(q)
    loose = false_positive_alarm(m, truth, tolerance=0.2)
    mid = false_positive_alarm(m, truth, tolerance=0.05)
    tight = false_positive_alarm(m, truth, tolerance=0.01)
    assert loose >= mid >= tight


# -- CSV IO -------------------------------------------------------------------------


def test_marginals_csv_roundtrip(tmp_path):
    rng = np.random.default_rng(8)
    m = marginals_from_matrix(rng.random((5, 5)))
    path = tmp_path / "marginals.csv"
    save_marginals(m, str(path))
    loaded = load_marginals(str(path), 5, UNDIRECTED)
    assert np.allclose(loaded.q, m.q)
    header = path.read_text().splitlines()[0]
    assert header == "i,j,q"


def test_load_marginals_validates_range(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("i,j,q\n0,9,0.5\n")
    with pytest.raises(ValueError):
        load_marginals(str(path), 3, UNDIRECTED)


def test_roc_csv_format(tmp_path):
    truth = truth_from_edges(4, [(0, 1), (2, 3)])
    m = marginals_from_matrix(truth.adjacency_matrix().astype(float))
    curve = roc(m, truth)
    path = tmp_path / "roc.csv"
    save_roc(curve, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "threshold,fpr,tpr"
    assert len(lines) == len(curve.fpr) + 1
    first = lines[1].split(",")
    assert float(first[1]) == 0.0 and float(first[2]) == 0.0
