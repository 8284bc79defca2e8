"""Posterior summaries and ROC-based evaluation against ground truth."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .graphs import DIRECTED, Graph
from .sampler import EdgeCounts


@dataclass
class EdgeMarginals:
    """Posterior inclusion probability q_ij for every dyad.

    The matrix is symmetric in undirected mode; the diagonal is unused.
    """

    n: int
    mode: str
    q: np.ndarray
    samples_taken: int

    def dyads(self) -> list[tuple[int, int]]:
        if self.mode == DIRECTED:
            return [(i, j) for i in range(self.n) for j in range(self.n) if i != j]
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n)]


def marginals_from_counts(counts: EdgeCounts) -> EdgeMarginals:
    if counts.samples_taken <= 0:
        raise ValueError("no samples taken")
    q = counts.counts.astype(float) / counts.samples_taken
    if counts.mode != DIRECTED:
        q = q + q.T  # canonical counts live in the upper triangle
    return EdgeMarginals(counts.n, counts.mode, q, counts.samples_taken)


def fill_noncandidate_marginals(
    m: EdgeMarginals,
    cascades,
    beta: float,
    prior_p: float,
    candidates: set[tuple[int, int]],
) -> EdgeMarginals:
    """Exact marginals for dyads outside a restricted proposal universe.

    A dyad never co-activated in correct time order cannot touch any
    parent-weight sum; toggling it only shifts the unused-edge count by
    the number of cascades containing each arc's source. Its posterior
    odds therefore factorize away from the rest of the graph:

        odds = p/(1-p) * (1-beta)^(cascades containing the source(s))

    so a restricted chain plus this fill reproduces the full posterior
    marginals exactly.
    """
    membership = np.zeros(m.n, dtype=np.int64)
    for c in cascades:
        for u in c.nodes:
            membership[u] += 1
    base = prior_p / (1.0 - prior_p)
    q = m.q.copy()
    for i, j in m.dyads():
        if (i, j) in candidates:
            continue
        exponent = membership[i]
        if m.mode != DIRECTED:
            exponent = exponent + membership[j]
        odds = base * (1.0 - beta) ** float(exponent)
        value = odds / (1.0 + odds)
        q[i, j] = value
        if m.mode != DIRECTED:
            q[j, i] = value
    return EdgeMarginals(m.n, m.mode, q, m.samples_taken)


def _ranked_dyads(m: EdgeMarginals) -> list[tuple[int, int]]:
    return sorted(m.dyads(), key=lambda d: (-m.q[d[0], d[1]], d[0], d[1]))


def top_k_edges(m: EdgeMarginals, k: int) -> list[tuple[int, int]]:
    """k most probable dyads; ties break lexicographically for determinism."""
    dyads = m.dyads()
    if k > len(dyads):
        raise ValueError(f"k={k} exceeds the {len(dyads)} available dyads")
    return _ranked_dyads(m)[:k]


@dataclass
class RocCurve:
    thresholds: np.ndarray
    fpr: np.ndarray
    tpr: np.ndarray
    auc: float

    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))


def _truth_labels(m: EdgeMarginals, truth: Graph) -> tuple[np.ndarray, np.ndarray]:
    if truth.n != m.n or truth.mode != m.mode:
        raise ValueError("marginals and truth disagree on n or mode")
    dyads = m.dyads()
    scores = np.array([m.q[i, j] for i, j in dyads])
    labels = np.array([truth.has_edge(i, j) for i, j in dyads], dtype=bool)
    pos = int(labels.sum())
    if pos == 0 or pos == len(dyads):
        raise ValueError("degenerate truth: needs at least one edge and one non-edge")
    return scores, labels


def roc(m: EdgeMarginals, truth: Graph) -> RocCurve:
    """Threshold sweep over the distinct marginal values.

    Equal-scored dyads collapse into one threshold step, so ties appear as
    a single diagonal segment and the trapezoid AUC treats them as half
    correct, matching the pairwise-ordering statistic.
    """
    scores, labels = _truth_labels(m, truth)
    order = np.argsort(-scores, kind="stable")
    scores = scores[order]
    labels = labels[order]
    pos = labels.sum()
    neg = len(labels) - pos
    distinct = np.nonzero(np.diff(scores))[0]
    cut = np.concatenate([distinct, [len(scores) - 1]])
    tp = np.cumsum(labels)[cut]
    fp = np.cumsum(~labels)[cut]
    tpr = np.concatenate([[0.0], tp / pos])
    fpr = np.concatenate([[0.0], fp / neg])
    thresholds = np.concatenate([[np.inf], scores[cut]])
    auc = float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1])) / 2.0)
    return RocCurve(thresholds, fpr, tpr, auc)


def false_positive_alarm(
    m: EdgeMarginals, truth: Graph, tolerance: float = 0.01
) -> float:
    """Recall at a precision constraint: scan dyads in descending marginal
    order and return TP(k)/|E| for the largest prefix k whose false
    positive share FP(k)/k stays within tolerance (0 if none qualifies)."""
    scores, labels = _truth_labels(m, truth)
    order = np.lexsort((np.arange(len(scores)), -scores))
    labels = labels[order]
    tp = np.cumsum(labels)
    fp = np.cumsum(~labels)
    k = np.arange(1, len(labels) + 1)
    ok = np.nonzero(fp / k <= tolerance)[0]
    if ok.size == 0:
        return 0.0
    return float(tp[ok[-1]] / labels.sum())


def save_marginals(m: EdgeMarginals, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["i", "j", "q"])
        for i, j in m.dyads():
            writer.writerow([i, j, repr(float(m.q[i, j]))])


def load_marginals(path: str, n: int, mode: str) -> EdgeMarginals:
    q = np.zeros((n, n))
    with open(path, "r", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: empty marginals file")
        for row in reader:
            i, j, val = int(row[0]), int(row[1]), float(row[2])
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"{path}: dyad ({i},{j}) out of range for n={n}")
            q[i, j] = val
            if mode != DIRECTED:
                q[j, i] = val
    return EdgeMarginals(n, mode, q, samples_taken=0)


def save_roc(curve: RocCurve, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["threshold", "fpr", "tpr"])
        for t, x, y in zip(curve.thresholds, curve.fpr, curve.tpr):
            writer.writerow([repr(float(t)), repr(float(x)), repr(float(y))])
