"""Shared randomized-instance builders for oracle-based tests."""

import numpy as np

from cascadebayes.cascades import Cascade
from cascadebayes.graphs import DIRECTED, UNDIRECTED, Graph
from cascadebayes.likelihood import ModelParams, WeightConfig


def random_instance(rng, n_max=5, mode=DIRECTED):
    """Random (graph, time-ordered cascade, params) triple for enumeration
    cross-checks; small enough for the brute-force likelihood."""
    n = int(rng.integers(2, n_max + 1))
    g = Graph(n, mode)
    for i in range(n):
        lo = i + 1 if mode == UNDIRECTED else 0
        for j in range(lo, n):
            if i != j and rng.random() < 0.5:
                g.add_edge(i, j)
    size = int(rng.integers(1, n + 1))
    nodes = rng.permutation(n)[:size].tolist()
    times = np.sort(rng.random(size) * 3.0).tolist()
    beta = float(rng.uniform(0.05, 0.95))
    alpha = float(rng.uniform(0.3, 3.0))
    return g, Cascade(0, nodes, times), ModelParams(beta, WeightConfig(alpha))
