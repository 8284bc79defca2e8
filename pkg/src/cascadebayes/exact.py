"""Exact posterior over graphs by enumeration, for tiny instances.

Enumerates all 2^M graphs on the dyad universe, scoring each with the
brute-force tree-enumeration likelihood, so it is independent of both the
incremental likelihood cache and the sampler. Used as the reference for
convergence tests and golden files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphs import DIRECTED, Graph
from .likelihood import NEG_INF, ModelParams, brute_force_log_likelihood


def all_dyads(n: int, mode: str) -> list[tuple[int, int]]:
    if mode == DIRECTED:
        return [(i, j) for i in range(n) for j in range(n) if i != j]
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


@dataclass
class ExactPosterior:
    n: int
    mode: str
    dyads: list[tuple[int, int]]
    graph_probs: np.ndarray  # normalized, indexed by dyad bitmask
    marginals: np.ndarray  # (n, n), symmetric in undirected mode


def exact_posterior(
    cascades,
    n: int,
    mode: str,
    params: ModelParams,
    prior_p: float,
    max_dyads: int = 16,
) -> ExactPosterior:
    dyads = all_dyads(n, mode)
    m = len(dyads)
    if m > max_dyads:
        raise ValueError(f"{m} dyads is too many to enumerate (max {max_dyads})")
    log_p = math.log(prior_p)
    log_1mp = math.log1p(-prior_p)
    scores = np.empty(2**m)
    for mask in range(2**m):
        g = Graph(n, mode)
        bits = 0
        for k, (i, j) in enumerate(dyads):
            if mask >> k & 1:
                g.add_edge(i, j)
                bits += 1
        score = bits * log_p + (m - bits) * log_1mp
        for c in cascades:
            ll = brute_force_log_likelihood(g, c, params)
            if ll == NEG_INF:
                score = NEG_INF
                break
            score += ll
        scores[mask] = score
    shift = scores.max()
    if shift == NEG_INF:
        raise ValueError("no graph is consistent with the cascades")
    probs = np.exp(scores - shift)
    probs /= probs.sum()
    marg = np.zeros((n, n))
    for k, (i, j) in enumerate(dyads):
        mask_has = (np.arange(2**m) >> k & 1).astype(bool)
        q = probs[mask_has].sum()
        marg[i, j] = q
        if mode != DIRECTED:
            marg[j, i] = q
    return ExactPosterior(n, mode, dyads, probs, marg)
