"""Cascade data model, continuous-time IC simulation, and cascade file IO."""

from __future__ import annotations

import csv
import heapq
from dataclasses import dataclass, field

import numpy as np

from .graphs import Graph

TIE_JITTER = 1e-9


class Cascade:
    """Time-stamped activation sequence with a unique root at time 0.

    Events are sorted ascending by time at construction and times are
    shifted so the root activates at 0. Node ids must be distinct and
    times strictly increasing (break ties before constructing).
    """

    __slots__ = ("id", "nodes", "times", "time_of")

    def __init__(self, cascade_id: int, nodes, times):
        if len(nodes) != len(times):
            raise ValueError("nodes and times length mismatch")
        if not nodes:
            raise ValueError("empty cascade")
        order = sorted(range(len(nodes)), key=lambda k: times[k])
        t0 = times[order[0]]
        self.id = cascade_id
        self.nodes = tuple(int(nodes[k]) for k in order)
        self.times = tuple(float(times[k]) - t0 for k in order)
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError(f"cascade {cascade_id}: duplicate node")
        for a, b in zip(self.times, self.times[1:]):
            if not a < b:
                raise ValueError(f"cascade {cascade_id}: non-increasing times")
        self.time_of = dict(zip(self.nodes, self.times))

    @property
    def root(self) -> int:
        return self.nodes[0]

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def is_singleton(self) -> bool:
        return len(self.nodes) == 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cascade):
            return NotImplemented
        return (self.id, self.nodes, self.times) == (other.id, other.nodes, other.times)

    def __repr__(self) -> str:
        return f"Cascade(id={self.id}, size={self.size}, root={self.root})"


@dataclass
class TransmissionTree:
    """Who-activated-whom map: child node -> parent node."""

    parent: dict[int, int]

    def edges(self) -> list[tuple[int, int]]:
        return [(p, c) for c, p in self.parent.items()]


def break_ties(nodes, times) -> list[float]:
    """Strictify equal times by adding TIE_JITTER * rank within each group."""
    order = sorted(range(len(nodes)), key=lambda k: (times[k], k))
    out = list(times)
    prev_t, rank = None, 0
    for k in order:
        if times[k] == prev_t:
            rank += 1
            out[k] = times[k] + TIE_JITTER * rank
        else:
            prev_t, rank = times[k], 0
    return out


def simulate_ic(
    g: Graph,
    seed_node: int,
    beta: float,
    alpha: float,
    rng: np.random.Generator,
    cascade_id: int = 0,
) -> tuple[Cascade, TransmissionTree]:
    """Event-queue simulation of the continuous-time independent cascade.

    When u activates at t_u, each out-neighbor v independently receives an
    attempt with probability beta, scheduled at t_u + Exp(mean alpha).
    Attempts landing on already-active nodes are discarded; a node's parent
    is the source of its earliest successful attempt.
    """
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must be in [0, 1]")
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    if not 0 <= seed_node < g.n:
        raise ValueError(f"seed node {seed_node} out of range")
    times = {seed_node: 0.0}
    parent: dict[int, int] = {}
    heap: list[tuple[float, int, int, int]] = []
    counter = 0

    def schedule(u: int, t_u: float) -> None:
        nonlocal counter
        for v in sorted(g.adj[u]):
            if rng.random() < beta:
                heapq.heappush(heap, (t_u + rng.exponential(alpha), counter, v, u))
                counter += 1

    schedule(seed_node, 0.0)
    while heap:
        t, _, v, u = heapq.heappop(heap)
        if v in times:
            continue
        times[v] = t
        parent[v] = u
        schedule(v, t)
    nodes = list(times)
    tvals = break_ties(nodes, [times[v] for v in nodes])
    return Cascade(cascade_id, nodes, tvals), TransmissionTree(parent)


class CoverageTracker:
    """Running fraction of a graph's edges used by at least one transmission."""

    def __init__(self, g: Graph):
        self.graph = g
        self.activated: set[tuple[int, int]] = set()
        self.cascade_count = 0
        self.singleton_count = 0
        self.total_activations = 0
        self.target_reached = True

    def add(self, cascade: Cascade, tree: TransmissionTree) -> None:
        for child, par in tree.parent.items():
            if not self.graph.has_edge(par, child):
                raise ValueError(f"tree edge ({par},{child}) absent from graph")
            self.activated.add(self.graph.canonical(par, child))
        self.cascade_count += 1
        self.total_activations += cascade.size
        if cascade.is_singleton:
            self.singleton_count += 1

    @property
    def fraction(self) -> float:
        if self.graph.edge_count == 0:
            return 1.0
        return len(self.activated) / self.graph.edge_count

    @property
    def mean_cascade_size(self) -> float:
        if self.cascade_count == 0:
            return 0.0
        return self.total_activations / self.cascade_count

    def report(self) -> dict:
        return {
            "achieved_f": self.fraction,
            "target_reached": self.target_reached,
            "cascade_count": self.cascade_count,
            "cascade_count_nonsingleton": self.cascade_count - self.singleton_count,
            "mean_cascade_size": self.mean_cascade_size,
        }


def coverage_fraction(trees, g: Graph) -> float:
    """Fraction of g's edges appearing in any transmission tree."""
    used: set[tuple[int, int]] = set()
    for tree in trees:
        for child, par in tree.parent.items():
            if not g.has_edge(par, child):
                raise ValueError(f"tree edge ({par},{child}) absent from graph")
            used.add(g.canonical(par, child))
    if g.edge_count == 0:
        return 1.0
    return len(used) / g.edge_count


def generate_until_coverage(
    g: Graph,
    beta: float,
    alpha: float,
    f_target: float,
    rng: np.random.Generator,
    max_cascades: int = 1_000_000,
) -> tuple[list[Cascade], CoverageTracker]:
    """Simulate cascades from uniform-random seeds until the target edge
    coverage is reached or max_cascades is hit.

    Singleton cascades are retained (they still carry likelihood
    information). When the target is unreachable within the budget the
    tracker's ``target_reached`` flag is False.
    """
    if not 0.0 <= f_target <= 1.0:
        raise ValueError("f_target must be in [0, 1]")
    tracker = CoverageTracker(g)
    cascades: list[Cascade] = []
    while f_target > 0.0 and tracker.fraction < f_target:
        if len(cascades) >= max_cascades:
            tracker.target_reached = False
            return cascades, tracker
        seed = int(rng.integers(g.n))
        cascade, tree = simulate_ic(g, seed, beta, alpha, rng, cascade_id=len(cascades))
        cascades.append(cascade)
        tracker.add(cascade, tree)
    tracker.target_reached = True
    return cascades, tracker


def save_cascades(cascades, path: str) -> None:
    """Write cascades as CSV lines "cascade_id,node_id,time"."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["cascade_id", "node_id", "time"])
        for c in cascades:
            for node, t in zip(c.nodes, c.times):
                writer.writerow([c.id, node, repr(t)])


def load_cascades(path: str) -> list[Cascade]:
    """Parse, group, sort, and validate a cascade CSV.

    Exact time ties within a cascade are broken by deterministic jitter so
    downstream code can rely on a strict activation order.
    """
    grouped: dict[int, tuple[list[int], list[float]]] = {}
    order: list[int] = []
    with open(path, "r", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row or row[0].strip().startswith("#"):
                continue
            if lineno == 1 and row[0].strip() == "cascade_id":
                continue
            if len(row) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
            try:
                cid, node, t = int(row[0]), int(row[1]), float(row[2])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed row {row!r}") from None
            if cid not in grouped:
                grouped[cid] = ([], [])
                order.append(cid)
            grouped[cid][0].append(node)
            grouped[cid][1].append(t)
    cascades = []
    for cid in order:
        nodes, times = grouped[cid]
        if len(set(nodes)) != len(nodes):
            raise ValueError(f"cascade {cid}: duplicate node in {path}")
        cascades.append(Cascade(cid, nodes, break_ties(nodes, times)))
    return cascades
