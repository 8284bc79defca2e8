"""Graph state, random-graph generators, and edge-list file IO.

Graphs are simple (no self-loops, no parallel edges) over dense node ids
0..n-1. Undirected graphs store both arcs in the adjacency structure so
that simulation and likelihood code never branch on mode; ``edge_count``
still counts unordered pairs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

DIRECTED = "directed"
UNDIRECTED = "undirected"

# Conventional 2x2 initiator matrices for stochastic Kronecker graphs.
CORE_PERIPHERY_SEED = ((0.9, 0.5), (0.5, 0.3))
HIERARCHICAL_SEED = ((0.9, 0.1), (0.1, 0.9))


class EdgeListParseError(ValueError):
    """Raised when an edge-list or label file has a malformed line."""


def _check_mode(mode: str) -> None:
    if mode not in (DIRECTED, UNDIRECTED):
        raise ValueError(f"unknown graph mode: {mode!r}")


class Graph:
    """Mutable simple graph with O(1) edge toggling and uniform edge picks.

    ``_edges`` holds one entry per edge: ordered arcs in directed mode,
    canonical (min, max) pairs in undirected mode. ``_edge_pos`` maps each
    entry to its list index so removal is a swap-with-last.
    """

    __slots__ = ("n", "mode", "adj", "in_adj", "out_deg", "_edges", "_edge_pos")

    def __init__(self, n: int, mode: str = UNDIRECTED):
        if n < 1:
            raise ValueError("graph needs at least one node")
        _check_mode(mode)
        self.n = n
        self.mode = mode
        self.adj: list[set[int]] = [set() for _ in range(n)]
        self.in_adj: list[set[int]] = [set() for _ in range(n)]
        self.out_deg = [0] * n
        self._edges: list[tuple[int, int]] = []
        self._edge_pos: dict[tuple[int, int], int] = {}

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def dyad_count(self) -> int:
        """Number of distinct toggleable dyads (M)."""
        m = self.n * (self.n - 1)
        return m if self.mode == DIRECTED else m // 2

    def canonical(self, i: int, j: int) -> tuple[int, int]:
        if self.mode == UNDIRECTED and j < i:
            return (j, i)
        return (i, j)

    def _check_pair(self, i: int, j: int) -> None:
        if i == j:
            raise ValueError(f"self-loop ({i},{i}) not allowed")
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise ValueError(f"node pair ({i},{j}) out of range for n={self.n}")

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.adj[i]

    def _insert_arc(self, i: int, j: int) -> None:
        self.adj[i].add(j)
        self.in_adj[j].add(i)
        self.out_deg[i] += 1

    def _remove_arc(self, i: int, j: int) -> None:
        self.adj[i].remove(j)
        self.in_adj[j].remove(i)
        self.out_deg[i] -= 1

    def toggle_edge(self, i: int, j: int) -> str:
        """Flip edge presence; returns "added" or "removed".

        Undirected mode flips both arcs of the unordered pair.
        """
        self._check_pair(i, j)
        key = self.canonical(i, j)
        pos = self._edge_pos.pop(key, None)
        if pos is not None:
            last = self._edges.pop()
            if pos < len(self._edges):
                self._edges[pos] = last
                self._edge_pos[last] = pos
            self._remove_arc(*key)
            if self.mode == UNDIRECTED:
                self._remove_arc(key[1], key[0])
            return "removed"
        self._edge_pos[key] = len(self._edges)
        self._edges.append(key)
        self._insert_arc(*key)
        if self.mode == UNDIRECTED:
            self._insert_arc(key[1], key[0])
        return "added"

    def add_edge(self, i: int, j: int) -> None:
        """Add an edge known to be absent (generator fast path)."""
        if self.has_edge(i, j):
            raise ValueError(f"edge ({i},{j}) already present")
        self.toggle_edge(i, j)

    def edges(self) -> list[tuple[int, int]]:
        """Current edges in internal (insertion-dependent) order."""
        return list(self._edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self._edges)

    def edge_at(self, idx: int) -> tuple[int, int]:
        return self._edges[idx]

    def copy(self) -> "Graph":
        g = Graph(self.n, self.mode)
        for i, j in self._edges:
            g.add_edge(i, j)
        return g

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int8)
        for i in range(self.n):
            for j in self.adj[i]:
                a[i, j] = 1
        return a

    def density(self) -> float:
        if self.dyad_count == 0:
            return 0.0
        return self.edge_count / self.dyad_count

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n, self.mode) == (other.n, other.mode) and set(
            self._edges
        ) == set(other._edges)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, mode={self.mode!r}, edges={self.edge_count})"


@dataclass(frozen=True)
class GeneratorSpec:
    """Declarative description of a random-graph model instance.

    ``kind`` is one of erdos_renyi, forest_fire, kronecker. Kronecker sizes
    must be a power of the initiator dimension; either ``n`` or ``power``
    may be given.
    """

    kind: str
    n: int | None = None
    mode: str = UNDIRECTED
    p: float | None = None
    z: float | None = None
    forward: float = 0.37
    backward: float = 0.32
    seed_matrix: tuple[tuple[float, ...], ...] = CORE_PERIPHERY_SEED
    power: int | None = None


def generate_graph(spec: GeneratorSpec, rng: np.random.Generator) -> Graph:
    """Dispatch a GeneratorSpec to the matching generator."""
    if spec.kind == "erdos_renyi":
        if spec.n is None:
            raise ValueError("erdos_renyi needs n")
        return gen_erdos_renyi(spec.n, spec.mode, rng, p=spec.p, z=spec.z)
    if spec.kind == "forest_fire":
        if spec.n is None:
            raise ValueError("forest_fire needs n")
        return gen_forest_fire(
            spec.n, spec.mode, rng, forward=spec.forward, backward=spec.backward
        )
    if spec.kind == "kronecker":
        power = spec.power
        if power is None:
            if spec.n is None:
                raise ValueError("kronecker needs n or power")
            base = len(spec.seed_matrix)
            power, size = 1, base
            while size < spec.n:
                power += 1
                size *= base
            if size != spec.n:
                raise ValueError(
                    f"kronecker size must be a power of {base}, got n={spec.n}"
                )
        return gen_kronecker(power, spec.mode, rng, seed_matrix=spec.seed_matrix)
    raise ValueError(f"unknown generator kind: {spec.kind!r}")


def gen_erdos_renyi(
    n: int,
    mode: str,
    rng: np.random.Generator,
    p: float | None = None,
    z: float | None = None,
) -> Graph:
    """G(n, p) graph; give either p or the mean degree z (p = z/(n-1))."""
    if (p is None) == (z is None):
        raise ValueError("give exactly one of p, z")
    if p is None:
        p = z / (n - 1) if n > 1 else 0.0
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability {p} outside [0, 1]")
    g = Graph(n, mode)
    if mode == UNDIRECTED:
        ii, jj = np.triu_indices(n, k=1)
    else:
        off = ~np.eye(n, dtype=bool)
        ii, jj = np.nonzero(off)
    mask = rng.random(ii.size) < p
    for i, j in zip(ii[mask].tolist(), jj[mask].tolist()):
        g.add_edge(i, j)
    return g


def gen_forest_fire(
    n: int,
    mode: str,
    rng: np.random.Generator,
    forward: float = 0.37,
    backward: float = 0.32,
) -> Graph:
    """Forest Fire growth model.

    Each arriving node picks a uniform ambassador, recursively "burns"
    geometric numbers of out- and in-neighbors, and links to every burned
    node. ``backward`` acts as a ratio on ``forward``, so forward=0 grows a
    pure ambassador tree. The directed growth process is symmetrized when
    an undirected graph is requested.
    """
    if not 0.0 <= forward < 1.0:
        raise ValueError("forward burn probability must be in [0, 1)")
    if not 0.0 <= backward < 1.0:
        raise ValueError("backward burn ratio must be in [0, 1)")
    p_back = forward * backward
    out_links: list[set[int]] = [set() for _ in range(n)]
    in_links: list[set[int]] = [set() for _ in range(n)]
    for v in range(1, n):
        w = int(rng.integers(v))
        visited = {v, w}
        burned = [w]
        queue = [w]
        while queue:
            u = queue.pop(0)
            n_fwd = int(rng.geometric(1.0 - forward)) - 1
            n_back = int(rng.geometric(1.0 - p_back)) - 1 if p_back > 0.0 else 0
            for cand, want in ((out_links[u], n_fwd), (in_links[u], n_back)):
                if want <= 0:
                    continue
                fresh = sorted(t for t in cand if t not in visited)
                if len(fresh) > want:
                    keep = rng.permutation(len(fresh))[:want]
                    fresh = [fresh[k] for k in sorted(keep.tolist())]
                for t in fresh:
                    visited.add(t)
                    burned.append(t)
                    queue.append(t)
        for u in burned:
            out_links[v].add(u)
            in_links[u].add(v)
    g = Graph(n, mode)
    for v in range(n):
        for u in sorted(out_links[v]):
            if not g.has_edge(v, u):
                g.add_edge(v, u)
    return g


def kronecker_edge_probability(
    seed_matrix: tuple[tuple[float, ...], ...], power: int, i: int, j: int
) -> float:
    """Edge probability as the product of initiator entries along the
    base-b digit decomposition of (i, j)."""
    base = len(seed_matrix)
    prob = 1.0
    for _ in range(power):
        prob *= seed_matrix[i % base][j % base]
        i //= base
        j //= base
    return prob


def kronecker_probability_matrix(
    seed_matrix: tuple[tuple[float, ...], ...], power: int
) -> np.ndarray:
    seed = np.asarray(seed_matrix, dtype=float)
    if seed.ndim != 2 or seed.shape[0] != seed.shape[1]:
        raise ValueError("seed matrix must be square")
    if np.any(seed < 0.0) or np.any(seed > 1.0):
        raise ValueError("seed matrix entries must be in [0, 1]")
    if power < 1:
        raise ValueError("kronecker power must be >= 1")
    full = seed
    for _ in range(power - 1):
        full = np.kron(full, seed)
    return full


def gen_kronecker(
    power: int,
    mode: str,
    rng: np.random.Generator,
    seed_matrix: tuple[tuple[float, ...], ...] = CORE_PERIPHERY_SEED,
) -> Graph:
    """Stochastic Kronecker graph on base**power nodes, self-loops stripped."""
    probs = kronecker_probability_matrix(seed_matrix, power)
    n = probs.shape[0]
    g = Graph(n, mode)
    if mode == UNDIRECTED:
        ii, jj = np.triu_indices(n, k=1)
    else:
        ii, jj = np.nonzero(~np.eye(n, dtype=bool))
    mask = rng.random(ii.size) < probs[ii, jj]
    for i, j in zip(ii[mask].tolist(), jj[mask].tolist()):
        g.add_edge(i, j)
    return g


@dataclass
class EdgeListResult:
    """A loaded graph plus the dense-id to original-id mapping."""

    graph: Graph
    original_ids: list[int]
    self_loops_dropped: int = 0
    duplicates_dropped: int = 0

    def dense_id_of(self) -> dict[int, int]:
        return {orig: dense for dense, orig in enumerate(self.original_ids)}


def load_edge_list(path: str, mode: str) -> EdgeListResult:
    """Parse whitespace-separated "u v" lines into a densely relabeled graph.

    Lines starting with '#' are comments. Duplicate pairs collapse and
    self-loops are dropped, both counted in the result.
    """
    _check_mode(mode)
    pairs: list[tuple[int, int]] = []
    self_loops = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise EdgeListParseError(
                    f"{path}:{lineno}: expected two tokens, got {len(tokens)}"
                )
            try:
                u, v = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise EdgeListParseError(
                    f"{path}:{lineno}: non-integer token in {line!r}"
                ) from None
            if u == v:
                self_loops += 1
                continue
            pairs.append((u, v))
    nodes = sorted({u for u, _ in pairs} | {v for _, v in pairs})
    if not nodes:
        raise ValueError(f"{path}: no edges found")
    dense = {orig: k for k, orig in enumerate(nodes)}
    g = Graph(len(nodes), mode)
    dups = 0
    for u, v in pairs:
        i, j = dense[u], dense[v]
        if g.has_edge(i, j):
            dups += 1
        else:
            g.add_edge(i, j)
    return EdgeListResult(g, nodes, self_loops_dropped=self_loops, duplicates_dropped=dups)


def save_edge_list(g: Graph, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i, j in g.sorted_edges():
            fh.write(f"{i} {j}\n")


def save_node_map(original_ids: list[int], path: str) -> None:
    """Persist the dense relabeling as CSV "dense_id,original_id"."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["dense_id", "original_id"])
        for dense, orig in enumerate(original_ids):
            writer.writerow([dense, orig])


def load_node_labels(path: str) -> dict[int, int]:
    """Parse "node label" lines keyed by original node id."""
    labels: dict[int, int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise EdgeListParseError(
                    f"{path}:{lineno}: expected two tokens, got {len(tokens)}"
                )
            try:
                labels[int(tokens[0])] = int(tokens[1])
            except ValueError:
                raise EdgeListParseError(
                    f"{path}:{lineno}: non-integer token in {line!r}"
                ) from None
    return labels


def restrict_to_department(
    g: Graph, labels: dict[int, int], dept: int
) -> tuple[Graph, list[int]]:
    """Induced subgraph on nodes with the given label, densely relabeled.

    ``labels`` maps every node of ``g`` to its department id. Returns the
    subgraph and the list of kept original (pre-restriction) node ids.
    """
    missing = [u for u in range(g.n) if u not in labels]
    if missing:
        raise ValueError(f"labels missing for {len(missing)} nodes, e.g. {missing[0]}")
    kept = [u for u in range(g.n) if labels[u] == dept]
    if not kept:
        raise ValueError(f"no nodes with department {dept}")
    dense = {u: k for k, u in enumerate(kept)}
    sub = Graph(len(kept), g.mode)
    for i, j in g.sorted_edges():
        if i in dense and j in dense:
            sub.add_edge(dense[i], dense[j])
    return sub, kept
