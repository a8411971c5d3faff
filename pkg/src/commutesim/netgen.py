"""Social networks: Watts-Strogatz small world and Barabasi-Albert scale free."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import shortest_path

__all__ = [
    "Graph",
    "ring_lattice",
    "watts_strogatz",
    "barabasi_albert",
    "complete_graph",
    "build_neighbour_networks",
    "union_graph",
    "graph_stats",
    "write_edge_list",
    "read_edge_list",
]


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph in canonical CSR form (sorted neighbour lists).

    ``node_ids`` maps local node indices to external ids (agent ids);
    ``None`` means the identity.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    node_ids: np.ndarray | None = None
    meta: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges, node_ids=None, meta=None) -> "Graph":
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ValueError("edge endpoint out of range")
        if np.any(e[:, 0] == e[:, 1]):
            raise ValueError("self-loops are not allowed")
        both = np.concatenate([e, e[:, ::-1]])
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        if both.shape[0] > 1 and np.any(np.all(both[1:] == both[:-1], axis=1)):
            raise ValueError("multi-edges are not allowed")
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, both[:, 0] + 1, 1)
        indptr = np.cumsum(indptr)
        ids = None if node_ids is None else np.asarray(node_ids, dtype=np.int64)
        return cls(n, indptr, both[:, 1].astype(np.int64), ids, dict(meta or {}))

    def neighbours(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def n_edges(self) -> int:
        return int(self.indices.size // 2)

    def edges(self) -> np.ndarray:
        """Edge array with ``i < j``, sorted."""
        rows = np.repeat(np.arange(self.n), self.degree())
        keep = rows < self.indices
        return np.column_stack([rows[keep], self.indices[keep]])

    def to_sparse(self) -> sparse.csr_matrix:
        data = np.ones(self.indices.size, dtype=np.float64)
        return sparse.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        same_ids = (self.node_ids is None and other.node_ids is None) or (
            self.node_ids is not None
            and other.node_ids is not None
            and np.array_equal(self.node_ids, other.node_ids)
        )
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and same_ids
        )


def ring_lattice(n: int, k: int) -> Graph:
    if k % 2 or not n > k >= 2:
        raise ValueError(f"ring lattice needs even k with n > k >= 2, got n={n}, k={k}")
    i = np.repeat(np.arange(n), k // 2)
    j = (i + np.tile(np.arange(1, k // 2 + 1), n)) % n
    return Graph.from_edges(n, np.column_stack([i, j]), meta={"kind": "ring", "n": n, "k": k})


def watts_strogatz(n: int, k: int, beta: float, rng: np.random.Generator) -> Graph:
    """Watts-Strogatz small-world graph.

    Starts from a ring lattice (``k/2`` neighbours per side) and visits the
    lattice edges ``(i, i+j)`` for ``j = 1..k/2`` and ``i = 0..n-1``; each is
    rewired with probability ``beta`` to ``(i, w)`` with ``w`` uniform among
    nodes that are neither ``i`` nor already adjacent to ``i``. The edge count
    stays ``n*k/2``.
    """
    if k % 2 or not n > k >= 2:
        raise ValueError(f"watts_strogatz needs even k with n > k >= 2, got n={n}, k={k}")
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must be in [0, 1], got {beta}")
    half = k // 2
    adj = [set() for _ in range(n)]
    for i in range(n):
        for j in range(1, half + 1):
            t = (i + j) % n
            adj[i].add(t)
            adj[t].add(i)
    rewire = rng.random((half, n)) < beta
    for j in range(1, half + 1):
        for i in np.flatnonzero(rewire[j - 1]):
            i = int(i)
            t = (i + j) % n
            if t not in adj[i] or len(adj[i]) >= n - 1:
                continue
            while True:
                w = int(rng.integers(n))
                if w != i and w not in adj[i]:
                    break
            adj[i].discard(t)
            adj[t].discard(i)
            adj[i].add(w)
            adj[w].add(i)
    edges = [(i, t) for i in range(n) for t in adj[i] if i < t]
    return Graph.from_edges(n, edges, meta={"kind": "watts_strogatz", "n": n, "k": k, "beta": beta})


def complete_graph(n: int, node_ids=None) -> Graph:
    edges = list(combinations(range(n), 2))
    return Graph.from_edges(n, edges if edges else np.empty((0, 2)), node_ids, meta={"kind": "complete", "n": n})


def barabasi_albert(n: int, m0: int, m: int, rng: np.random.Generator, node_ids=None) -> Graph:
    """Barabasi-Albert preferential attachment.

    Nodes ``0..m0-1`` form a clique; each later node links to ``m`` distinct
    existing nodes chosen with probability proportional to current degree.
    Edge count is ``C(m0, 2) + (n - m0) * m``.
    """
    if not n >= m0 >= m >= 1:
        raise ValueError(f"barabasi_albert needs n >= m0 >= m >= 1, got n={n}, m0={m0}, m={m}")
    edges = list(combinations(range(m0), 2))
    # one entry per edge endpoint: uniform draws from it are degree-proportional
    ends = np.empty(2 * (len(edges) + (n - m0) * m), dtype=np.int64)
    n_ends = 0
    for a, b in edges:
        ends[n_ends] = a
        ends[n_ends + 1] = b
        n_ends += 2
    # a lone seed node has degree 0, so the first newcomer must attach to it
    bootstrap = m0 == 1
    buf = rng.random(4096)
    pos = 0
    for v in range(m0, n):
        targets: list[int] = []
        if bootstrap and v == m0:
            targets = [0]
        while len(targets) < m:
            if pos == buf.size:
                buf = rng.random(4096)
                pos = 0
            t = int(ends[int(buf[pos] * n_ends)])
            pos += 1
            if t not in targets:
                targets.append(t)
        for t in targets:
            edges.append((t, v))
            ends[n_ends] = t
            ends[n_ends + 1] = v
            n_ends += 2
    return Graph.from_edges(
        n, edges if edges else np.empty((0, 2)), node_ids, meta={"kind": "barabasi_albert", "n": n, "m0": m0, "m": m}
    )


def build_neighbour_networks(
    groups: Sequence[Sequence[int]], m0: int, m: int, rng: np.random.Generator
) -> list[Graph]:
    """One Barabasi-Albert graph per neighbourhood over its resident agent ids.

    Groups smaller than ``m0`` get a complete graph. Graphs are generated in
    group order from the single stream ``rng``.
    """
    out = []
    for g, members in enumerate(groups):
        members = np.asarray(members, dtype=np.int64)
        if members.size == 0:
            raise ValueError(f"neighbourhood {g} has no residents")
        if members.size < m0:
            out.append(complete_graph(members.size, node_ids=members))
        else:
            out.append(barabasi_albert(members.size, m0, m, rng, node_ids=members))
    return out


def union_graph(graphs: Sequence[Graph], n: int) -> Graph:
    """Combine graphs whose ``node_ids`` are disjoint subsets of ``0..n-1``."""
    parts = []
    for g in graphs:
        e = g.edges()
        ids = g.node_ids if g.node_ids is not None else np.arange(g.n)
        parts.append(ids[e])
    edges = np.concatenate(parts) if parts else np.empty((0, 2), dtype=np.int64)
    return Graph.from_edges(n, edges, meta={"kind": "union", "parts": len(graphs)})


def _clustering(g: Graph) -> np.ndarray:
    a = g.to_sparse()
    tri = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel()
    deg = g.degree().astype(float)
    denom = deg * (deg - 1)
    return np.divide(tri, denom, out=np.zeros_like(tri), where=denom > 0)


def graph_stats(g: Graph, n_sources: int = 100, seed: int = 0) -> dict:
    """Degree histogram, mean local clustering and sampled mean path length.

    Path length averages BFS distances from up to ``n_sources`` sources
    (chosen with a fixed ``seed``) to every reachable node; it is ``inf``
    when no pair is connected.
    """
    from .rng import derive_rng_stream

    deg = g.degree()
    hist = np.bincount(deg) if g.n else np.zeros(0, dtype=np.int64)
    clustering = float(_clustering(g).mean()) if g.n else 0.0
    if g.n == 0:
        path = float("inf")
    else:
        if g.n <= n_sources:
            sources = np.arange(g.n)
        else:
            sources = np.sort(derive_rng_stream(seed, "graph_stats", 0).choice(g.n, n_sources, replace=False))
        d = shortest_path(g.to_sparse(), unweighted=True, directed=False, indices=sources)
        mask = np.isfinite(d) & (d > 0)
        path = float(d[mask].mean()) if mask.any() else float("inf")
    return {"degree_histogram": hist, "mean_clustering": clustering, "mean_path_length": path}


def write_edge_list(g: Graph, path: str | Path, header: dict | None = None) -> None:
    """Edge list with ``#``-prefixed ``key=value`` header lines then ``i j`` rows."""
    meta = {"n": g.n, **g.meta, **(header or {})}
    lines = [f"# {k}={v}" for k, v in meta.items()]
    e = g.edges()
    ids = g.node_ids if g.node_ids is not None else None
    if ids is not None:
        e = ids[e]
    lines += [f"{a} {b}" for a, b in e]
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path: str | Path) -> Graph:
    meta = {}
    edges = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key] = value
        elif line.strip():
            a, b = line.split()
            edges.append((int(a), int(b)))
    if "n" not in meta:
        raise ValueError(f"{path}: missing 'n' header")
    n = int(meta["n"])
    return Graph.from_edges(n, np.array(edges, dtype=np.int64).reshape(-1, 2), meta=meta)
