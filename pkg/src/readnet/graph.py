"""Undirected weighted graphs with labelled vertices and optional self-loops."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np


class CSR(NamedTuple):
    """Compressed adjacency without self-loops; loop weights kept separately."""

    indptr: np.ndarray   # int64, n + 1
    indices: np.ndarray  # int32
    weights: np.ndarray  # float64
    loops: np.ndarray    # float64, n

    @property
    def n(self) -> int:
        return len(self.indptr) - 1


class Graph:
    """Undirected graph with at most one edge per vertex pair.

    Vertices are dense indices ``0..n-1`` carrying a unique label and a size
    (the number of readers behind the category). Adding an edge that already
    exists adds to its weight.
    """

    def __init__(self):
        self.labels: list[str] = []
        self.sizes: list[float] = []
        self._index: dict[str, int] = {}
        self._adj: list[dict[int, float]] = []
        self._csr: CSR | None = None

    # -- construction -----------------------------------------------------

    def add_vertex(self, label: str, size: float = 0) -> int:
        i = self._index.get(label)
        if i is not None:
            return i
        i = len(self.labels)
        self._index[label] = i
        self.labels.append(label)
        self.sizes.append(size)
        self._adj.append({})
        self._csr = None
        return i

    def add_edge(self, u: str, v: str, w: float = 1) -> None:
        """Add ``w`` to the weight of edge (u, v), creating vertices as needed."""
        if not w > 0:
            raise ValueError(f"edge weight must be positive, got {w!r}")
        self.add_edge_idx(self.add_vertex(u), self.add_vertex(v), w)

    def add_edge_idx(self, i: int, j: int, w: float = 1) -> None:
        if not w > 0:
            raise ValueError(f"edge weight must be positive, got {w!r}")
        adj = self._adj
        adj[i][j] = adj[i].get(j, 0) + w
        if i != j:
            adj[j][i] = adj[j].get(i, 0) + w
        self._csr = None

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str, float]], labels: Iterable[str] = ()) -> "Graph":
        g = cls()
        for label in labels:
            g.add_vertex(label)
        for u, v, w in edges:
            g.add_edge(u, v, w)
        return g

    @classmethod
    def from_matrix(cls, labels, counts, sizes=None) -> "Graph":
        """Build from a symmetric weight matrix; the diagonal holds loop weights."""
        g = cls()
        counts = np.asarray(counts)
        for k, label in enumerate(labels):
            g.add_vertex(label, 0 if sizes is None else sizes[k])
        rows, cols = np.nonzero(np.triu(counts))
        py = counts.dtype.kind in "iu"
        for i, j in zip(rows.tolist(), cols.tolist()):
            w = counts[i, j]
            g.add_edge_idx(i, j, int(w) if py else float(w))
        return g

    # -- queries ----------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        """Number of edges, self-loops included."""
        return sum(len(a) + (i in a) for i, a in enumerate(self._adj)) // 2

    @property
    def n_loops(self) -> int:
        return sum(i in a for i, a in enumerate(self._adj))

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown vertex {label!r}") from None

    def __contains__(self, label) -> bool:
        return label in self._index

    def neighbors(self, i: int) -> dict[int, float]:
        return self._adj[i]

    def weight(self, u: str, v: str) -> float:
        return self._adj[self.index(u)].get(self.index(v), 0)

    def edges(self):
        """Yield ``(i, j, w)`` with ``i <= j``, sorted."""
        for i, a in enumerate(self._adj):
            for j in sorted(k for k in a if k >= i):
                yield i, j, a[j]

    def total_weight(self) -> float:
        return sum(w for _, _, w in self.edges())

    def degree(self, label: str) -> int:
        """Number of incident edges; a self-loop counts once."""
        return len(self._adj[self.index(label)])

    def degree_vector(self, loops: bool = True) -> np.ndarray:
        deg = np.fromiter((len(a) for a in self._adj), dtype=np.int64, count=self.n)
        if not loops:
            deg -= np.fromiter((i in a for i, a in enumerate(self._adj)), dtype=np.int64, count=self.n)
        return deg

    def strength(self, label: str) -> float:
        """Sum of incident weights; a self-loop counts once."""
        return sum(self._adj[self.index(label)].values())

    def csr(self) -> CSR:
        if self._csr is None:
            n = self.n
            indptr = np.zeros(n + 1, dtype=np.int64)
            indices, weights = [], []
            loops = np.zeros(n, dtype=np.float64)
            for i, a in enumerate(self._adj):
                for j in sorted(a):
                    if j == i:
                        loops[i] = a[j]
                    else:
                        indices.append(j)
                        weights.append(a[j])
                indptr[i + 1] = len(indices)
            self._csr = CSR(indptr, np.asarray(indices, dtype=np.int32),
                            np.asarray(weights, dtype=np.float64), loops)
        return self._csr

    def subgraph(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph; kept vertices retain their relative order."""
        keep = sorted(set(vertices))
        remap = {old: new for new, old in enumerate(keep)}
        g = Graph()
        for old in keep:
            g.add_vertex(self.labels[old], self.sizes[old])
        for old in keep:
            i = remap[old]
            for k, w in self._adj[old].items():
                j = remap.get(k)
                if j is not None and j >= i:
                    g.add_edge_idx(i, j, w)
        return g

    def components(self) -> list[list[int]]:
        """Connected components, each sorted, ordered by smallest member."""
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in self._adj[u]:
                    if not seen[v]:
                        seen[v] = True
                        comp.append(v)
                        queue.append(v)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n > 0 and len(self.components()) == 1

    # -- comparison -------------------------------------------------------

    def edge_dict(self) -> dict[frozenset, float]:
        lab = self.labels
        return {frozenset((lab[i], lab[j])): w for i, j, w in self.edges()}

    def __eq__(self, other):
        # labels, not indices, are the identity of a vertex
        if not isinstance(other, Graph):
            return NotImplemented
        return (dict(zip(self.labels, self.sizes)) == dict(zip(other.labels, other.sizes))
                and self.edge_dict() == other.edge_dict())

    __hash__ = None

    def __repr__(self):
        return f"<Graph n={self.n} m={self.m} loops={self.n_loops}>"


def largest_component(g: Graph) -> tuple[Graph, list[str]]:
    """Induced subgraph on the largest connected component.

    Ties go to the component holding the smallest vertex index. Returns the
    subgraph and the labels of the dropped vertices in label order.
    """
    if g.n == 0:
        return Graph(), []
    comps = g.components()
    best = max(comps, key=len)  # first maximum = smallest minimum index
    kept = set(best)
    dropped = sorted(g.labels[i] for i in range(g.n) if i not in kept)
    return g.subgraph(best), dropped


@dataclass(frozen=True)
class Partition:
    """Community id per vertex (0-based, contiguous) and the modularity Q."""

    community: tuple[int, ...]
    q: float = 0.0
    level_q: tuple[float, ...] = field(default=(), compare=False)

    def __post_init__(self):
        ids = set(self.community)
        if ids and ids != set(range(len(ids))):
            raise ValueError("community ids must be contiguous from 0")

    def __len__(self):
        return len(self.community)

    @property
    def n_communities(self) -> int:
        return len(set(self.community))

    @staticmethod
    def normalize(membership) -> tuple[int, ...]:
        """Relabel ids contiguously in order of first appearance."""
        remap: dict[int, int] = {}
        return tuple(remap.setdefault(c, len(remap)) for c in membership)


def community_sizes(p: Partition) -> list[int]:
    """Community sizes, largest first; ties ordered by community id."""
    counts = [0] * p.n_communities
    for c in p.community:
        counts[c] += 1
    return [counts[c] for c in sorted(range(len(counts)), key=lambda c: (-counts[c], c))]
