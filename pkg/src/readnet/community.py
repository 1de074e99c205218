"""Louvain community detection (local moving plus aggregation)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from . import kernels
from .graph import Graph, Partition, community_sizes  # noqa: F401  (re-export)
from .netstats import modularity


@dataclass(frozen=True)
class LouvainConfig:
    seed: int = 0
    min_gain: float = 1e-9
    max_levels: int = 32
    resolution: float = 1.0

    def __post_init__(self):
        if not self.min_gain > 0:
            raise ValueError("min_gain must be positive")
        if self.max_levels < 1:
            raise ValueError("max_levels must be >= 1")
        if not self.resolution > 0:
            raise ValueError("resolution must be positive")


def _aggregate(indptr, indices, weights, loops, comm, n_comm):
    """Collapse communities into super-vertices.

    Weights between communities are summed; the weight inside a community
    (edges once, plus loops) becomes the super-vertex's self-loop.
    """
    n = len(indptr) - 1
    src = comm[np.repeat(np.arange(n), np.diff(indptr))]
    dst = comm[indices]
    inside = src == dst
    new_loops = (np.bincount(src[inside], weights=weights[inside], minlength=n_comm) / 2
                 + np.bincount(comm, weights=loops, minlength=n_comm))
    out = ~inside
    a = sparse.coo_matrix((weights[out], (src[out], dst[out])), shape=(n_comm, n_comm)).tocsr()
    a.sum_duplicates()
    a.sort_indices()
    return (a.indptr.astype(np.int64), a.indices.astype(np.int32),
            a.data.astype(np.float64), new_loops)


def louvain(g: Graph, cfg: LouvainConfig | None = None, *, backend=None) -> Partition:
    """Partition ``g`` by greedy modularity maximization.

    Each level starts every (super-)vertex in its own community and visits
    vertices in an order shuffled by ``cfg.seed``, moving each to the
    neighbouring community with the largest modularity gain (ties go to the
    lowest community id) while some move gains more than ``cfg.min_gain``.
    Communities are then collapsed into super-vertices and the process
    repeats until a level changes nothing or ``cfg.max_levels`` is reached.

    Community ids of the result are numbered by their lowest vertex index.
    The reported ``q`` is recomputed from scratch with
    :func:`readnet.netstats.modularity`.
    """
    cfg = cfg or LouvainConfig()
    impl = backend or kernels
    if g.n == 0:
        raise ValueError("cannot partition an empty graph")
    c = g.csr()
    indptr, indices, weights, loops = c.indptr, c.indices, c.weights, c.loops
    total = weights.sum() / 2 + loops.sum()
    membership = np.arange(g.n, dtype=np.int64)
    level_q = []
    if total > 0:
        rng = np.random.default_rng(cfg.seed & 0xFFFFFFFFFFFFFFFF)
        for _ in range(cfg.max_levels):
            n = len(indptr) - 1
            strength = np.bincount(np.repeat(np.arange(n), np.diff(indptr)),
                                   weights=weights, minlength=n) + 2 * loops
            comm = np.arange(n, dtype=np.int64)
            tot = strength.astype(np.float64).copy()
            order = rng.permutation(n).astype(np.int64)
            moves = impl.louvain_move(indptr, indices, weights, strength, comm, tot, order,
                                      float(total), float(cfg.resolution), float(cfg.min_gain))
            if moves == 0:
                break
            _, comm = np.unique(comm, return_inverse=True)
            comm = comm.astype(np.int64)
            n_comm = int(comm.max()) + 1
            membership = comm[membership]
            level_q.append(modularity(g, membership, cfg.resolution))
            if n_comm == n:
                break
            indptr, indices, weights, loops = _aggregate(indptr, indices, weights, loops, comm, n_comm)
    community = Partition.normalize(membership.tolist())
    return Partition(community, modularity(g, community), tuple(level_q))


def write_partition(g: Graph, p: Partition) -> str:
    """Two-column text: label, community id (tab separated)."""
    return "".join(f"{label}\t{c}\n" for label, c in zip(g.labels, p.community))


def read_partition(text: str, g: Graph) -> Partition:
    """Parse :func:`write_partition` output against the vertices of ``g``."""
    by_label = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        label, sep, cid = line.rpartition("\t")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'label<TAB>community'")
        try:
            by_label[label] = int(cid)
        except ValueError:
            raise ValueError(f"line {lineno}: community id {cid!r} is not an integer") from None
    missing = [label for label in g.labels if label not in by_label]
    if missing:
        raise ValueError(f"partition does not cover vertices: {', '.join(missing[:5])}")
    extra = set(by_label) - set(g.labels)
    if extra:
        raise ValueError(f"partition names unknown vertices: {', '.join(sorted(extra)[:5])}")
    raw = [by_label[label] for label in g.labels]
    ids = sorted(set(raw))
    remap = {c: i for i, c in enumerate(ids)}
    community = tuple(remap[c] for c in raw)
    return Partition(community, modularity(g, community))
