"""Whole-network statistics: degree, density, closure, distances, modularity."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np
from scipy import sparse

from . import kernels
from .graph import Graph, Partition, largest_component


class StatisticError(ValueError):
    """A statistic is undefined for the given graph."""


def _simple_adjacency(g: Graph) -> sparse.csr_matrix:
    c = g.csr()
    return sparse.csr_matrix((np.ones(len(c.indices)), c.indices, c.indptr), shape=(g.n, g.n))


def average_degree(g: Graph) -> float:
    """Mean degree with each self-loop counted once."""
    if g.n == 0:
        raise StatisticError("average degree of an empty graph")
    return float(g.degree_vector(loops=True).mean())


def density(g: Graph) -> float:
    if g.n < 2:
        raise StatisticError("density needs at least 2 vertices")
    edges = g.m - g.n_loops
    return edges / (g.n * (g.n - 1) / 2)


def degree_centralization(g: Graph) -> float:
    """Freeman degree centralization, self-loops ignored."""
    n = g.n
    if n < 3:
        raise StatisticError("degree centralization needs at least 3 vertices")
    deg = g.degree_vector(loops=False)
    return float((deg.max() - deg).sum()) / ((n - 1) * (n - 2))


def closure(g: Graph) -> float:
    """Global transitivity: 3 x triangles / connected triples (0 without triples)."""
    if g.n < 3:
        raise StatisticError("closure needs at least 3 vertices")
    a = _simple_adjacency(g)
    deg = np.asarray(a.sum(axis=1)).ravel()
    triples = float((deg * (deg - 1)).sum()) / 2
    if triples == 0:
        return 0.0
    closed = float((a @ a).multiply(a).sum()) / 2  # = 3 x triangles
    return closed / triples


def distance_histogram(g: Graph) -> tuple[np.ndarray, int]:
    """Counts of unordered vertex pairs by hop distance, plus unreachable pairs."""
    c = g.csr()
    hist, unreachable = kernels.distance_histogram(c.indptr, c.indices)
    return np.asarray(hist), int(unreachable)


def distance_matrix(g: Graph) -> np.ndarray:
    c = g.csr()
    return np.asarray(kernels.bfs_distances(c.indptr, c.indices))


def distance_stats(g: Graph, hist=None) -> tuple[float, float, int]:
    """Mean, population standard deviation and maximum of geodesic distances.

    Every edge has length 1 and self-loops are ignored. The graph must be
    connected; use :func:`~readnet.graph.largest_component` first.
    """
    if g.n < 2:
        raise StatisticError("distance statistics need at least 2 vertices")
    if hist is None:
        hist, unreachable = distance_histogram(g)
        if unreachable:
            raise StatisticError("graph is disconnected; extract the largest component first")
    d = np.arange(len(hist), dtype=object)
    h = hist.astype(object)
    # exact integer moments
    pairs = int(h.sum())
    s1 = int((d * h).sum())
    s2 = int((d * d * h).sum())
    mean = s1 / pairs
    var = (pairs * s2 - s1 * s1) / (pairs * pairs)
    diameter = int(np.flatnonzero(hist).max())
    return mean, math.sqrt(var), diameter


def compactness(g: Graph, hist=None) -> float:
    """Mean reciprocal distance over vertex pairs; unreachable pairs count 0."""
    if g.n < 2:
        raise StatisticError("compactness needs at least 2 vertices")
    if hist is None:
        hist, _ = distance_histogram(g)
    total = sum(int(c) / d for d, c in enumerate(hist.tolist()) if d and c)
    return total / (g.n * (g.n - 1) / 2)


def modularity(g: Graph, p: Partition | list | tuple, resolution: float = 1.0) -> float:
    """Weighted Newman modularity of a partition.

    Q = sum_c [W_c / W - resolution * (S_c / 2W)^2]. A self-loop of weight w
    adds w to the total W and to its community's internal weight W_c, and
    2w to the strength of its vertex. A graph without edges has Q = 0.
    """
    comm = np.asarray(p.community if isinstance(p, Partition) else p, dtype=np.int64)
    if len(comm) != g.n:
        raise ValueError(f"partition covers {len(comm)} vertices, graph has {g.n}")
    if g.n == 0:
        return 0.0
    c = g.csr()
    n_comm = int(comm.max()) + 1
    src = np.repeat(np.arange(g.n), np.diff(c.indptr))
    total = c.weights.sum() / 2 + c.loops.sum()
    if total == 0:
        return 0.0
    same = comm[src] == comm[c.indices]
    internal = np.bincount(comm[src[same]], weights=c.weights[same], minlength=n_comm) / 2
    internal += np.bincount(comm, weights=c.loops, minlength=n_comm)
    strength = np.bincount(src, weights=c.weights, minlength=g.n) + 2 * c.loops
    s_comm = np.bincount(comm, weights=strength, minlength=n_comm)
    return float((internal / total - resolution * (s_comm / (2 * total)) ** 2).sum())


# Row labels as printed in reports
ROWS = {
    "n_vertices": "Number of vertices",
    "avg_degree": "Average degree",
    "degree_centralization": "Degree centralization",
    "density": "Density",
    "closure": "Closure",
    "avg_distance": "Average distance",
    "std_distance": "Standard deviation of average distance",
    "diameter": "Diameter",
    "compactness": "Compactness",
    "modularity": "Modularity",
}


@dataclass
class StatsReport:
    n_vertices: int
    avg_degree: float
    degree_centralization: float
    density: float
    closure: float
    avg_distance: float
    std_distance: float
    diameter: int
    compactness: float
    modularity: float | None = None

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def render_text(self) -> str:
        width = max(len(v) for v in ROWS.values())
        lines = []
        for key, name in ROWS.items():
            value = getattr(self, key)
            if value is None:
                shown = "n/a"
            elif isinstance(value, int):
                shown = str(value)
            else:
                shown = f"{value:.2f}"
            lines.append(f"{name:<{width}}  {shown:>8}")
        return "\n".join(lines)

    def render_kv(self) -> str:
        return "\n".join(f"{name}={'' if getattr(self, key) is None else repr(getattr(self, key))}"
                         for key, name in ROWS.items())

    @classmethod
    def parse_kv(cls, text: str) -> "StatsReport":
        by_name = {v: k for k, v in ROWS.items()}
        values = {}
        for line in text.splitlines():
            if "=" not in line:
                continue
            name, _, raw = line.partition("=")
            key = by_name.get(name)
            if key is None:
                continue
            if raw == "":
                values[key] = None
            else:
                values[key] = int(raw) if key in ("n_vertices", "diameter") else float(raw)
        return cls(**values)


def full_report(g: Graph, p: Partition | None = None, *, component: bool = True) -> StatsReport:
    """All statistics for ``g``, by default on its largest component.

    When ``p`` is given it must cover ``g`` itself (not the component); the
    modularity is evaluated on the component with the partition restricted
    to it.
    """
    if g.n == 0:
        raise StatisticError("empty graph")
    h = g
    if component:
        h, dropped = largest_component(g)
        if p is not None and dropped:
            keep = {label for label in h.labels}
            comm = [c for label, c in zip(g.labels, p.community) if label in keep]
            p = Partition(Partition.normalize(comm))
    hist, unreachable = distance_histogram(h)
    if unreachable:
        raise StatisticError("graph is disconnected; extract the largest component first")
    if h.n >= 2:
        mean, std, diam = distance_stats(h, hist)
    else:
        mean, std, diam = 0.0, 0.0, 0
    return StatsReport(
        n_vertices=h.n,
        avg_degree=average_degree(h),
        degree_centralization=degree_centralization(h) if h.n >= 3 else 0.0,
        density=density(h) if h.n >= 2 else 0.0,
        closure=closure(h) if h.n >= 3 else 0.0,
        avg_distance=mean,
        std_distance=std,
        diameter=diam,
        compactness=compactness(h, hist) if h.n >= 2 else 0.0,
        modularity=None if p is None else modularity(h, p),
    )
