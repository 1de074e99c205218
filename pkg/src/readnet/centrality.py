"""Eigenvector centrality by power iteration, and Spearman rank correlation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .graph import Graph


@dataclass(frozen=True)
class CentralityResult:
    scores: np.ndarray  # unit Euclidean norm, non-negative
    iterations: int
    converged: bool


def adjacency_matrix(g: Graph, weighted: bool = True) -> sparse.csr_matrix:
    """Symmetric adjacency with a loop of weight w stored as 2w on the diagonal."""
    c = g.csr()
    w = c.weights if weighted else np.ones(len(c.indices))
    a = sparse.csr_matrix((w, c.indices, c.indptr), shape=(g.n, g.n))
    loops = 2 * c.loops if weighted else 2.0 * (c.loops > 0)
    return (a + sparse.diags(loops)).tocsr()


def eigenvector_centrality(g: Graph, weighted: bool = True, tol: float = 1e-10,
                           max_iter: int = 10000) -> CentralityResult:
    """Leading eigenvector of the adjacency matrix, by power iteration.

    Starts from the uniform vector and renormalizes to unit length every
    step. Each new iterate is averaged with the previous one, which leaves
    the fixed point unchanged but stops the sign oscillation of bipartite
    graphs. Convergence is declared when successive iterates differ by less
    than ``tol`` in every entry.
    """
    if g.n == 0 or g.m == 0:
        raise ValueError("eigenvector centrality needs at least one edge")
    if not g.is_connected():
        raise ValueError("graph is disconnected; extract the largest component first")
    a = adjacency_matrix(g, weighted)
    x = np.full(g.n, 1 / math.sqrt(g.n))
    for it in range(1, max_iter + 1):
        y = a @ x
        y /= np.linalg.norm(y)
        y += x
        y /= np.linalg.norm(y)
        if np.abs(y - x).max() < tol:
            return CentralityResult(y, it, True)
        x = y
    return CentralityResult(x, max_iter, False)


def rank_average(x) -> np.ndarray:
    """1-based ranks; tied values share the mean of their positions."""
    x = np.asarray(x, dtype=np.float64)
    order = np.argsort(x, kind="mergesort")
    sorted_x = x[order]
    ranks = np.empty(len(x), dtype=np.float64)
    start = 0
    n = len(x)
    while start < n:
        end = start + 1
        while end < n and sorted_x[end] == sorted_x[start]:
            end += 1
        ranks[order[start:end]] = (start + end + 1) / 2
        start = end
    return ranks


def spearman(x, y) -> float:
    """Spearman rank correlation with average ranks for ties."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d vectors of equal length")
    if len(x) < 3:
        raise ValueError("need at least 3 observations")
    rx = rank_average(x)
    ry = rank_average(y)
    rx -= rx.mean()
    ry -= ry.mean()
    sx = math.sqrt(float(rx @ rx))
    sy = math.sqrt(float(ry @ ry))
    if sx == 0 or sy == 0:
        raise ValueError("correlation undefined for a constant vector")
    return max(-1.0, min(1.0, float(rx @ ry) / (sx * sy)))


def centrality_table(g: Graph, result: CentralityResult) -> str:
    """Rows ``label<TAB>score<TAB>size``, highest score first (ties by label)."""
    order = sorted(range(g.n), key=lambda i: (-result.scores[i], g.labels[i]))
    return "".join(f"{g.labels[i]}\t{result.scores[i]:.6f}\t{g.sizes[i]}\n" for i in order)
