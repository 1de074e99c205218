"""Bookmark coupling: category co-occurrence networks from readership records.

Every paper is one co-bookmarking event for each pair of categories present
among its readers. Reader magnitudes beyond the presence threshold do not
scale the edge weight.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph import Graph
from .model import DIMENSIONS, Dataset


@dataclass(frozen=True)
class CouplingOptions:
    dimension: str = "discipline"
    # same-category readers on one paper needed for a self-loop event
    loop_min_readers: int = 2
    # readers needed for a category to count as present on a paper
    min_count_threshold: int = 1

    def __post_init__(self):
        if self.dimension not in DIMENSIONS:
            raise ValueError(f"unknown dimension {self.dimension!r}")
        if self.loop_min_readers < 2:
            raise ValueError("loop_min_readers must be >= 2")
        if self.min_count_threshold < 1:
            raise ValueError("min_count_threshold must be >= 1")


def incidence(ds: Dataset, opts: CouplingOptions):
    """Flatten one dimension of ``ds`` into index arrays.

    Returns ``(labels, offsets, present, looped, sizes)`` where
    ``present[offsets[p]:offsets[p+1]]`` are the category indices present on
    paper ``p``, ``looped`` lists categories passing the loop threshold (one
    entry per paper) and ``sizes`` is the total reader count per category.
    """
    dim = opts.dimension
    labels = ds.dimension_registry.get(dim, ())
    index = {label: i for i, label in enumerate(labels)}
    min_count = opts.min_count_threshold
    loop_min = max(opts.loop_min_readers, min_count)
    sizes = [0] * len(labels)
    offsets = [0]
    present: list[int] = []
    looped: list[int] = []
    for rec in ds.records:
        cats = rec.counts.get(dim)
        if cats:
            for label, n in cats.items():
                i = index[label]
                sizes[i] += n
                if n >= min_count:
                    present.append(i)
                    if n >= loop_min:
                        looped.append(i)
        offsets.append(len(present))
    return (labels, np.asarray(offsets, dtype=np.int64), np.asarray(present, dtype=np.int32),
            np.asarray(looped, dtype=np.int64), np.asarray(sizes, dtype=np.int64))


def build_coupling(ds: Dataset, opts: CouplingOptions | None = None) -> Graph:
    """Bookmark-coupling graph of one dimension.

    Vertices are the categories present (at ``min_count_threshold``) on at
    least one paper, ordered by label. Edge (a, b) counts the papers on which
    both a and b are present; the loop (c, c) counts papers with at least
    ``loop_min_readers`` readers in c. Vertex size is the total number of
    readers of the category over all papers.
    """
    opts = opts or CouplingOptions()
    if not any(opts.dimension in rec.counts for rec in ds.records):
        raise ValueError(f"dimension {opts.dimension!r} is absent from every record")
    labels, offsets, present, looped, sizes = incidence(ds, opts)
    n_cats = len(labels)
    counts = kernels.cooccurrence(offsets, present, n_cats)
    counts[np.diag_indices(n_cats)] = np.bincount(looped, minlength=n_cats)

    seen = np.bincount(present, minlength=n_cats) > 0
    keep = sorted(np.flatnonzero(seen).tolist(), key=lambda i: labels[i])
    keep = np.asarray(keep, dtype=np.int64)
    sub = counts[np.ix_(keep, keep)]
    return Graph.from_matrix([labels[i] for i in keep], sub, [int(sizes[i]) for i in keep])


def coupling_report(g: Graph, top_k: int = 10) -> str:
    """Short text summary: counts, then the ``top_k`` largest categories."""
    loops = g.n_loops
    head = f"{g.n} vertices, {g.m - loops} edges"
    if loops:
        head += f", {loops} self-loops"
    order = sorted(range(g.n), key=lambda i: (-g.sizes[i], g.labels[i]))[:top_k]
    lines = [head]
    for i in order:
        lines.append(f"  {g.labels[i]}\t{g.sizes[i]}\tdegree {len(g.neighbors(i))}")
    return "\n".join(lines)
