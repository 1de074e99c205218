"""Pure Python / numpy versions of the compiled kernels in ``_kernels.pyx``.

``louvain_move`` performs the same floating point operations in the same
order as the compiled version, so both backends yield identical partitions.
"""

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

# sources per shortest-path batch; bounds the dense block to BLOCK * n entries
BLOCK = 256


def cooccurrence(offsets, cats, n_cats):
    offsets = np.asarray(offsets, dtype=np.int64)
    cats = np.asarray(cats, dtype=np.int32)
    n_papers = len(offsets) - 1
    rows = np.repeat(np.arange(n_papers), np.diff(offsets))
    inc = sparse.csr_matrix((np.ones(len(cats), dtype=np.int64), (rows, cats)),
                            shape=(n_papers, n_cats))
    out = (inc.T @ inc).toarray().astype(np.int64)
    np.fill_diagonal(out, 0)
    return out


def _adjacency(indptr, indices):
    n = len(indptr) - 1
    data = np.ones(len(indices), dtype=np.float64)
    return sparse.csr_matrix((data, np.asarray(indices), np.asarray(indptr)), shape=(n, n))


def _distance_blocks(indptr, indices):
    n = len(indptr) - 1
    adj = _adjacency(indptr, indices)
    for start in range(0, n, BLOCK):
        src = np.arange(start, min(start + BLOCK, n))
        d = csgraph.shortest_path(adj, method="D", directed=False, unweighted=True, indices=src)
        yield src, d


def bfs_distances(indptr, indices):
    n = len(indptr) - 1
    out = np.full((n, n), -1, dtype=np.int32)
    for src, d in _distance_blocks(indptr, indices):
        finite = np.isfinite(d)
        block = np.full(d.shape, -1, dtype=np.int32)
        block[finite] = d[finite].astype(np.int32)
        out[src] = block
    return out


def distance_histogram(indptr, indices):
    n = len(indptr) - 1
    hist = np.zeros(max(n, 1), dtype=np.int64)
    unreachable = 0
    for src, d in _distance_blocks(indptr, indices):
        upper = np.arange(n)[None, :] > src[:, None]
        vals = d[upper]
        finite = np.isfinite(vals)
        unreachable += int((~finite).sum())
        hist += np.bincount(vals[finite].astype(np.int64), minlength=len(hist))[:len(hist)]
    return hist, unreachable


def louvain_move(indptr, indices, weights, k, community, tot, order, m, resolution,
                 min_gain, max_sweeps=100000):
    indptr = indptr.tolist()
    indices = indices.tolist()
    weights = weights.tolist()
    k = k.tolist()
    order = order.tolist()
    comm = community.tolist()
    tots = tot.tolist()
    m = float(m)
    denom = 2.0 * m * m
    neigh_w = {}
    moves = 0
    for _ in range(max_sweeps):
        sweep_moves = 0
        for i in order:
            ci = comm[i]
            ki = k[i]
            neigh_w.clear()
            for e in range(indptr[i], indptr[i + 1]):
                c = comm[indices[e]]
                neigh_w[c] = neigh_w.get(c, 0.0) + weights[e]
            tots[ci] -= ki
            wc = neigh_w.get(ci, 0.0)
            gain_own = wc / m - resolution * tots[ci] * ki / denom
            best_c = ci
            best_gain = gain_own
            for c, w in neigh_w.items():
                if c == ci:
                    continue
                g = w / m - resolution * tots[c] * ki / denom
                if g > best_gain or (g == best_gain and c < best_c):
                    best_gain = g
                    best_c = c
            if best_c != ci and best_gain - gain_own > min_gain:
                comm[i] = best_c
                tots[best_c] += ki
                sweep_moves += 1
            else:
                tots[ci] += ki
        moves += sweep_moves
        if sweep_moves == 0:
            break
    community[:] = comm
    tot[:] = tots
    return moves
