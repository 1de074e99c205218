# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. Must stay arithmetic-for-arithmetic identical to _pykernels."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def cooccurrence(const cnp.int64_t[:] offsets, const cnp.int32_t[:] cats, Py_ssize_t n_cats):
    """Symmetric count of papers per category pair; zero diagonal."""
    cdef Py_ssize_t p, a, b, start, end, x, y
    cdef Py_ssize_t n_papers = offsets.shape[0] - 1
    out = np.zeros((n_cats, n_cats), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] c = out
    with nogil:
        for p in range(n_papers):
            start = offsets[p]
            end = offsets[p + 1]
            for a in range(start, end):
                x = cats[a]
                for b in range(a + 1, end):
                    y = cats[b]
                    c[x, y] += 1
                    c[y, x] += 1
    return out


cdef void _bfs(Py_ssize_t s, const cnp.int64_t[:] indptr, const cnp.int32_t[:] indices,
               cnp.int32_t[::1] dist, cnp.int32_t[::1] queue) noexcept nogil:
    cdef Py_ssize_t head = 0, tail = 1, u, e, v
    queue[0] = <cnp.int32_t>s
    dist[s] = 0
    while head < tail:
        u = queue[head]
        head += 1
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue[tail] = <cnp.int32_t>v
                tail += 1


def bfs_distances(const cnp.int64_t[:] indptr, const cnp.int32_t[:] indices):
    """All-pairs hop distances; -1 marks unreachable pairs."""
    cdef Py_ssize_t n = indptr.shape[0] - 1, s
    out = np.full((n, n), -1, dtype=np.int32)
    cdef cnp.int32_t[:, ::1] d = out
    queue = np.empty(max(n, 1), dtype=np.int32)
    cdef cnp.int32_t[::1] q = queue
    with nogil:
        for s in range(n):
            _bfs(s, indptr, indices, d[s], q)
    return out


def distance_histogram(const cnp.int64_t[:] indptr, const cnp.int32_t[:] indices):
    """Histogram of hop distances over unordered pairs s < t.

    Returns ``(hist, n_unreachable)`` where ``hist[d]`` counts pairs at
    distance ``d``.
    """
    cdef Py_ssize_t n = indptr.shape[0] - 1, s, t, i
    hist = np.zeros(max(n, 1), dtype=np.int64)
    cdef cnp.int64_t[::1] h = hist
    cdef cnp.int64_t unreachable = 0
    dist = np.empty(max(n, 1), dtype=np.int32)
    queue = np.empty(max(n, 1), dtype=np.int32)
    cdef cnp.int32_t[::1] dv = dist
    cdef cnp.int32_t[::1] q = queue
    with nogil:
        for s in range(n):
            for i in range(n):
                dv[i] = -1
            _bfs(s, indptr, indices, dv, q)
            for t in range(s + 1, n):
                if dv[t] < 0:
                    unreachable += 1
                else:
                    h[dv[t]] += 1
    return hist, unreachable


def louvain_move(const cnp.int64_t[:] indptr, const cnp.int32_t[:] indices, const double[:] weights,
                 const double[:] k, cnp.int64_t[::1] community, double[::1] tot,
                 const cnp.int64_t[:] order, double m, double resolution, double min_gain,
                 cnp.int64_t max_sweeps=100000):
    """Local-moving phase: sweep vertices in ``order`` until no move gains > min_gain.

    ``community`` and ``tot`` are updated in place; returns the number of moves.
    """
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t i, idx, e, j, c, ci, best_c, n_neigh, t
    cdef cnp.int64_t moves = 0, sweep_moves, sweeps = 0
    cdef double ki, wc, g, gain_own, best_gain
    cdef double denom = 2.0 * m * m
    neigh_w_arr = np.zeros(max(n, 1), dtype=np.float64)
    neigh_list_arr = np.empty(max(n, 1), dtype=np.int64)
    stamp_arr = np.full(max(n, 1), -1, dtype=np.int64)
    cdef double[::1] neigh_w = neigh_w_arr
    cdef cnp.int64_t[::1] neigh_list = neigh_list_arr
    cdef cnp.int64_t[::1] stamp = stamp_arr
    cdef cnp.int64_t tick = 0
    with nogil:
        while sweeps < max_sweeps:
            sweeps += 1
            sweep_moves = 0
            for idx in range(n):
                i = order[idx]
                ci = community[i]
                ki = k[i]
                tick += 1
                n_neigh = 0
                for e in range(indptr[i], indptr[i + 1]):
                    j = indices[e]
                    c = community[j]
                    if stamp[c] != tick:
                        stamp[c] = tick
                        neigh_w[c] = 0.0
                        neigh_list[n_neigh] = c
                        n_neigh += 1
                    neigh_w[c] += weights[e]
                tot[ci] -= ki
                wc = neigh_w[ci] if stamp[ci] == tick else 0.0
                gain_own = wc / m - resolution * tot[ci] * ki / denom
                best_c = ci
                best_gain = gain_own
                for t in range(n_neigh):
                    c = neigh_list[t]
                    if c == ci:
                        continue
                    g = neigh_w[c] / m - resolution * tot[c] * ki / denom
                    if g > best_gain or (g == best_gain and c < best_c):
                        best_gain = g
                        best_c = c
                if best_c != ci and best_gain - gain_own > min_gain:
                    community[i] = best_c
                    tot[best_c] += ki
                    sweep_moves += 1
                else:
                    tot[ci] += ki
            moves += sweep_moves
            if sweep_moves == 0:
                break
    return moves
