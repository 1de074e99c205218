"""Time the compiled and pure-Python kernels on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 3] [--scale 1.0]

Prints one row per kernel with the best-of-N wall time for each backend and
the speedup. Inputs are synthetic and seeded, so runs are comparable.
"""

import argparse
import time

import numpy as np

from readnet import kernels
from readnet.graph import Graph


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def paper_lists(rng, n_papers, n_cats):
    p = 1 / np.arange(1, n_cats + 1) ** 0.8
    p /= p.sum()
    ks = rng.geometric(0.3, size=n_papers).clip(1, 30)
    draws = rng.choice(n_cats, size=int(ks.sum()), p=p)
    offsets, cats, o = [0], [], 0
    for k in ks.tolist():
        cats.extend(sorted(set(draws[o:o + k].tolist())))
        o += k
        offsets.append(len(cats))
    return np.asarray(offsets, dtype=np.int64), np.asarray(cats, dtype=np.int32)


def sparse_graph(rng, n, avg_degree):
    g = Graph()
    for i in range(n):
        g.add_vertex(str(i))
    for k in range(1, n):
        g.add_edge_idx(k, int(rng.integers(0, k)), 1.0)
    extra = int(n * avg_degree / 2) - (n - 1)
    for i, j in rng.integers(0, n, size=(max(extra, 0), 2)).tolist():
        g.add_edge_idx(i, j, float(rng.integers(1, 4)))
    return g


def louvain_inputs(g):
    c = g.csr()
    k = np.zeros(g.n)
    np.add.at(k, np.repeat(np.arange(g.n), np.diff(c.indptr)), c.weights)
    k += 2 * c.loops
    return c, k, float(k.sum() / 2)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=float, default=1.0, help="multiply input sizes")
    args = ap.parse_args(argv)

    impls = kernels.backends()
    if "cython" not in impls:
        print("compiled extension not built; timing the Python backend only")
    rng = np.random.default_rng(2012)
    offsets, cats = paper_lists(rng, int(200_000 * args.scale), 465)
    g_dist = sparse_graph(rng, int(2_000 * args.scale), 8)
    g_louv = sparse_graph(rng, int(20_000 * args.scale), 10)
    cd = g_dist.csr()
    cl, k, m = louvain_inputs(g_louv)
    order = rng.permutation(g_louv.n).astype(np.int64)

    cases = {
        f"cooccurrence ({len(offsets) - 1} papers, 465 categories)":
            lambda impl: impl.cooccurrence(offsets, cats, 465),
        f"distance_histogram (n={g_dist.n}, m={g_dist.m})":
            lambda impl: impl.distance_histogram(cd.indptr, cd.indices),
        f"louvain_move (n={g_louv.n}, m={g_louv.m})":
            lambda impl: impl.louvain_move(cl.indptr, cl.indices, cl.weights, k,
                                           np.arange(g_louv.n, dtype=np.int64), k.copy(),
                                           order, m, 1.0, 1e-9),
    }
    names = sorted(impls)
    print(f"{'kernel':<50}" + "".join(f"{n:>12}" for n in names) + (f"{'speedup':>10}" if len(names) > 1 else ""))
    for label, fn in cases.items():
        t = {n: best_of(args.repeat, lambda: fn(impls[n])) for n in names}
        row = f"{label:<50}" + "".join(f"{t[n]:>11.3f}s" for n in names)
        if len(names) > 1:
            row += f"{t['python'] / t['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
