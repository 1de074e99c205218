"""Synthetic corpus at the scale of a full readership harvest.

Run as a script to generate the corpus in memory, time the coupling build,
and optionally write the corpus as JSON Lines. Prints one JSON object with
the measurements, including the peak resident set size of this process.
"""

import argparse
import json
import resource
import sys
import time

import numpy as np

from readnet.coupling import CouplingOptions, build_coupling
from readnet.model import Dataset, ReaderRecord, build_registry


def synthetic_counts(n_records, n_cats, seed=0):
    """Per-record discipline breakdowns with Zipf-like category popularity.

    Yields ``dict[label, count]``; every category is drawn many times at the
    default scale, so all of them end up as vertices.
    """
    rng = np.random.default_rng(seed)
    labels = [f"Discipline {i:03d}" for i in range(n_cats)]
    p = 1 / np.arange(1, n_cats + 1) ** 0.8
    p /= p.sum()
    ks = rng.geometric(0.3, size=n_records).clip(1, 30)
    cats = rng.choice(n_cats, size=int(ks.sum()), p=p).tolist()
    counts = rng.geometric(0.5, size=len(cats)).tolist()
    o = 0
    for k in ks.tolist():
        d = {}
        for c, n in zip(cats[o:o + k], counts[o:o + k]):
            d[labels[c]] = d.get(labels[c], 0) + n
        o += k
        yield d


def synthetic_dataset(n_records, n_cats, seed=0):
    recs = tuple(ReaderRecord(f"10.9999/syn.{i}", "article", {"discipline": d})
                 for i, d in enumerate(synthetic_counts(n_records, n_cats, seed)))
    return Dataset(recs, build_registry(recs))


def write_jsonl(path, n_records, n_cats, seed=0):
    with open(path, "w", encoding="utf-8") as fh:
        for i, d in enumerate(synthetic_counts(n_records, n_cats, seed)):
            fh.write(json.dumps({"doi": f"10.9999/syn.{i}", "type": "article",
                                 "readers": {"discipline": d}}, separators=(",", ":")))
            fh.write("\n")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--records", type=int, default=1_100_000)
    ap.add_argument("--categories", type=int, default=465)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jsonl", help="also write the corpus here")
    args = ap.parse_args(argv)

    t0 = time.perf_counter()
    ds = synthetic_dataset(args.records, args.categories, args.seed)
    t1 = time.perf_counter()
    g = build_coupling(ds, CouplingOptions("discipline"))
    t2 = time.perf_counter()
    peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024  # kB on Linux
    if args.jsonl:
        del ds
        write_jsonl(args.jsonl, args.records, args.categories, args.seed)
    json.dump({"records": args.records, "vertices": g.n, "edges": g.m,
               "generate_s": t1 - t0, "build_s": t2 - t1, "peak_rss_bytes": peak},
              sys.stdout)
    print()


if __name__ == "__main__":
    main()
