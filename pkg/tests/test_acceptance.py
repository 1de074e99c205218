"""Acceptance criteria, each checked at its stated tolerance.

Every test records one PASS/FAIL line; the lines are repeated in the
"acceptance criteria" section of the pytest terminal summary. Run alone with
``pytest tests/test_acceptance.py -v``.
"""

import io
import json
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import random_dataset, random_graph
from fixtures import STATUS_EXPECTED, parse_kv, planted, status_fixture
from mockapi import MockAPI, catalog_body, max_in_window
from oracles import (best_partition, coupling_brute_force, floyd_warshall, modularity_double_sum,
                     spearman_reference)
from readnet import kernels
from readnet.centrality import adjacency_matrix, eigenvector_centrality, spearman
from readnet.cli import main
from readnet.community import LouvainConfig, louvain
from readnet.coupling import CouplingOptions, build_coupling
from readnet.fetch import FOUND, FetchConfig, fetch_batch, fetch_one
from readnet.formats import read_pajek, write_pajek
from readnet.graph import Graph
from readnet.model import serialize
from readnet.netstats import distance_matrix, modularity

HERE = Path(__file__).resolve().parent


def test_status_column(tmp_path, criterion):
    with criterion("status column reconstruction") as c:
        path = tmp_path / "status.jsonl"
        path.write_text(status_fixture())
        out = io.StringIO()
        t0 = time.perf_counter()
        code = main(["analyze", "--input", str(path), "--dimension", "status", "--report", "kv"], out=out)
        elapsed = time.perf_counter() - t0
        assert code == 0
        kv = parse_kv(out.getvalue())
        for name, value in STATUS_EXPECTED.items():
            assert abs(float(kv[name]) - value) <= 1e-9, f"{name}: {kv[name]} != {value}"
        assert kv["Number of communities"] == "1"
        assert elapsed < 1.0, f"took {elapsed:.2f} s"
        c.note(f"all 10 rows within 1e-9, single community, {elapsed:.3f} s")


def test_coupling_oracle(criterion):
    with criterion("coupling oracle") as c:
        rng = np.random.default_rng(555)
        ds = random_dataset(rng, 1000, n_cats=20, dims=("discipline", "status"), max_count=4)
        t0 = time.perf_counter()
        for dim in ("discipline", "status"):
            for min_count, loop_min in ((1, 2), (2, 3)):
                g = build_coupling(ds, CouplingOptions(dim, loop_min, min_count))
                ref = coupling_brute_force(ds, dim, min_count, loop_min)
                assert g == ref and g.labels == ref.labels
        elapsed = time.perf_counter() - t0
        assert elapsed < 5.0, f"took {elapsed:.2f} s"
        c.note(f"1000 records, 4 option sets exact, {elapsed:.2f} s")


def test_modularity_oracle(criterion):
    with criterion("modularity oracle") as c:
        rng = np.random.default_rng(556)
        worst = 0.0
        for _ in range(200):
            g = random_graph(rng, int(rng.integers(1, 9)), p=rng.uniform(0, 0.8),
                             loops=0.3, weighted=bool(rng.random() < 0.5))
            memb = rng.integers(0, max(1, g.n), g.n).tolist()
            worst = max(worst, abs(modularity(g, memb) - modularity_double_sum(g, memb)))
        assert worst <= 1e-12, f"max error {worst:.3e}"
        c.note(f"200 pairs, max error {worst:.1e}")


def test_louvain_separable(criterion):
    with criterion("Louvain optimality on separable fixtures") as c:
        t0 = time.perf_counter()
        g = Graph.from_edges([(a, b, 1) for a, b in ("ab", "bc", "ac", "de", "ef", "df")])
        q_best, _ = best_partition(g)
        for name, impl in kernels.backends().items():
            p = louvain(g, backend=impl)
            assert abs(p.q - 0.5) <= 1e-12 and abs(p.q - q_best) <= 1e-12, name
        recovered = 0
        for seed in range(100):
            g, truth = planted(seed)
            recovered += louvain(g, LouvainConfig(seed=seed)).community == truth
        elapsed = time.perf_counter() - t0
        assert recovered >= 95, f"recovered {recovered}/100"
        assert elapsed < 30.0, f"took {elapsed:.2f} s"
        c.note(f"two triangles Q=0.5=exhaustive optimum; planted recovered {recovered}/100; {elapsed:.2f} s")


def test_centrality_oracle(criterion):
    with criterion("eigenvector centrality oracle") as c:
        rng = np.random.default_rng(557)
        worst = 0.0
        for _ in range(100):
            g = random_graph(rng, int(rng.integers(2, 31)), p=rng.uniform(0.05, 0.5),
                             loops=0.1, weighted=bool(rng.random() < 0.5), connected=True)
            vals, vecs = np.linalg.eigh(adjacency_matrix(g).toarray())
            ref = np.abs(vecs[:, np.argmax(vals)])
            ref /= np.linalg.norm(ref)
            res = eigenvector_centrality(g)
            assert res.converged
            worst = max(worst, np.abs(res.scores - ref).max())
        assert worst <= 1e-6, f"max error {worst:.3e}"
        kn_worst = 0.0
        for n in range(2, 41):
            g = Graph.from_edges((f"v{i}", f"v{j}", 1) for i in range(n) for j in range(i + 1, n))
            kn_worst = max(kn_worst, np.abs(eigenvector_centrality(g).scores - 1 / np.sqrt(n)).max())
        assert kn_worst <= 1e-12, f"K_n max error {kn_worst:.3e}"
        c.note(f"100 graphs max error {worst:.1e}; K_2..K_40 max error {kn_worst:.1e}")


def test_spearman_oracle(criterion):
    with criterion("Spearman oracle") as c:
        rng = np.random.default_rng(558)
        worst, done = 0.0, 0
        while done < 1000:
            n = int(rng.integers(3, 50))
            x = rng.integers(0, max(2, n // 3), n)
            y = rng.integers(0, max(2, n // 2), n)
            if len(set(x.tolist())) < 2 or len(set(y.tolist())) < 2:
                continue
            worst = max(worst, abs(spearman(x, y) - spearman_reference(x, y)))
            done += 1
        assert worst <= 1e-12, f"max error {worst:.3e}"
        x = rng.normal(size=50)
        assert spearman(x, np.exp(x)) == 1.0
        assert spearman(x, -x ** 3) == -1.0
        c.note(f"1000 tied vectors max error {worst:.1e}; monotone 1.0, antitone -1.0")


def test_distance_oracle(criterion):
    with criterion("distance oracle") as c:
        rng = np.random.default_rng(559)
        for _ in range(100):
            g = random_graph(rng, int(rng.integers(1, 51)), p=rng.uniform(0.0, 0.3), loops=0.1)
            d = distance_matrix(g).astype(float)
            d[d < 0] = np.inf
            assert np.array_equal(d, floyd_warshall(g))
        c.note(f"100 graphs (n <= 50) exact, backend {kernels.BACKEND}")


def test_pajek_round_trip(criterion):
    with criterion("Pajek round trip") as c:
        rng = np.random.default_rng(560)
        for _ in range(100):
            g = random_graph(rng, int(rng.integers(0, 40)), p=rng.uniform(0, 0.4),
                             loops=0.2, weighted=bool(rng.random() < 0.5))
            text = write_pajek(g)
            back = read_pajek(text)
            assert back == g and back.labels == g.labels
            assert write_pajek(g) == text and write_pajek(back) == text
        c.note("100 graphs identical after read(write(g)); output byte-stable")


@pytest.mark.slow
def test_scale(tmp_path, criterion):
    with criterion("scale: 1.1M records, 465 categories") as c:
        corpus = tmp_path / "corpus.jsonl"
        proc = subprocess.run([sys.executable, str(HERE / "synth.py"), "--jsonl", str(corpus)],
                              capture_output=True, text=True, check=True)
        m = json.loads(proc.stdout.strip().splitlines()[-1])
        assert m["records"] == 1_100_000 and m["vertices"] == 465
        assert m["build_s"] < 60, f"build took {m['build_s']:.1f} s"
        assert m["peak_rss_bytes"] < 2 * 1024 ** 3, f"peak RSS {m['peak_rss_bytes'] / 1e9:.2f} GB"
        t0 = time.perf_counter()
        run = subprocess.run([sys.executable, "-m", "readnet", "analyze", "--input", str(corpus),
                              "--dimension", "discipline", "--report", "kv"],
                             capture_output=True, text=True)
        pipeline = time.perf_counter() - t0
        assert run.returncode == 0, run.stderr
        assert parse_kv(run.stdout)["Number of vertices"] == "465"
        assert pipeline < 300, f"pipeline took {pipeline:.0f} s"
        c.note(f"build {m['build_s']:.1f} s, peak RSS {m['peak_rss_bytes'] / 1e9:.2f} GB "
               f"(generation included); full analyze {pipeline:.1f} s")


def test_fetch_client(tmp_path, criterion):
    with criterion("fetch client against mock server") as c:
        body = catalog_body({"Physics": 2, "Biology": 1}, {"Student PhD": 1})
        dois = [f"10.5555/f{i}" for i in range(10)]
        script = {d: [(200, body)] for d in dois}
        script["10.5555/f3"] = [(429, {"error": "rate"}, {"Retry-After": "0"}), (200, body)]
        with MockAPI(script) as api:
            cfg = FetchConfig(base_url=api.url, cache_dir=tmp_path / "cache",
                              max_requests_per_second=5.0, backoff_base=0.05, max_workers=4)
            cold = fetch_batch(dois, cfg)
            times = [t for t, *_ in api.log]
            peak = max_in_window(times, 1.0)
            assert peak <= 5, f"{peak} requests in one second"
            transcript = [s for _, _, s, _ in api.requests_for("10.5555/f3")]
            assert transcript == [429, 200], transcript
            f3 = next(o for o in cold.outcomes if o.doi == "10.5555/f3")
            assert f3.status == FOUND and f3.requests == 2
            n_cold = len(api.log)
            warm = fetch_batch(dois, cfg)
            assert len(api.log) == n_cold, "warm run hit the network"
            assert serialize(warm.dataset) == serialize(cold.dataset)
            assert fetch_one("10.5555/f3", cfg).provenance == "cache"
        c.note(f"{n_cold} requests, at most {peak} per 1 s window; 429 -> 200; warm rerun 0 requests")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
