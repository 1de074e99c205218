"""Small synthetic input files shared by the CLI and acceptance tests."""

import json

import numpy as np

from readnet.graph import Graph

STATUS_LABELS = [
    "Assistant Professor", "Associate Professor", "Doctoral Student", "Librarian",
    "Lecturer", "Other Professional", "Post Doc", "Professor", "Researcher",
    "Student (Bachelor)", "Student (Master)", "Student (Postgraduate)", "Student PhD",
]


def jsonl(records):
    return "".join(json.dumps({"doi": doi, "type": "article", "readers": readers}) + "\n"
                   for doi, readers in records)


def status_fixture():
    """Every status group co-reads every other one, and each has a same-group pair.

    One paper carries two readers of every group (a loop and a pair for each),
    nineteen more carry one reader of every group (pairs only), so pair weights
    dominate and no split of the complete graph pays off.
    """
    recs = [("10.5555/status-0", {"status": {s: 2 for s in STATUS_LABELS}})]
    recs += [(f"10.5555/status-{i}", {"status": {s: 1 for s in STATUS_LABELS}}) for i in range(1, 20)]
    return jsonl(recs)


def two_cluster_fixture():
    """Two dense triads joined by a single co-reading event (c-d)."""
    recs = [(f"10.5555/left-{i}", {"discipline": {"a": 1, "b": 1, "c": 1}}) for i in range(5)]
    recs += [(f"10.5555/right-{i}", {"discipline": {"d": 1, "e": 1, "f": 1}}) for i in range(5)]
    recs.append(("10.5555/bridge", {"discipline": {"c": 1, "d": 1}}))
    recs.append(("10.5555/island", {"discipline": {"x": 1, "y": 1}}))
    return jsonl(recs)


STATUS_EXPECTED = {
    "Number of vertices": 13, "Average degree": 13.0, "Degree centralization": 0.0,
    "Density": 1.0, "Closure": 1.0, "Average distance": 1.0,
    "Standard deviation of average distance": 0.0, "Diameter": 1, "Compactness": 1.0,
    "Modularity": 0.0,
}


def parse_kv(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


def planted(seed, groups=4, size=10, p_in=0.9, p_out=0.05):
    rng = np.random.default_rng(seed)
    n = groups * size
    truth = [v // size for v in range(n)]
    g = Graph()
    for v in range(n):
        g.add_vertex(f"n{v:02d}")
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < (p_in if truth[i] == truth[j] else p_out):
                g.add_edge_idx(i, j, 1)
    return g, tuple(truth)
