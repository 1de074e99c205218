import numpy as np
import pytest

from readnet import kernels
from readnet.graph import Graph
from readnet.model import Dataset, ReaderRecord, build_registry


def random_graph(rng, n, p=0.3, loops=0.0, weighted=False, connected=False):
    """Erdos-Renyi style graph on labels v00..; optional loops and weights."""
    g = Graph()
    for i in range(n):
        g.add_vertex(f"v{i:02d}")

    def w():
        return float(np.round(rng.uniform(0.5, 3.0), 3)) if weighted else 1

    if connected:
        order = rng.permutation(n)
        for k in range(1, n):
            g.add_edge_idx(int(order[k]), int(order[rng.integers(0, k)]), w())
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p and j not in g.neighbors(i):
                g.add_edge_idx(i, j, w())
        if rng.random() < loops:
            g.add_edge_idx(i, i, w())
    return g


def random_dataset(rng, n_records, n_cats=20, dims=("discipline",), max_count=4, p_present=0.25):
    labels = [f"cat{i:02d}" for i in range(n_cats)]
    recs = []
    for r in range(n_records):
        counts = {}
        for dim in dims:
            cats = {labels[i]: int(rng.integers(1, max_count + 1))
                    for i in range(n_cats) if rng.random() < p_present}
            if cats:
                counts[dim] = cats
        recs.append(ReaderRecord(f"10.1000/r{r}", "article" if rng.random() < 0.9 else "review", counts))
    recs = tuple(recs)
    return Dataset(recs, build_registry(recs))


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request):
    return kernels.backends()[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- acceptance bookkeeping ---------------------------------------------------

ACCEPTANCE: list[tuple[str, bool, str]] = []


class Criterion:
    """Context manager recording one acceptance criterion as PASS or FAIL."""

    def __init__(self, name):
        self.name = name
        self.details = []

    def note(self, text):
        self.details.append(text)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        ok = exc_type is None
        detail = "; ".join(self.details) if ok else f"{exc_type.__name__}: {exc}".splitlines()[0]
        ACCEPTANCE.append((self.name, ok, detail))
        print(f"{'PASS' if ok else 'FAIL'}  {self.name}  {detail}")
        return False


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
    passed = sum(ok for _, ok, _ in ACCEPTANCE)
    terminalreporter.write_line(f"{passed}/{len(ACCEPTANCE)} criteria passed")
