"""Bookmark-coupling networks from per-paper readership breakdowns."""

__version__ = "0.1.0"

from .community import LouvainConfig, community_sizes, louvain  # noqa: E402
from .coupling import CouplingOptions, build_coupling  # noqa: E402
from .graph import Graph, Partition, largest_component  # noqa: E402
from .kernels import BACKEND  # noqa: E402
from .model import Dataset, ReaderRecord, dataset_summary, parse_records  # noqa: E402
from .netstats import full_report, modularity  # noqa: E402

__all__ = [
    "BACKEND", "CouplingOptions", "Dataset", "Graph", "LouvainConfig", "Partition",
    "ReaderRecord", "build_coupling", "community_sizes", "dataset_summary", "full_report",
    "largest_component", "louvain", "modularity", "parse_records",
]
