"""Pajek ``.net`` reader/writer and VOSviewer map/network writers.

Output is deterministic: LF line endings, UTF-8, sorted rows, and numbers in
their shortest round-trippable form (integral values without a fraction).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .graph import Graph, Partition


class PajekError(ValueError):
    def __init__(self, line: int, reason: str):
        self.line = line
        super().__init__(f"line {line}: {reason}")


def format_number(x) -> str:
    x = float(x)
    if x.is_integer() and abs(x) < 2 ** 53:
        return str(int(x))
    return repr(x)


def _quote(label: str) -> str:
    if "\n" in label or "\r" in label:
        raise ValueError(f"label {label!r} contains a line break")
    return '"' + label.replace('"', '""') + '"'


def write_pajek(g: Graph) -> str:
    """Pajek network text; vertex sizes are not part of the format and are not written."""
    out = [f"*Vertices {g.n}\n"]
    out.extend(f"{i + 1} {_quote(label)}\n" for i, label in enumerate(g.labels))
    out.append("*Edges\n")
    out.extend(f"{i + 1} {j + 1} {format_number(w)}\n" for i, j, w in g.edges())
    return "".join(out)


_QUOTED = re.compile(r'\s*(\d+)\s+"((?:[^"]|"")*)"(?:\s.*)?$')


def _parse_number(tok: str, lineno: int) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise PajekError(lineno, f"bad number {tok!r}") from None
    return int(v) if v.is_integer() and "." not in tok and "e" not in tok.lower() else v


def read_pajek(text: str) -> Graph:
    """Parse Pajek network text.

    ``*Arcs`` are symmetrized by summing both directions into one undirected
    edge. Lines starting with ``%`` are comments. Vertices without a label
    line are labelled by their number.
    """
    n = None
    labels: dict[int, str] = {}
    edges: list[tuple[int, int, float, int]] = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("*"):
            head = line.split()
            key = head[0].lower()
            if key == "*vertices":
                if n is not None:
                    raise PajekError(lineno, "repeated *Vertices section")
                if len(head) < 2 or not head[1].isdigit():
                    raise PajekError(lineno, "*Vertices needs a vertex count")
                n = int(head[1])
                section = "vertices"
            elif key in ("*edges", "*arcs"):
                if n is None:
                    raise PajekError(lineno, f"{head[0]} before *Vertices")
                section = "edges"
            else:
                raise PajekError(lineno, f"unsupported section {head[0]!r}")
            continue
        if section is None:
            raise PajekError(lineno, "data before any section header")
        if section == "vertices":
            m = _QUOTED.match(line)
            if m:
                idx, label = int(m.group(1)), m.group(2).replace('""', '"')
            else:
                parts = line.split()
                if len(parts) < 2 or not parts[0].isdigit():
                    raise PajekError(lineno, "expected 'index label'")
                idx, label = int(parts[0]), parts[1]
            if not 1 <= idx <= n:
                raise PajekError(lineno, f"vertex index {idx} outside 1..{n}")
            if idx in labels:
                raise PajekError(lineno, f"vertex {idx} listed twice")
            labels[idx] = label
        else:
            parts = line.split()
            if len(parts) < 2:
                raise PajekError(lineno, "expected 'i j [weight]'")
            try:
                i, j = int(parts[0]), int(parts[1])
            except ValueError:
                raise PajekError(lineno, "vertex indices must be integers") from None
            for v in (i, j):
                if not 1 <= v <= n:
                    raise PajekError(lineno, f"dangling vertex index {v} (expected 1..{n})")
            w = _parse_number(parts[2], lineno) if len(parts) > 2 else 1
            if not w > 0:
                raise PajekError(lineno, f"edge weight must be positive, got {parts[2]}")
            edges.append((i, j, w, lineno))
    if n is None:
        raise PajekError(0, "missing *Vertices section")
    g = Graph()
    for idx in range(1, n + 1):
        label = labels.get(idx, str(idx))
        if label in g:
            raise PajekError(0, f"duplicate vertex label {label!r}")
        g.add_vertex(label)
    for i, j, w, _ in edges:
        g.add_edge_idx(i - 1, j - 1, w)
    return g


@dataclass(frozen=True)
class VosExport:
    map_lines: tuple[str, ...]
    network_lines: tuple[str, ...]

    def map_text(self) -> str:
        return "".join(line + "\n" for line in self.map_lines)

    def network_text(self) -> str:
        return "".join(line + "\n" for line in self.network_lines)


def write_vosviewer(g: Graph, p: Partition) -> VosExport:
    """VOSviewer map and network files.

    Map rows: ``id, label, cluster, weight`` with 1-based ids and clusters and
    the vertex size as weight. Network rows: ``id1, id2, weight`` for links
    between distinct items; self-loops are left out.
    """
    if len(p.community) != g.n:
        raise ValueError(f"partition covers {len(p.community)} vertices, graph has {g.n}")
    for label in g.labels:
        if any(ch in label for ch in "\t\r\n"):
            raise ValueError(f"label {label!r} contains a tab or line break")
    map_lines = ["id\tlabel\tcluster\tweight"]
    map_lines += [f"{i + 1}\t{label}\t{p.community[i] + 1}\t{format_number(g.sizes[i])}"
                  for i, label in enumerate(g.labels)]
    net_lines = [f"{i + 1}\t{j + 1}\t{format_number(w)}" for i, j, w in g.edges() if i != j]
    return VosExport(tuple(map_lines), tuple(net_lines))
