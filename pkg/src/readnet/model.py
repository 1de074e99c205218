"""Readership records, datasets and their text serializations.

Two input layouts are supported:

* JSON Lines, one paper per line::

    {"doi": "10.1/x", "type": "article", "readers": {"status": {"Student PhD": 3}}}

* CSV with header ``doi,type,dimension,category,count``, one row per
  (paper, dimension, category). A paper with no breakdown at all is written
  as a single row with empty ``dimension``/``category``/``count`` cells.
"""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import IO

DIMENSIONS = ("discipline", "status", "country")
DOC_TYPES = ("article", "review")
CSV_HEADER = ["doi", "type", "dimension", "category", "count"]


class ParseError(ValueError):
    """Raised for malformed input; ``line`` is 1-based (0 when unknown)."""

    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}" if line else reason)


class DuplicateRecordError(ParseError):
    def __init__(self, line: int, doi: str):
        self.doi = doi
        super().__init__(line, f"duplicate paper id {doi!r}")


@dataclass(frozen=True, slots=True)
class ReaderRecord:
    """Readership breakdown of a single paper.

    ``counts`` maps a dimension name to ``{category label: reader count}``;
    a dimension without a reported breakdown is simply absent.
    """

    paper_id: str
    doc_type: str
    counts: Mapping[str, Mapping[str, int]]

    def __post_init__(self):
        if not self.paper_id:
            raise ValueError("paper_id must be non-empty")
        if self.doc_type not in DOC_TYPES:
            raise ValueError(f"unknown doc_type {self.doc_type!r}")
        for dim, cats in self.counts.items():
            if dim not in DIMENSIONS:
                raise ValueError(f"unknown dimension {dim!r}")
            for label, n in cats.items():
                if not isinstance(n, int) or isinstance(n, bool) or n < 1:
                    raise ValueError(f"count for {dim}/{label!r} must be a positive integer, got {n!r}")

    @property
    def key(self) -> str:
        return self.paper_id.casefold()

    def readers(self, dimension: str) -> int:
        return sum(self.counts.get(dimension, {}).values())


@dataclass(frozen=True)
class Dataset:
    records: tuple[ReaderRecord, ...] = ()
    dimension_registry: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    source_note: str = ""
    dropped_zero_entries: int = 0

    def __len__(self):
        return len(self.records)

    @classmethod
    def from_records(cls, records: Iterable[ReaderRecord], source_note: str = "",
                     dropped_zero_entries: int = 0) -> "Dataset":
        records = tuple(records)
        seen: set[str] = set()
        for rec in records:
            if rec.key in seen:
                raise DuplicateRecordError(0, rec.paper_id)
            seen.add(rec.key)
        return cls(records, build_registry(records), source_note, dropped_zero_entries)


def build_registry(records: Iterable[ReaderRecord]) -> dict[str, tuple[str, ...]]:
    """Distinct labels per dimension, in order of first appearance."""
    reg: dict[str, dict[str, None]] = {d: {} for d in DIMENSIONS}
    for rec in records:
        for dim, cats in rec.counts.items():
            seen = reg[dim]
            for label in cats:
                if label not in seen:
                    seen[label] = None
    return {d: tuple(labels) for d, labels in reg.items() if labels}


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _clean_counts(raw, line: int) -> tuple[dict[str, dict[str, int]], int]:
    if not isinstance(raw, dict):
        raise ParseError(line, "'readers' must be an object")
    counts: dict[str, dict[str, int]] = {}
    dropped = 0
    for dim, cats in raw.items():
        if dim not in DIMENSIONS:
            raise ParseError(line, f"unknown dimension {dim!r}")
        if not isinstance(cats, dict):
            raise ParseError(line, f"dimension {dim!r} must map labels to counts")
        kept = {}
        for label, n in cats.items():
            if not isinstance(n, int) or isinstance(n, bool) or n < 0:
                raise ParseError(line, f"count for {dim}/{label!r} must be a non-negative integer")
            if n == 0:
                dropped += 1
            else:
                kept[label] = n
        if kept:
            counts[dim] = kept
    return counts, dropped


def _iter_jsonl(text: str):
    for lineno, line in enumerate(text.split("\n"), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(lineno, f"invalid JSON: {exc.msg}") from None
        if not isinstance(obj, dict):
            raise ParseError(lineno, "expected a JSON object")
        doi = obj.get("doi")
        if not isinstance(doi, str) or not doi.strip():
            raise ParseError(lineno, "missing or empty 'doi'")
        doc_type = obj.get("type")
        if doc_type not in DOC_TYPES:
            raise ParseError(lineno, f"unknown document type {doc_type!r}")
        counts, dropped = _clean_counts(obj.get("readers", {}), lineno)
        yield lineno, doi, doc_type, counts, dropped


def _iter_csv(text: str):
    reader = csv.reader(io.StringIO(text, newline=""))
    header = next(reader, None)
    if header is None:
        return
    if [h.strip() for h in header] != CSV_HEADER:
        raise ParseError(1, f"expected header {','.join(CSV_HEADER)}")
    # rows of one paper must be contiguous
    current = None
    for row in reader:
        lineno = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 5:
            raise ParseError(lineno, f"expected 5 columns, got {len(row)}")
        doi, doc_type, dim, label, count = row
        if not doi.strip():
            raise ParseError(lineno, "empty doi")
        if doc_type not in DOC_TYPES:
            raise ParseError(lineno, f"unknown document type {doc_type!r}")
        if current is None or current[1] != doi:
            if current is not None:
                yield current
            current = [lineno, doi, doc_type, {}, 0]
        elif current[2] != doc_type:
            raise ParseError(lineno, f"conflicting document type for {doi!r}")
        if not dim and not label and not count:
            continue
        if dim not in DIMENSIONS:
            raise ParseError(lineno, f"unknown dimension {dim!r}")
        try:
            n = int(count)
        except ValueError:
            raise ParseError(lineno, f"count {count!r} is not an integer") from None
        if n < 0:
            raise ParseError(lineno, "negative count")
        cats = current[3].setdefault(dim, {})
        if label in cats:
            raise ParseError(lineno, f"repeated category {dim}/{label!r} for {doi!r}")
        if n == 0:
            current[4] += 1
            # keep a placeholder so a repeated label is still detected
            cats[label] = 0
        else:
            cats[label] = n
    if current is not None:
        yield current


def parse_records(stream: IO[bytes] | bytes | str, format: str = "json_lines",
                  source_note: str = "") -> Dataset:
    """Parse a byte stream into a :class:`Dataset`.

    Zero counts are dropped, record order is preserved and a paper id seen
    twice (case-insensitively) raises :class:`DuplicateRecordError`.
    """
    if isinstance(stream, str):
        text = stream
    else:
        data = stream if isinstance(stream, bytes) else stream.read()
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(0, f"input is not valid UTF-8: {exc}") from None
    if format == "json_lines":
        rows = _iter_jsonl(text)
    elif format == "csv":
        rows = _iter_csv(text)
    else:
        raise ValueError(f"unknown format {format!r}")

    records = []
    seen: set[str] = set()
    dropped = 0
    for lineno, doi, doc_type, counts, n_zero in rows:
        key = doi.casefold()
        if key in seen:
            raise DuplicateRecordError(lineno, doi)
        seen.add(key)
        if format == "csv":
            counts = {d: {k: v for k, v in c.items() if v} for d, c in counts.items()}
            counts = {d: c for d, c in counts.items() if c}
        dropped += n_zero
        records.append(ReaderRecord(doi, doc_type, counts))
    records = tuple(records)
    return Dataset(records, build_registry(records), source_note, dropped)


def read_dataset(path, format: str | None = None) -> Dataset:
    """Parse a file, guessing the format from the extension when not given."""
    path = str(path)
    if format is None:
        format = "csv" if path.lower().endswith(".csv") else "json_lines"
    with open(path, "rb") as fh:
        return parse_records(fh, format, source_note=path)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def record_to_json(rec: ReaderRecord) -> str:
    readers = {d: dict(rec.counts[d]) for d in DIMENSIONS if d in rec.counts}
    return json.dumps({"doi": rec.paper_id, "type": rec.doc_type, "readers": readers},
                      ensure_ascii=False, separators=(",", ":"))


def serialize(ds: Dataset, format: str = "json_lines") -> bytes:
    """Inverse of :func:`parse_records`."""
    if format == "json_lines":
        return "".join(record_to_json(r) + "\n" for r in ds.records).encode("utf-8")
    if format != "csv":
        raise ValueError(f"unknown format {format!r}")
    buf = io.StringIO(newline="")
    writer = csv.writer(buf)  # RFC 4180: CRLF rows, minimal quoting
    writer.writerow(CSV_HEADER)
    for rec in ds.records:
        dims = [d for d in DIMENSIONS if d in rec.counts]
        if not dims:
            writer.writerow([rec.paper_id, rec.doc_type, "", "", ""])
        for dim in dims:
            for label, n in rec.counts[dim].items():
                writer.writerow([rec.paper_id, rec.doc_type, dim, label, n])
    return buf.getvalue().encode("utf-8")


# ---------------------------------------------------------------------------
# coverage accounting
# ---------------------------------------------------------------------------

@dataclass
class DocTypeSummary:
    n_records: int = 0
    total_readers: int = 0
    records_with: dict[str, int] = field(default_factory=lambda: dict.fromkeys(DIMENSIONS, 0))
    readers_by_dimension: dict[str, int] = field(default_factory=lambda: dict.fromkeys(DIMENSIONS, 0))

    def share_with(self, dimension: str) -> float:
        """Fraction of records carrying a breakdown for ``dimension``."""
        return self.records_with[dimension] / self.n_records if self.n_records else 0.0

    def reader_share(self, dimension: str) -> float:
        """Fraction of all readers that are attributed within ``dimension``."""
        return self.readers_by_dimension[dimension] / self.total_readers if self.total_readers else 0.0


@dataclass
class SummaryStats:
    by_doc_type: dict[str, DocTypeSummary] = field(
        default_factory=lambda: {t: DocTypeSummary() for t in DOC_TYPES})
    n_categories: dict[str, int] = field(default_factory=lambda: dict.fromkeys(DIMENSIONS, 0))
    dropped_zero_entries: int = 0
    unrecognized_countries: tuple[str, ...] = ()
    # filled in by fetch runs
    n_requested: int | None = None
    n_not_found: int = 0
    n_failed: int = 0

    @property
    def n_records(self) -> int:
        return sum(s.n_records for s in self.by_doc_type.values())

    @property
    def total_readers(self) -> int:
        return sum(s.total_readers for s in self.by_doc_type.values())

    @property
    def match_rate(self) -> float | None:
        if self.n_requested is None:
            return None
        return self.n_records / self.n_requested if self.n_requested else 0.0

    def render(self) -> str:
        lines = []
        for t, s in self.by_doc_type.items():
            lines.append(f"{t}: {s.n_records} records, {s.total_readers} readers")
            for d in DIMENSIONS:
                lines.append(
                    f"  {d:<10} records {s.records_with[d]:>9} ({s.share_with(d):7.2%})"
                    f"  readers {s.readers_by_dimension[d]:>11} ({s.reader_share(d):7.2%})")
        lines.append("categories: " + ", ".join(f"{d}={self.n_categories[d]}" for d in DIMENSIONS))
        lines.append(f"dropped zero-count entries: {self.dropped_zero_entries}")
        if self.unrecognized_countries:
            lines.append(f"unrecognized countries ({len(self.unrecognized_countries)}): "
                         + ", ".join(self.unrecognized_countries))
        if self.n_requested is not None:
            lines.append(f"requested {self.n_requested}, matched {self.n_records} "
                         f"({self.match_rate:.2%}), not found {self.n_not_found}, failed {self.n_failed}")
        return "\n".join(lines)


def dataset_summary(ds: Dataset, country_table=None) -> SummaryStats:
    """Record counts, reader totals and per-dimension coverage of ``ds``.

    A record's total reader count is the largest of its per-dimension sums;
    academic status is reported for every reader, so in practice this is the
    status total. When ``country_table`` is given, country labels it does not
    recognise are listed in ``unrecognized_countries``.
    """
    stats = SummaryStats(dropped_zero_entries=ds.dropped_zero_entries)
    for rec in ds.records:
        s = stats.by_doc_type[rec.doc_type]
        s.n_records += 1
        best = 0
        for dim, cats in rec.counts.items():
            n = sum(cats.values())
            s.records_with[dim] += 1
            s.readers_by_dimension[dim] += n
            best = max(best, n)
        s.total_readers += best
    for dim, labels in ds.dimension_registry.items():
        stats.n_categories[dim] = len(labels)
    if country_table is not None:
        stats.unrecognized_countries = tuple(
            label for label in ds.dimension_registry.get("country", ())
            if country_table.lookup(label) is None)
    return stats
