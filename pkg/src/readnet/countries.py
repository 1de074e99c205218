"""ISO 3166 country-name normalization."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .model import Dataset, ReaderRecord, build_registry


@dataclass(frozen=True)
class Unrecognized:
    """A country label absent from the table; kept verbatim so it stays analyzable."""

    label: str


@dataclass(frozen=True)
class Country:
    alpha2: str
    name: str
    aliases: tuple[str, ...]


def _key(label: str) -> str:
    return " ".join(label.split()).casefold()


class CountryTable:
    def __init__(self, countries):
        self.countries = tuple(countries)
        self._by_key: dict[str, str] = {}
        for c in self.countries:
            for label in (c.name, *c.aliases):
                k = _key(label)
                if self._by_key.setdefault(k, c.alpha2) != c.alpha2:
                    raise ValueError(f"alias {label!r} maps to both {self._by_key[k]} and {c.alpha2}")
        self._by_code = {c.alpha2: c for c in self.countries}

    def __len__(self):
        return len(self.countries)

    def lookup(self, label: str) -> str | None:
        return self._by_key.get(_key(label))

    def official_name(self, alpha2: str) -> str:
        return self._by_code[alpha2].name

    @classmethod
    def from_tsv(cls, text: str) -> "CountryTable":
        rows = text.splitlines()[1:]
        countries = []
        for row in rows:
            if not row.strip():
                continue
            code, name, aliases = row.split("\t")
            countries.append(Country(code, name, tuple(a for a in aliases.split("|") if a)))
        return cls(countries)


@lru_cache(maxsize=1)
def default_table() -> CountryTable:
    """The bundled table (237 entries)."""
    text = resources.files("readnet").joinpath("data/iso_countries.tsv").read_text("utf-8")
    return CountryTable.from_tsv(text)


def normalize_country(label: str, table: CountryTable | None = None) -> str | Unrecognized:
    """Map a free-text country label to its ISO alpha-2 code.

    Matching is case-insensitive and ignores surrounding and repeated
    whitespace; official names, alpha-2/alpha-3 codes and common aliases all
    resolve.

    >>> normalize_country("  germany ")
    'DE'
    >>> normalize_country("Atlantis")
    Unrecognized(label='Atlantis')
    """
    table = table or default_table()
    code = table.lookup(label)
    return Unrecognized(label) if code is None else code


def normalize_dataset_countries(ds: Dataset, table: CountryTable | None = None) -> Dataset:
    """Rewrite country labels as alpha-2 codes, summing counts that collide.

    Unrecognized labels are left untouched.
    """
    table = table or default_table()
    cache: dict[str, str] = {}
    out = []
    for rec in ds.records:
        cats = rec.counts.get("country")
        if not cats:
            out.append(rec)
            continue
        merged: dict[str, int] = {}
        for label, n in cats.items():
            code = cache.get(label)
            if code is None:
                code = cache[label] = table.lookup(label) or label
            merged[code] = merged.get(code, 0) + n
        counts = dict(rec.counts)
        counts["country"] = merged
        out.append(ReaderRecord(rec.paper_id, rec.doc_type, counts))
    out = tuple(out)
    return Dataset(out, build_registry(out), ds.source_note, ds.dropped_zero_entries)
