"""DOI-keyed readership client with a disk cache, rate limiting and retries.

Each DOI is fetched with ``GET`` (bearer token from an environment variable)
and the JSON response is mapped to a :class:`~readnet.model.ReaderRecord`
through a small, configurable field-path mapping. Responses (including 404s)
are cached one file per DOI, so an interrupted harvest resumes where it
stopped.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import NamedTuple
from urllib.parse import quote

import requests

from .model import DIMENSIONS, Dataset, ReaderRecord, SummaryStats, dataset_summary

logger = logging.getLogger(__name__)

FOUND, NOT_FOUND, FAILED = "found", "not_found", "failed"
_RETRY_STATUS = frozenset({429}) | frozenset(range(500, 600))


@dataclass(frozen=True)
class FieldMap:
    """Where the readership breakdowns live in a response.

    Paths are dot-separated; integer components index into lists. The default
    matches a catalog endpoint returning a list of documents with
    ``reader_count_by_*`` objects. Nested breakdowns (parent -> child -> count)
    are flattened to ``"parent<nested_sep>child"`` labels.
    """

    record_path: str = "0"
    doc_type_path: str = ""
    dimensions: dict = field(default_factory=lambda: {
        "discipline": "reader_count_by_subdiscipline",
        "status": "reader_count_by_academic_status",
        "country": "reader_count_by_country",
    })
    nested_sep: str = " / "


@dataclass(frozen=True)
class FetchConfig:
    base_url: str
    cache_dir: Path
    auth_token_env: str = "READNET_API_TOKEN"
    max_requests_per_second: float = 1.0
    max_retries: int = 3
    backoff_base: float = 1.0
    url_template: str = "{base_url}/catalog?doi={doi}&view=stats"
    field_map: FieldMap = field(default_factory=FieldMap)
    max_workers: int = 4
    timeout: float = 30.0

    def __post_init__(self):
        if not self.max_requests_per_second > 0:
            raise ValueError("max_requests_per_second must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.backoff_base < 0:
            raise ValueError("backoff_base must be >= 0")
        if self.max_workers < 1:
            raise ValueError("max_workers must be >= 1")
        object.__setattr__(self, "cache_dir", Path(self.cache_dir))

    def url(self, doi: str) -> str:
        return self.url_template.format(base_url=self.base_url.rstrip("/"), doi=quote(doi, safe=""))


@dataclass(frozen=True)
class FetchOutcome:
    doi: str
    status: str  # FOUND | NOT_FOUND | FAILED
    record: ReaderRecord | None = None
    reason: str = ""
    provenance: str = "network"  # or "cache"
    timestamp: str = ""
    requests: int = 0


class RateLimiter:
    """Spaces request starts at least ``(1 + headroom) / rate`` seconds apart.

    The headroom absorbs scheduling and network jitter, so a server counting
    arrivals over any one-second window never sees more than ``rate``.
    Thread-safe; callers reserve the next free slot and sleep until it.
    """

    def __init__(self, rate: float, headroom: float = 0.05, clock=time.monotonic, sleep=time.sleep):
        if not rate > 0 or headroom < 0:
            raise ValueError("rate must be positive and headroom non-negative")
        self.interval = (1.0 + headroom) / rate
        self._clock = clock
        self._sleep = sleep
        self._next = None
        self._lock = threading.Lock()

    def acquire(self) -> float:
        with self._lock:
            now = self._clock()
            slot = now if self._next is None else max(now, self._next)
            self._next = slot + self.interval
        if slot > now:
            self._sleep(slot - now)
        return slot


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------

def cache_path(cfg: FetchConfig, doi: str) -> Path:
    return cfg.cache_dir / (quote(doi.casefold(), safe="") + ".json")


def _write_cache(cfg: FetchConfig, doi: str, status: int, payload) -> str:
    cfg.cache_dir.mkdir(parents=True, exist_ok=True)
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    entry = {"doi": doi, "http_status": status, "fetched_at": stamp, "payload": payload}
    fd, tmp = tempfile.mkstemp(dir=cfg.cache_dir, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(entry, fh, ensure_ascii=False)
        os.replace(tmp, cache_path(cfg, doi))
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return stamp


def _read_cache(cfg: FetchConfig, doi: str):
    path = cache_path(cfg, doi)
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        return None
    except (OSError, json.JSONDecodeError) as exc:
        logger.warning("ignoring unreadable cache entry %s: %s", path, exc)
        return None


# ---------------------------------------------------------------------------
# payload mapping
# ---------------------------------------------------------------------------

class _Missing(Exception):
    pass


def _follow(obj, path: str):
    if not path:
        return obj
    for part in path.split("."):
        if isinstance(obj, list):
            try:
                obj = obj[int(part)]
            except (ValueError, IndexError):
                raise _Missing(path) from None
        elif isinstance(obj, dict):
            if part not in obj:
                raise _Missing(path)
            obj = obj[part]
        else:
            raise _Missing(path)
    return obj


def _flatten(breakdown, sep: str, prefix: str = "") -> dict[str, int]:
    out: dict[str, int] = {}
    if not isinstance(breakdown, dict):
        raise ValueError("breakdown is not an object")
    for label, value in breakdown.items():
        name = f"{prefix}{sep}{label}" if prefix else label
        if isinstance(value, dict):
            for k, v in _flatten(value, sep, name).items():
                out[k] = out.get(k, 0) + v
        elif isinstance(value, int) and not isinstance(value, bool) and value >= 0:
            if value:
                out[name] = out.get(name, 0) + value
        else:
            raise ValueError(f"bad count for {name!r}")
    return out


def payload_to_record(payload, doi: str, fmap: FieldMap, doc_type: str = "article") -> ReaderRecord | None:
    """Map a response body to a record; ``None`` when it holds no document."""
    try:
        doc = _follow(payload, fmap.record_path)
    except _Missing:
        return None
    if fmap.doc_type_path:
        try:
            doc_type = _follow(doc, fmap.doc_type_path)
        except _Missing:
            pass
    counts = {}
    for dim in DIMENSIONS:
        path = fmap.dimensions.get(dim)
        if not path:
            continue
        try:
            breakdown = _follow(doc, path)
        except _Missing:
            continue
        if breakdown is None:
            continue
        flat = _flatten(breakdown, fmap.nested_sep)
        if flat:
            counts[dim] = flat
    return ReaderRecord(doi, doc_type, counts)


def _outcome_from_body(doi, status, payload, cfg, doc_type, provenance, stamp, n_requests):
    if status == 404:
        return FetchOutcome(doi, NOT_FOUND, provenance=provenance, timestamp=stamp, requests=n_requests)
    try:
        rec = payload_to_record(payload, doi, cfg.field_map, doc_type)
    except (ValueError, TypeError) as exc:
        logger.debug("unparseable payload for %s: %s", doi, exc)
        return FetchOutcome(doi, FAILED, reason="parse", provenance=provenance,
                            timestamp=stamp, requests=n_requests)
    if rec is None:
        return FetchOutcome(doi, NOT_FOUND, provenance=provenance, timestamp=stamp, requests=n_requests)
    return FetchOutcome(doi, FOUND, rec, provenance=provenance, timestamp=stamp, requests=n_requests)


# ---------------------------------------------------------------------------
# fetching
# ---------------------------------------------------------------------------

def _headers(cfg: FetchConfig) -> dict:
    headers = {"Accept": "application/json"}
    token = os.environ.get(cfg.auth_token_env)
    if token:
        headers["Authorization"] = f"Bearer {token}"
    return headers


def fetch_one(doi: str, cfg: FetchConfig, *, doc_type: str = "article",
              session: requests.Session | None = None,
              limiter: RateLimiter | None = None,
              sleep=time.sleep) -> FetchOutcome:
    """Fetch one DOI, consulting the cache first.

    404 maps to NOT_FOUND and is cached. 429 and 5xx responses, and
    connection errors, are retried up to ``cfg.max_retries`` times with
    exponential backoff (``backoff_base`` doubling per retry, or the server's
    ``Retry-After`` when longer). Every attempt passes through the limiter.
    """
    cached = _read_cache(cfg, doi)
    if cached is not None:
        return _outcome_from_body(doi, cached["http_status"], cached["payload"], cfg, doc_type,
                                  "cache", cached.get("fetched_at", ""), 0)
    session = session or requests.Session()
    limiter = limiter or RateLimiter(cfg.max_requests_per_second)
    url = cfg.url(doi)
    headers = _headers(cfg)
    reason = ""
    n_requests = 0
    retry_after = 0.0
    for attempt in range(cfg.max_retries + 1):
        if attempt:
            delay = cfg.backoff_base * 2 ** (attempt - 1)
            sleep(max(delay, retry_after))
        retry_after = 0.0
        limiter.acquire()
        n_requests += 1
        try:
            resp = session.get(url, headers=headers, timeout=cfg.timeout)
        except requests.RequestException as exc:
            reason = f"network: {exc.__class__.__name__}"
            logger.info("GET %s failed (%s), attempt %d", url, reason, attempt + 1)
            continue
        if resp.status_code in _RETRY_STATUS:
            reason = f"http {resp.status_code}"
            try:
                retry_after = min(float(resp.headers.get("Retry-After", 0)), 60.0)
            except ValueError:
                retry_after = 0.0
            logger.info("GET %s -> %d, attempt %d", url, resp.status_code, attempt + 1)
            continue
        if resp.status_code == 404:
            stamp = _write_cache(cfg, doi, 404, None)
            return FetchOutcome(doi, NOT_FOUND, timestamp=stamp, requests=n_requests)
        if resp.status_code != 200:
            return FetchOutcome(doi, FAILED, reason=f"http {resp.status_code}",
                                timestamp=_now(), requests=n_requests)
        try:
            payload = resp.json()
        except ValueError:
            return FetchOutcome(doi, FAILED, reason="parse", timestamp=_now(), requests=n_requests)
        out = _outcome_from_body(doi, 200, payload, cfg, doc_type, "network", "", n_requests)
        if out.status == FAILED:
            return FetchOutcome(doi, FAILED, reason=out.reason, timestamp=_now(), requests=n_requests)
        stamp = _write_cache(cfg, doi, 200, payload)
        return FetchOutcome(doi, out.status, out.record, provenance="network",
                            timestamp=stamp, requests=n_requests)
    return FetchOutcome(doi, FAILED, reason=reason or "retries exhausted",
                        timestamp=_now(), requests=n_requests)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class BatchResult(NamedTuple):
    dataset: Dataset
    summary: SummaryStats
    outcomes: list[FetchOutcome]


def fetch_batch(dois, cfg: FetchConfig, doc_types=None) -> BatchResult:
    """Fetch many DOIs concurrently behind one shared rate limiter.

    DOIs repeated case-insensitively are fetched once. Failures are reported
    in ``outcomes`` and the summary; they never abort the batch. The dataset
    keeps input order.
    """
    dois = list(dois)
    if not dois:
        raise ValueError("no DOIs given")
    doc_types = list(doc_types) if doc_types is not None else ["article"] * len(dois)
    unique: dict[str, tuple[str, str]] = {}
    for doi, t in zip(dois, doc_types):
        unique.setdefault(doi.casefold(), (doi, t))
    jobs = list(unique.values())

    limiter = RateLimiter(cfg.max_requests_per_second)
    local = threading.local()

    def work(job):
        if not hasattr(local, "session"):
            local.session = requests.Session()
        doi, t = job
        return fetch_one(doi, cfg, doc_type=t, session=local.session, limiter=limiter)

    with ThreadPoolExecutor(max_workers=cfg.max_workers) as pool:
        outcomes = list(pool.map(work, jobs))

    ds = Dataset.from_records((o.record for o in outcomes if o.status == FOUND),
                              source_note=f"fetched from {cfg.base_url}")
    summary = dataset_summary(ds)
    summary.n_requested = len(jobs)
    summary.n_not_found = sum(o.status == NOT_FOUND for o in outcomes)
    summary.n_failed = sum(o.status == FAILED for o in outcomes)
    return BatchResult(ds, summary, outcomes)
