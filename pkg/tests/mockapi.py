"""A scripted local HTTP server standing in for the readership API."""

import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse


def catalog_body(discipline=None, status=None, country=None):
    doc = {"title": "t"}
    if discipline is not None:
        doc["reader_count_by_subdiscipline"] = discipline
    if status is not None:
        doc["reader_count_by_academic_status"] = status
    if country is not None:
        doc["reader_count_by_country"] = country
    return [doc]


class MockAPI:
    """Serves ``script[doi]``, a list of ``(status, body[, headers])`` responses.

    Each request for a DOI consumes the next response; the last one repeats.
    Unknown DOIs get 404. Every request is logged as ``(monotonic time, doi,
    status, headers)``.
    """

    def __init__(self, script=None):
        self.script = {k.casefold(): list(v) for k, v in (script or {}).items()}
        self.log = []
        self._lock = threading.Lock()
        self._served = {}
        api = self

        class Handler(BaseHTTPRequestHandler):
            def do_GET(self):
                now = time.monotonic()
                doi = parse_qs(urlparse(self.path).query).get("doi", [""])[0]
                status, body, headers = api._next(doi)
                with api._lock:
                    api.log.append((now, doi, status, dict(self.headers)))
                data = body if isinstance(body, bytes) else json.dumps(body).encode()
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                for k, v in headers.items():
                    self.send_header(k, v)
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, *args):
                pass

        self.server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.server.daemon_threads = True
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)

    def _next(self, doi):
        with self._lock:
            seq = self.script.get(doi.casefold())
            if not seq:
                return 404, {"error": "not found"}, {}
            k = self._served.get(doi.casefold(), 0)
            self._served[doi.casefold()] = k + 1
            item = seq[min(k, len(seq) - 1)]
        return (item + ({},))[:3] if len(item) == 2 else item

    @property
    def url(self):
        host, port = self.server.server_address[:2]
        return f"http://{host}:{port}"

    def requests_for(self, doi):
        return [entry for entry in self.log if entry[1].casefold() == doi.casefold()]

    def __enter__(self):
        self.thread.start()
        return self

    def __exit__(self, *exc):
        self.server.shutdown()
        self.server.server_close()


def max_in_window(times, window):
    """Largest number of request starts falling in any half-open window of the given length."""
    times = sorted(times)
    best, lo = 0, 0
    for hi, t in enumerate(times):
        while times[lo] <= t - window:
            lo += 1
        best = max(best, hi - lo + 1)
    return best
