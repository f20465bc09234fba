"""HTTP publication of aggregations.

The protocol surface realizes cool-URI discovery:

  GET <aggregation>   -> 303 + Location of the negotiated resource map
                         (Vary: Accept; 406 when nothing is acceptable)
  GET <resource map>  -> 200 + serialized bytes, Content-Type, strong ETag
  GET <proxy>         -> 303 to the aggregated resource, plus one Link
                         header naming the aggregation context
  anything else       -> 404 (405 for non-GET/HEAD methods)

Aggregation URIs never answer 200 with a body: an aggregation is a
resource without a representation.

handle_get() is a pure function of the published store, so the wire
conformance suite runs in-process; serve() wraps it in a threaded
socket server.  URIs whose authority differs from the server's (or
that carry a fragment, which HTTP clients never send) are exposed at
/mirror/<percent-encoded-original-uri>.
"""

from __future__ import annotations

import hashlib
import logging
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Mapping, Optional, Sequence
from urllib.parse import parse_qs, quote, unquote, urlsplit

from . import vocab
from .conneg import SERVER_PREFERENCE, negotiate
from .errors import (
    BadUri, BindFailure, DuplicateAggregation, IdentityClash, InvalidGraph,
    MixedAggregations, NotAcceptable, RouteConflict,
)
from .model import OreGraph, Proxy, Ref, proxies_of
from .uris import Uri, as_uri
from .wire import WireDocument, WireFormat, serialize

__all__ = [
    "PublishedEntry", "ServiceStore", "Service", "ServiceHandle",
    "Request", "Response", "serve",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PublishedEntry:
    agg_uri: Uri
    variants: Mapping[WireFormat, tuple[Uri, WireDocument]]
    proxies: tuple[Proxy, ...]
    default_format: WireFormat


@dataclass(frozen=True)
class _Route:
    kind: str  # aggregation | resourcemap | proxy | document | resource | redirect
    payload: object


class ServiceStore:
    """Registry of published content.

    Publishes are serialized behind a lock and swap the route table as
    one reference assignment, so concurrent readers never observe a
    partially published entry.
    """

    def __init__(self, preference: Sequence[WireFormat] = SERVER_PREFERENCE):
        self.preference = tuple(preference)
        self._lock = threading.Lock()
        self._routes: dict[str, _Route] = {}
        self._entries: dict[str, PublishedEntry] = {}
        self._entry_keys: dict[str, set[str]] = {}

    # -- registration -----------------------------------------------------

    def publish(self, graph_variants: Sequence[OreGraph],
                formats: Optional[Sequence[WireFormat]] = None, *,
                default_format: Optional[WireFormat] = None,
                replace: bool = False,
                serve_resources: bool = True) -> PublishedEntry:
        """Register one aggregation with one serialized variant per graph.

        Formats default to the server preference order, applied
        positionally.  serve_resources also registers plain 200 stubs
        for the aggregated resources, so proxy redirects terminate.
        """
        from .validate import validate

        graphs = list(graph_variants)
        if not graphs:
            raise ValueError("publish needs at least one graph")
        fmts = list(formats) if formats is not None else list(self.preference[: len(graphs)])
        if len(fmts) != len(graphs):
            raise ValueError(f"{len(graphs)} graphs but {len(fmts)} formats")
        if len(set(fmts)) != len(fmts):
            raise ValueError("duplicate formats in one publish call")

        agg_uris = {g.agg_uri for g in graphs}
        if len(agg_uris) != 1:
            raise MixedAggregations(
                "variants describe different aggregations: "
                + ", ".join(sorted(u.value for u in agg_uris)))
        agg = graphs[0].agg_uri

        rems = [g.rem_uri for g in graphs]
        if len(set(rems)) != len(rems) or agg in rems:
            raise IdentityClash("variant resource-map URIs must be distinct and differ from the aggregation")

        variants: dict[WireFormat, tuple[Uri, WireDocument]] = {}
        proxies: dict[str, Proxy] = {}
        resources: set[Uri] = set()
        for graph, fmt in zip(graphs, fmts):
            report = validate(graph, "lax")
            if not report.valid:
                raise InvalidGraph(report)
            variants[fmt] = (graph.rem_uri, serialize(graph, fmt, check=False))
            for p in proxies_of(graph):
                proxies.setdefault(p.proxy_uri.value, p)
            resources |= {t.object.uri for t in graph.match(Ref(agg), vocab.AGGREGATES)
                          if isinstance(t.object, Ref)}

        default = default_format if default_format in variants else \
            next(f for f in list(self.preference) + fmts if f in variants)
        entry = PublishedEntry(agg, variants, tuple(sorted(
            proxies.values(), key=lambda p: p.proxy_uri.value)), default)

        with self._lock:
            if agg.value in self._entries and not replace:
                raise DuplicateAggregation(f"{agg} is already published")
            routes = dict(self._routes)
            entries = dict(self._entries)
            for key in self._entry_keys.get(agg.value, ()):  # drop replaced routes
                routes.pop(key, None)
            entries.pop(agg.value, None)

            keys: set[str] = set()

            def claim(uri: Uri, route: _Route) -> None:
                existing = routes.get(uri.value)
                if existing is not None and existing.kind not in ("resource",):
                    raise RouteConflict(f"{uri} is already routed as {existing.kind}")
                routes[uri.value] = route
                keys.add(uri.value)

            claim(agg, _Route("aggregation", entry))
            for fmt, (rem, doc) in variants.items():
                claim(rem, _Route("resourcemap", (entry, fmt)))
            for p in entry.proxies:
                claim(p.proxy_uri, _Route("proxy", p))
            if serve_resources:
                for res in resources:
                    if res.value not in routes:
                        routes[res.value] = _Route("resource", res)
                        keys.add(res.value)

            entries[agg.value] = entry
            self._entry_keys[agg.value] = keys
            self._routes = routes
            self._entries = entries
        return entry

    def add_raw_document(self, uri: Uri | str, doc: WireDocument) -> None:
        """Serve bytes verbatim at a URI (e.g. a non-authoritative copy)."""
        uri = as_uri(uri)
        with self._lock:
            routes = dict(self._routes)
            routes[uri.value] = _Route("document", doc)
            self._routes = routes

    def add_redirect(self, uri: Uri | str, target: Uri | str) -> None:
        uri, target = as_uri(uri), as_uri(target)
        with self._lock:
            routes = dict(self._routes)
            routes[uri.value] = _Route("redirect", target)
            self._routes = routes

    # -- lookup -----------------------------------------------------------

    def route(self, uri: str) -> Optional[_Route]:
        return self._routes.get(uri)

    def entry(self, agg_uri: Uri | str) -> Optional[PublishedEntry]:
        return self._entries.get(as_uri(agg_uri).value)

    def entries(self) -> list[PublishedEntry]:
        return [self._entries[k] for k in sorted(self._entries)]

    def routed_uris(self) -> list[str]:
        return sorted(self._routes)


@dataclass(frozen=True)
class Request:
    method: str
    uri: str
    accept: Optional[str] = None
    headers: Mapping[str, str] = field(default_factory=dict)

    def header(self, name: str) -> Optional[str]:
        lowered = {k.lower(): v for k, v in self.headers.items()}
        return lowered.get(name.lower())


@dataclass(frozen=True)
class Response:
    status: int
    headers: dict[str, str]
    body: bytes


def _etag(body: bytes) -> str:
    return '"' + hashlib.sha256(body).hexdigest() + '"'


def _text(status: int, message: str, extra: Optional[dict[str, str]] = None) -> Response:
    body = message.encode("utf-8")
    headers = {"Content-Type": "text/plain; charset=utf-8",
               "Content-Length": str(len(body))}
    headers.update(extra or {})
    return Response(status, headers, body)


_STATIC_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json",
    ".json": "application/json",
    ".svg": "image/svg+xml",
}


class Service:
    """Route published content; translate between local and original URIs."""

    def __init__(self, store: ServiceStore, external_base: str = "http://127.0.0.1:8080",
                 ui_dir: Optional[str] = None):
        base = as_uri(external_base)
        self.store = store
        self.external_base = base.value.rstrip("/")
        self.authority = base.authority
        self.ui_dir = Path(ui_dir) if ui_dir else None

    # -- URI mapping --------------------------------------------------------

    def to_local(self, uri: Uri | str) -> str:
        """The URI under which this service exposes the resource."""
        u = as_uri(uri)
        if u.scheme == "http" and u.authority == self.authority and not u.fragment:
            return u.value
        return f"{self.external_base}/mirror/{quote(u.value, safe='')}"

    def to_original(self, uri: str) -> str:
        parts = urlsplit(uri)
        if parts.path.startswith("/mirror/"):
            return as_uri(unquote(parts.path[len("/mirror/"):])).value
        return as_uri(uri).value

    # -- request handling -----------------------------------------------------

    def handle_get(self, request: Request) -> Response:
        """Protocol behavior for published content; pure given the store."""
        method = request.method.upper()
        if method not in ("GET", "HEAD"):
            return _text(405, "method not allowed\n", {"Allow": "GET, HEAD"})
        try:
            uri = self.to_original(request.uri)
        except BadUri:
            return _text(404, "not found\n")
        route = self.store.route(uri)
        if route is None:
            return _text(404, "not found\n")

        if route.kind == "aggregation":
            entry: PublishedEntry = route.payload
            try:
                result = negotiate(request.accept, entry.variants.keys(),
                                   default=entry.default_format,
                                   preference=self.store.preference)
            except NotAcceptable:
                return _text(406, "no acceptable resource map serialization\n",
                             {"Vary": "Accept"})
            rem_uri = entry.variants[result.chosen][0]
            return Response(303, {
                "Location": self.to_local(rem_uri),
                "Vary": "Accept",
                "Content-Length": "0",
            }, b"")

        if route.kind == "resourcemap":
            entry, fmt = route.payload
            doc = entry.variants[fmt][1]
            return self._representation(request, method, doc.data, fmt.media_type)

        if route.kind == "proxy":
            proxy: Proxy = route.payload
            return Response(303, {
                "Location": self.to_local(proxy.proxy_for),
                "Link": f'<{self.to_local(proxy.proxy_in)}>; rel="{vocab.AGGREGATION_REL}"',
                "Content-Length": "0",
            }, b"")

        if route.kind == "document":
            doc: WireDocument = route.payload
            return self._representation(request, method, doc.data, doc.format.media_type)

        if route.kind == "resource":
            body = f"aggregated resource {route.payload}\n".encode("utf-8")
            return self._representation(request, method, body, "text/plain; charset=utf-8")

        if route.kind == "redirect":
            return Response(303, {
                "Location": self.to_local(route.payload),
                "Content-Length": "0",
            }, b"")

        return _text(404, "not found\n")

    def _representation(self, request: Request, method: str, body: bytes,
                        media_type: str) -> Response:
        etag = _etag(body)
        conditional = request.header("If-None-Match")
        if conditional is not None:
            candidates = [v.strip() for v in conditional.split(",")]
            if "*" in candidates or etag in candidates:
                return Response(304, {"ETag": etag}, b"")
        headers = {
            "Content-Type": media_type,
            "Content-Length": str(len(body)),
            "ETag": etag,
        }
        return Response(200, headers, body if method == "GET" else b"")

    def handle_request(self, request: Request) -> Response:
        """handle_get plus the two service-level routes: /ui static assets
        and the /api/crawl pass-through producing CrawlResult JSON."""
        parts = urlsplit(request.uri)
        if parts.path == "/api/crawl":
            return self._api_crawl(request, parse_qs(parts.query))
        if parts.path == "/ui" or parts.path.startswith("/ui/"):
            return self._static(request, parts.path)
        return self.handle_get(request)

    def _api_crawl(self, request: Request, params: dict[str, list[str]]) -> Response:
        from .discovery import CrawlLimits, InProcessFetcher, crawl, crawl_result_to_json

        if request.method.upper() not in ("GET", "HEAD"):
            return _text(405, "method not allowed\n", {"Allow": "GET, HEAD"})
        seeds = params.get("seed")
        if not seeds:
            return _text(400, "missing seed parameter\n")
        try:
            depth = int(params.get("depth", ["0"])[0])
            follow = frozenset((params.get("follow", ["nested"])[0] or "nested").split(","))
            seed_uris = [as_uri(s) for s in seeds]
        except (ValueError, BadUri) as exc:
            return _text(400, f"bad parameter: {exc}\n")
        result = crawl(
            seed_uris,
            CrawlLimits(max_depth=depth, max_nodes=500, max_fetches=4000),
            follow,
            InProcessFetcher(self),
        )
        body = crawl_result_to_json(result).encode("utf-8")
        return Response(200, {
            "Content-Type": "application/json",
            "Content-Length": str(len(body)),
        }, body if request.method.upper() == "GET" else b"")

    def _static(self, request: Request, path: str) -> Response:
        if self.ui_dir is None:
            return _text(404, "no UI assets configured\n")
        rel = path[len("/ui"):].lstrip("/") or "index.html"
        root = self.ui_dir.resolve()
        target = (root / rel).resolve()
        if not str(target).startswith(str(root)) or not target.is_file():
            return _text(404, "not found\n")
        body = target.read_bytes()
        media = _STATIC_TYPES.get(target.suffix, "application/octet-stream")
        return self._representation(request, request.method.upper(), body, media)


@dataclass
class ServiceHandle:
    url: str
    service: Service
    _httpd: ThreadingHTTPServer
    _thread: threading.Thread

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        self._thread.join(timeout=5)


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def _dispatch(self, method: str) -> None:
        service: Service = self.server.service  # type: ignore[attr-defined]
        host = self.headers.get("Host") or service.authority
        request = Request(
            method=method,
            uri=f"http://{host}{self.path}",
            accept=self.headers.get("Accept"),
            headers={k: v for k, v in self.headers.items()},
        )
        try:
            response = service.handle_request(request)
        except Exception:  # noqa: BLE001 - a handler must answer something
            logger.exception("request failed: %s %s", method, self.path)
            response = _text(500, "internal error\n")
        self.send_response(response.status)
        sent = set()
        for key, value in response.headers.items():
            self.send_header(key, value)
            sent.add(key.lower())
        if "content-length" not in sent:
            self.send_header("Content-Length", str(len(response.body)))
        self.end_headers()
        if method != "HEAD" and response.body:
            self.wfile.write(response.body)

    def do_GET(self) -> None:
        self._dispatch("GET")

    def do_HEAD(self) -> None:
        self._dispatch("HEAD")

    def do_POST(self) -> None:
        self._dispatch("POST")

    def do_PUT(self) -> None:
        self._dispatch("PUT")

    def do_DELETE(self) -> None:
        self._dispatch("DELETE")

    def log_message(self, fmt: str, *args) -> None:
        logger.debug("%s - %s", self.address_string(), fmt % args)


def serve(store: ServiceStore, bind: str = "127.0.0.1", port: int = 0, *,
          external_base: Optional[str] = None,
          ui_dir: Optional[str] = None) -> ServiceHandle:
    """Start a threaded HTTP server over the store; port 0 picks a free one."""
    try:
        httpd = ThreadingHTTPServer((bind, port), _Handler)
    except OSError as exc:
        raise BindFailure(f"cannot bind {bind}:{port}: {exc}") from None
    actual_port = httpd.server_address[1]
    advertised = "127.0.0.1" if bind in ("0.0.0.0", "::", "") else bind
    base = external_base or f"http://{advertised}:{actual_port}"
    service = Service(store, base, ui_dir=ui_dir)
    httpd.service = service  # type: ignore[attr-defined]
    thread = threading.Thread(target=httpd.serve_forever, name="oretk-serve", daemon=True)
    thread.start()
    logger.info("serving %d entries at %s", len(store.entries()), base)
    return ServiceHandle(base, service, httpd, thread)
