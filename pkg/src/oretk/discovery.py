"""Client side of resource-map discovery: dereference, verify, crawl.

The HTTP capability is injected: a fetcher is any callable
(method, uri, headers) -> (status, headers, body) that does NOT follow
redirects itself.  Tests run against an in-process fetcher wrapping a
Service; UrllibFetcher is the thin real-network implementation.

crawl() is breadth-first and level-synchronous with lexicographic
tie-breaks, so the node and edge sets are identical at any parallel
width.  The fetch budget is enforced by admission control: each
dereference reserves its worst case (redirect cap plus the final
fetch) before dispatch, which may truncate slightly early but keeps
truncation deterministic.
"""

from __future__ import annotations

import json
import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional
from urllib.parse import urljoin, urlsplit

from . import vocab
from .errors import BadUri, FetchError, NoResourceMap, OreError, TooManyRedirects
from .model import Blank, OreGraph, Ref, Term, triple_key
from .service import Request, Service
from .uris import Uri, as_uri
from .wire import WireDocument, WireFormat, parse

__all__ = [
    "Fetcher", "InProcessFetcher", "UrllibFetcher", "ViaFetcher", "FetchStep",
    "FetchTrace", "discover", "is_authoritative", "CrawlLimits", "CrawlNode",
    "CrawlResult", "crawl", "crawl_result_to_dict", "crawl_result_to_json",
    "RELATIONS",
]

logger = logging.getLogger(__name__)

Fetcher = Callable[[str, str, Mapping[str, str]], tuple[int, Mapping[str, str], bytes]]

MAX_REDIRECTS = 5
DEREFERENCE_COST = MAX_REDIRECTS + 1  # worst-case requests for one discover()

RELATIONS = frozenset({"nested", "isAggregatedBy", "references"})

_BOTH_MEDIA_TYPES = ", ".join(f.media_type for f in WireFormat)


class InProcessFetcher:
    """Fetcher over a Service's published content, no sockets involved."""

    def __init__(self, service: Service):
        self._service = service

    def __call__(self, method: str, uri: str,
                 headers: Mapping[str, str]) -> tuple[int, Mapping[str, str], bytes]:
        request = Request(method=method, uri=uri,
                          accept=headers.get("Accept"), headers=dict(headers))
        response = self._service.handle_get(request)
        return response.status, dict(response.headers), response.body


class ViaFetcher:
    """Route requests for foreign URIs through a mirror gateway.

    A service hosting a corpus authored under another authority exposes
    each foreign URI at <gateway>/mirror/<percent-encoded-uri>; this
    wrapper applies the same mapping on the client side so a crawl can
    keep using the authored URIs.
    """

    def __init__(self, gateway_base: str, inner: Fetcher):
        base = as_uri(gateway_base)
        self._base = base.value.rstrip("/")
        self._authority = base.authority
        self._inner = inner

    def __call__(self, method: str, uri: str,
                 headers: Mapping[str, str]) -> tuple[int, Mapping[str, str], bytes]:
        parts = urlsplit(uri)
        if parts.netloc != self._authority or parts.fragment:
            from urllib.parse import quote

            uri = f"{self._base}/mirror/{quote(uri, safe='')}"
        return self._inner(method, uri, headers)


class UrllibFetcher:
    """Real-network fetcher; redirects surface as responses, not hops."""

    def __init__(self, timeout: float = 10.0):
        import urllib.request

        class _NoRedirect(urllib.request.HTTPRedirectHandler):
            def redirect_request(self, req, fp, code, msg, headers, newurl):
                return None

        self._opener = urllib.request.build_opener(_NoRedirect())
        self._timeout = timeout

    def __call__(self, method: str, uri: str,
                 headers: Mapping[str, str]) -> tuple[int, Mapping[str, str], bytes]:
        import urllib.error
        import urllib.request

        req = urllib.request.Request(uri, method=method, headers=dict(headers))
        try:
            with self._opener.open(req, timeout=self._timeout) as resp:
                return resp.status, dict(resp.headers.items()), resp.read()
        except urllib.error.HTTPError as err:
            body = err.read()
            return err.code, dict(err.headers.items()), body
        except (urllib.error.URLError, OSError) as err:
            raise FetchError(f"{method} {uri}: {err}") from None


@dataclass(frozen=True)
class FetchStep:
    request_uri: Uri
    status: int
    location: Optional[str] = None
    content_type: Optional[str] = None


@dataclass(frozen=True)
class FetchTrace:
    steps: tuple[FetchStep, ...]
    final_uri: Uri
    doc: Optional[WireDocument] = None


def discover(agg_uri: Uri | str, preferred: Optional[WireFormat],
             fetcher: Fetcher, *, parse_body: bool = True) -> FetchTrace:
    """Dereference an aggregation URI to its resource map.

    Follows up to MAX_REDIRECTS redirects; a 200 with a known media
    type yields the trace's doc.  parse_body=True additionally parses
    the payload so malformed maps fail here rather than later.
    """
    start = as_uri(agg_uri)
    if not start.is_http:
        raise BadUri(f"can only dereference http URIs, got {start}")
    accept = preferred.media_type if preferred else _BOTH_MEDIA_TYPES

    steps: list[FetchStep] = []
    current = start
    redirects = 0
    while True:
        status, raw_headers, body = fetcher("GET", current.value, {"Accept": accept})
        headers = {k.lower(): v for k, v in raw_headers.items()}
        location = headers.get("location")
        content_type = headers.get("content-type")
        steps.append(FetchStep(current, status, location, content_type))
        if status in (301, 302, 303, 307, 308):
            if location is None:
                raise NoResourceMap(f"{current} answered {status} without Location")
            redirects += 1
            if redirects > MAX_REDIRECTS:
                raise TooManyRedirects(
                    f"more than {MAX_REDIRECTS} redirects starting from {start}")
            current = as_uri(urljoin(current.value, location))
            continue
        break

    if status != 200:
        raise NoResourceMap(f"dereferencing {start} ended with {status} at {current}")
    fmt = WireFormat.from_media_type(content_type or "")
    if fmt is None:
        raise NoResourceMap(f"{current} answered with unknown media type {content_type!r}")
    doc = WireDocument(fmt, bytes(body), source_uri=current)
    if parse_body:
        parse(doc)  # surface malformed payloads as parse errors
    return FetchTrace(tuple(steps), current, doc)


def is_authoritative(rem_uri: Uri | str, agg_uri: Uri | str, fetcher: Fetcher) -> bool:
    """True iff dereferencing the aggregation (in some format) lands on
    this exact map URI.  Failures count as not-authoritative, never raise."""
    rem, agg = as_uri(rem_uri), as_uri(agg_uri)
    if rem == agg or not (rem.is_http and agg.is_http):
        return False
    for fmt in WireFormat:
        try:
            trace = discover(agg, fmt, fetcher, parse_body=False)
        except (OreError, OSError) as exc:
            logger.debug("authoritativeness probe %s (%s) failed: %s", agg, fmt.value, exc)
            continue
        if trace.final_uri == rem:
            return True
    return False


# ---------------------------------------------------------------------------
# crawling

@dataclass(frozen=True)
class CrawlLimits:
    max_depth: int
    max_nodes: int
    max_fetches: int

    def __post_init__(self) -> None:
        if self.max_depth < 0 or self.max_nodes < 1 or self.max_fetches < 1:
            raise ValueError("limits must be positive (max_depth may be 0)")


@dataclass(frozen=True)
class CrawlNode:
    agg_uri: Uri
    rem_uri: Uri
    graph: OreGraph
    authoritative: bool


@dataclass(frozen=True)
class CrawlResult:
    nodes: dict[str, CrawlNode]  # keyed by aggregation URI string
    edges: tuple[tuple[Uri, str, Uri], ...]
    frontier_truncated: bool
    errors: tuple[tuple[Uri, str], ...]
    fetches: int


class _CountingFetcher:
    """Hard fetch cap, per-authority politeness delay, refetch log."""

    def __init__(self, fetcher: Fetcher, cap: int, delay: float = 0.0):
        self._fetcher = fetcher
        self._cap = cap
        self._delay = delay
        self._lock = threading.Lock()
        self._last: dict[str, float] = {}
        self.count = 0
        self.requested: list[str] = []

    def __call__(self, method: str, uri: str, headers: Mapping[str, str]):
        with self._lock:
            if self.count >= self._cap:
                raise FetchError("fetch budget exhausted")
            self.count += 1
            self.requested.append(uri)
            wait = 0.0
            if self._delay > 0:
                authority = urlsplit(uri).netloc
                now = time.monotonic()
                start = max(now, self._last.get(authority, 0.0) + self._delay)
                self._last[authority] = start
                wait = start - now
        if wait > 0:
            time.sleep(wait)
        return self._fetcher(method, uri, headers)


def crawl(seeds: Iterable[Uri | str], limits: CrawlLimits,
          follow: Iterable[str], fetcher: Fetcher, *,
          preferred: Optional[WireFormat] = None,
          width: int = 1, delay: float = 0.0) -> CrawlResult:
    """Bounded breadth-first crawl along the selected relations.

    Relations: "nested" follows ore:isDescribedBy statements (the
    subject is itself an aggregation), "isAggregatedBy" follows
    other-membership links, "references" follows citation links whose
    subject is the fetched aggregation.  Per-node failures become error
    records; crawl itself always returns.
    """
    follow = frozenset(follow)
    unknown = follow - RELATIONS
    if unknown:
        raise ValueError(f"unknown relations: {sorted(unknown)}")
    counting = _CountingFetcher(fetcher, limits.max_fetches, delay)

    nodes: dict[str, CrawlNode] = {}
    edges: set[tuple[str, str, str]] = set()
    errors: list[tuple[Uri, str]] = []
    auth_cache: dict[tuple[str, str], bool] = {}
    visited: set[str] = set()
    truncated = False
    reserved = 0

    level = sorted({as_uri(s).value for s in seeds})
    depth = 0
    while level:
        admitted: list[str] = []
        for uri in level:
            if uri in visited:
                continue
            if len(nodes) + len(admitted) >= limits.max_nodes:
                truncated = True
                break
            if reserved + DEREFERENCE_COST > limits.max_fetches:
                truncated = True
                break
            visited.add(uri)
            reserved += DEREFERENCE_COST
            admitted.append(uri)

        def fetch_one(uri: str):
            try:
                trace = discover(Uri(uri), preferred, counting)
                return trace, parse(trace.doc), None
            except (OreError, OSError) as exc:
                return None, None, exc

        if width > 1 and len(admitted) > 1:
            with ThreadPoolExecutor(max_workers=width) as pool:
                results = dict(zip(admitted, pool.map(fetch_one, admitted)))
        else:
            results = {uri: fetch_one(uri) for uri in admitted}
        reserved = counting.count  # settle reservations at the level boundary

        next_frontier: set[str] = set()
        for uri in admitted:
            trace, graph, exc = results[uri]
            if exc is not None:
                errors.append((Uri(uri), type(exc).__name__))
                continue
            agg = graph.agg_uri
            if agg.value in nodes:
                continue  # same aggregation reached under another name
            visited.add(agg.value)

            if trace.steps[0].request_uri == agg:
                # the map was obtained by dereferencing the aggregation itself
                verdict = True
                auth_cache[(agg.value, trace.final_uri.value)] = True
            else:
                key = (agg.value, trace.final_uri.value)
                if key not in auth_cache:
                    if reserved + 2 * DEREFERENCE_COST > limits.max_fetches:
                        truncated = True
                        auth_cache[key] = False
                    else:
                        reserved += 2 * DEREFERENCE_COST
                        auth_cache[key] = is_authoritative(trace.final_uri, agg, counting)
                        reserved = counting.count
                verdict = auth_cache[key]
            nodes[agg.value] = CrawlNode(agg, trace.final_uri, graph, verdict)

            for relation, target in _relation_targets(graph, follow):
                edges.add((agg.value, relation, target.value))
                if target.value not in visited:
                    next_frontier.add(target.value)

        depth += 1
        remaining = sorted(u for u in next_frontier if u not in visited)
        if depth > limits.max_depth:
            if remaining:
                truncated = True
            break
        level = remaining

    known = set(nodes) | {u.value for u, _ in errors}
    for _from, _rel, target in sorted(edges):
        if target not in known:
            errors.append((Uri(target), "NOT_FETCHED"))
            known.add(target)

    return CrawlResult(
        nodes=nodes,
        edges=tuple((Uri(f), rel, Uri(t)) for f, rel, t in sorted(edges)),
        frontier_truncated=truncated,
        errors=tuple(sorted(errors, key=lambda e: (e[0].value, e[1]))),
        fetches=counting.count,
    )


def _relation_targets(graph: OreGraph, follow: frozenset[str]):
    agg = Ref(graph.agg_uri)
    targets: set[tuple[str, Uri]] = set()
    if "nested" in follow:
        for t in graph.match(None, vocab.IS_DESCRIBED_BY):
            if isinstance(t.subject, Ref) and isinstance(t.object, Ref) \
                    and t.subject.uri != graph.agg_uri:
                targets.add(("nested", t.subject.uri))
    if "isAggregatedBy" in follow:
        for t in graph.match(None, vocab.IS_AGGREGATED_BY):
            if isinstance(t.object, Ref) and t.object.uri != graph.agg_uri:
                targets.add(("isAggregatedBy", t.object.uri))
    if "references" in follow:
        for t in graph.match(agg, vocab.REFERENCES):
            if isinstance(t.object, Ref) and t.object.uri != graph.agg_uri:
                targets.add(("references", t.object.uri))
    return sorted(targets, key=lambda pair: (pair[0], pair[1].value))


# ---------------------------------------------------------------------------
# JSON export (the schema the CLI and the explorer UI consume)

def _term_to_json(term: Term) -> dict:
    if isinstance(term, Ref):
        return {"type": "uri", "value": term.uri.value}
    if isinstance(term, Blank):
        return {"type": "bnode", "label": term.label}
    out: dict = {"type": "literal", "value": term.text}
    if term.lang:
        out["lang"] = term.lang
    if term.datatype:
        out["datatype"] = term.datatype.value
    return out


def crawl_result_to_dict(result: CrawlResult) -> dict:
    return {
        "nodes": [
            {
                "agg_uri": node.agg_uri.value,
                "rem_uri": node.rem_uri.value,
                "authoritative": node.authoritative,
                "triples": [
                    [_term_to_json(t.subject), t.predicate.value, _term_to_json(t.object)]
                    for t in sorted(node.graph.triples, key=triple_key)
                ],
            }
            for _uri, node in sorted(result.nodes.items())
        ],
        "edges": [
            {"from": f.value, "relation": rel, "to": t.value}
            for f, rel, t in result.edges
        ],
        "errors": [{"uri": u.value, "code": code} for u, code in result.errors],
        "truncated": result.frontier_truncated,
        "fetches": result.fetches,
    }


def crawl_result_to_json(result: CrawlResult) -> str:
    return json.dumps(crawl_result_to_dict(result), indent=2) + "\n"
