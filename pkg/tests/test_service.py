"""Publication service: conformance matrix, store semantics, sockets."""

import hashlib
import json
import threading
import urllib.error
import urllib.request

import pytest

from conformance import CASES, build_service
from oretk import vocab
from oretk.errors import (
    BindFailure, DuplicateAggregation, IdentityClash, InvalidGraph,
    MixedAggregations, RouteConflict,
)
from oretk.fixtures import atom_variant, example_graph, gen_adversarial
from oretk.model import Literal, Ref, Triple, Uri, new_aggregation
from oretk.service import Request, Service, ServiceStore, serve
from oretk.wire import WireFormat


@pytest.fixture(scope="module")
def conformance_service():
    return build_service()


@pytest.mark.parametrize("case", CASES, ids=lambda c: c.name)
def test_conformance_case(conformance_service, case):
    response = conformance_service.handle_get(Request(
        method=case.method, uri=case.uri, accept=case.accept,
        headers=case.extra_headers))
    assert response.status == case.status
    for name, value in case.headers.items():
        assert response.headers.get(name) == value, (name, response.headers)
    for name in case.absent_headers:
        assert name not in response.headers
    if case.body is not None:
        assert case.body(response.body)


def test_conformance_matrix_size():
    assert len(CASES) >= 20


def test_responses_replay_deterministic(conformance_service):
    for case in CASES:
        request = Request(case.method, case.uri, case.accept, case.extra_headers)
        first = conformance_service.handle_get(request)
        second = conformance_service.handle_get(request)
        assert (first.status, first.headers, first.body) == \
            (second.status, second.headers, second.body)


def test_aggregation_uris_never_return_200(conformance_service):
    for accept in (None, "*/*", "application/rdf+xml", "text/html", "*/*;q=0"):
        response = conformance_service.handle_get(
            Request("GET", "http://example.org/agg-1", accept))
        assert response.status in (303, 406)


def test_every_303_chain_terminates_in_200(conformance_service):
    store = conformance_service.store
    for uri in store.routed_uris():
        response = conformance_service.handle_get(Request("GET", uri, "*/*"))
        hops = 0
        while response.status == 303:
            hops += 1
            assert hops <= 5, f"redirect chain too deep from {uri}"
            response = conformance_service.handle_get(
                Request("GET", response.headers["Location"], "*/*"))
        assert response.status == 200, f"{uri} dangles with {response.status}"


def test_proxy_link_header_is_single_and_exact(conformance_service):
    response = conformance_service.handle_get(
        Request("GET", "http://example.org/agg-1#proxy/res%2F1", None))
    link = response.headers["Link"]
    assert link.count("rel=") == 1
    assert link == f'<http://example.org/agg-1>; rel="{vocab.AGGREGATION_REL}"'


class TestPublish:
    def test_mixed_aggregations_rejected(self, fig2):
        other = new_aggregation("http://example.org/other/rem",
                                "http://example.org/other/agg",
                                ["http://example.org/other/r"])
        with pytest.raises(MixedAggregations):
            ServiceStore().publish([fig2, other])

    def test_duplicate_requires_replace(self, fig2):
        store = ServiceStore()
        store.publish([fig2])
        with pytest.raises(DuplicateAggregation):
            store.publish([fig2])
        store.publish([fig2], replace=True)  # explicit replace is fine
        assert len(store.entries()) == 1

    def test_single_variant_default_format(self, fig2):
        entry = ServiceStore().publish([atom_variant(fig2)], [WireFormat.ATOM])
        assert entry.default_format is WireFormat.ATOM

    def test_preference_picks_default_for_two_variants(self, fig2):
        entry = ServiceStore().publish([fig2, atom_variant(fig2)])
        assert entry.default_format is WireFormat.RDFXML

    def test_same_rem_uri_for_both_variants_rejected(self, fig2):
        with pytest.raises(IdentityClash):
            ServiceStore().publish([fig2, fig2])

    def test_invalid_graph_rejected(self, fig2):
        broken = fig2.with_triples([Triple(
            Ref(Uri("http://example.org/loose")), vocab.CREATOR, Literal("x"))])
        with pytest.raises(InvalidGraph):
            ServiceStore().publish([broken])

    def test_route_conflict_detected(self, fig2):
        store = ServiceStore()
        store.publish([fig2])
        # another aggregation claiming fig2's rem URI as its own map
        thief = new_aggregation("http://example.org/rem-1",
                                "http://example.org/thief/agg",
                                ["http://example.org/thief/r"])
        with pytest.raises(RouteConflict):
            store.publish([thief])

    def test_every_article_proxy_resolves_per_view_oracle(self, jstor_corpus, jstor_service):
        # oracle: the proxy list from aggregation_view; each must resolve
        # with a 303 to its resource and one Link naming its aggregation
        from oretk.validate import aggregation_view

        graphs, _ = jstor_corpus
        article = next(g for g in graphs if "/article/" in g.agg_uri.value
                       and "/page/" not in g.agg_uri.value)
        view = aggregation_view(article)
        assert len(view.proxies) == 4
        for proxy in view.proxies:
            response = jstor_service.handle_get(
                Request("GET", proxy.proxy_uri.value, None))
            assert response.status == 303
            assert response.headers["Location"] == proxy.proxy_for.value
            assert response.headers["Link"] == \
                f'<{proxy.proxy_in.value}>; rel="{vocab.AGGREGATION_REL}"'

    def test_proxies_and_stubs_registered(self, jstor_service):
        store = jstor_service.store
        entry = store.entry("http://archive.example/jstor/journal/1/issue/1/article/1")
        assert len(entry.proxies) == 4
        route = store.route(entry.proxies[0].proxy_uri.value)
        assert route is not None and route.kind == "proxy"
        stub = store.route(
            "http://archive.example/jstor/journal/1/issue/1/article/1/full.pdf")
        assert stub is not None and stub.kind == "resource"


class TestMirrorMapping:
    def test_same_authority_passthrough(self):
        service = Service(ServiceStore(), "http://example.org")
        assert service.to_local(Uri("http://example.org/a/b")) == "http://example.org/a/b"

    def test_foreign_authority_mirrored(self):
        service = Service(ServiceStore(), "http://127.0.0.1:9999")
        local = service.to_local(Uri("http://arxiv.example/abs/1"))
        assert local == ("http://127.0.0.1:9999/mirror/"
                         "http%3A%2F%2Farxiv.example%2Fabs%2F1")
        assert service.to_original(local) == "http://arxiv.example/abs/1"

    def test_fragment_uris_mirrored_even_on_same_authority(self):
        service = Service(ServiceStore(), "http://example.org")
        local = service.to_local(Uri("http://example.org/agg#proxy/1"))
        assert "/mirror/" in local
        assert service.to_original(local) == "http://example.org/agg#proxy/1"


class TestRedirectRoute:
    def test_redirect_loop_entries(self):
        corpus = gen_adversarial("redirect_loop")
        store = ServiceStore()
        for src, dst in corpus.redirects.items():
            store.add_redirect(src, dst)
        service = Service(store, "http://adversarial.example")
        a, b = sorted(corpus.redirects)
        response = service.handle_get(Request("GET", a, None))
        assert response.status == 303
        assert response.headers["Location"] == corpus.redirects[a]


class TestServiceRoutes:
    def test_api_crawl_returns_schema_stable_json(self, jstor_service):
        request = Request(
            "GET",
            "http://archive.example/api/crawl"
            "?seed=http://archive.example/jstor/journal/1&depth=0")
        first = jstor_service.handle_request(request)
        second = jstor_service.handle_request(request)
        assert first.status == 200
        assert first.headers["Content-Type"] == "application/json"
        assert first.body == second.body  # replay-deterministic
        data = json.loads(first.body)
        assert [n["agg_uri"] for n in data["nodes"]] == \
            ["http://archive.example/jstor/journal/1"]
        assert data["truncated"] is True  # children exist beyond depth 0

    def test_api_crawl_missing_seed_is_400(self, jstor_service):
        response = jstor_service.handle_request(
            Request("GET", "http://archive.example/api/crawl"))
        assert response.status == 400

    def test_ui_serving(self, tmp_path):
        (tmp_path / "index.html").write_text("<!doctype html><title>explorer</title>")
        (tmp_path / "app.js").write_text("export {};")
        service = Service(ServiceStore(), "http://example.org", ui_dir=str(tmp_path))
        index = service.handle_request(Request("GET", "http://example.org/ui/"))
        assert index.status == 200
        assert index.headers["Content-Type"].startswith("text/html")
        js = service.handle_request(Request("GET", "http://example.org/ui/app.js"))
        assert js.status == 200
        assert js.headers["Content-Type"].startswith("text/javascript")
        missing = service.handle_request(Request("GET", "http://example.org/ui/nope.js"))
        assert missing.status == 404
        escape = service.handle_request(
            Request("GET", "http://example.org/ui/../secret"))
        assert escape.status == 404

    def test_ui_404_when_unconfigured(self, conformance_service):
        response = conformance_service.handle_request(
            Request("GET", "http://example.org/ui/"))
        assert response.status == 404


class TestSockets:
    def test_serve_end_to_end(self, tmp_path):
        graph = example_graph()
        store = ServiceStore()
        store.publish([graph, atom_variant(graph)])
        handle = serve(store, "127.0.0.1", 0)
        try:
            base = handle.url
            mirror = f"{base}/mirror/http%3A%2F%2Fexample.org%2Fagg-1"
            request = urllib.request.Request(mirror, headers={"Accept": "application/rdf+xml"})
            opener = urllib.request.build_opener(_NoRedirect())
            try:
                opener.open(request)
                raise AssertionError("expected a 303")
            except urllib.error.HTTPError as err:
                assert err.code == 303
                location = err.headers["Location"]
            with urllib.request.urlopen(location) as resp:
                assert resp.status == 200
                assert resp.headers["Content-Type"] == "application/rdf+xml"
                body = resp.read()
            assert body.startswith(b"<?xml")
        finally:
            handle.stop()
        with pytest.raises(OSError):
            urllib.request.urlopen(f"{handle.url}/anything", timeout=1)

    def test_concurrent_gets_identical(self):
        graph = example_graph()
        store = ServiceStore()
        store.publish([graph, atom_variant(graph)])
        handle = serve(store, "127.0.0.1", 0)
        try:
            url = f"{handle.url}/mirror/http%3A%2F%2Fexample.org%2Frem-1"
            digests = []
            lock = threading.Lock()

            def hit():
                with urllib.request.urlopen(url) as resp:
                    digest = hashlib.sha256(resp.read()).hexdigest()
                with lock:
                    digests.append(digest)

            threads = [threading.Thread(target=hit) for _ in range(32)]
            for t in threads:
                t.start()
            for t in threads:
                t.join()
            assert len(digests) == 32 and len(set(digests)) == 1
        finally:
            handle.stop()

    def test_bind_failure(self):
        handle = serve(ServiceStore(), "127.0.0.1", 0)
        try:
            port = int(handle.url.rsplit(":", 1)[1])
            with pytest.raises(BindFailure):
                serve(ServiceStore(), "127.0.0.1", port)
        finally:
            handle.stop()


class _NoRedirect(urllib.request.HTTPRedirectHandler):
    def redirect_request(self, req, fp, code, msg, headers, newurl):
        return None
