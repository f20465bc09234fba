import pytest

from oretk import vocab
from oretk.errors import (
    BadUri, BlankIdentity, DescribesImmutable, DuplicateProxy, IdentityClash,
    NotAggregated,
)
from oretk.model import (
    Blank, Literal, OreGraph, Ref, Triple, Uri, add_similar_to, add_triple,
    create_proxy, mark_nested, new_aggregation, proxies_of, rename_resource,
)

REM = "http://example.org/rem-1"
AGG = "http://example.org/agg-1"
RES = [f"http://example.org/res/{i}" for i in (1, 2, 3)]


class TestUri:
    def test_scheme_and_host_case_normalized(self):
        assert Uri("HTTP://Example.ORG/Path").value == "http://example.org/Path"
        assert Uri("http://example.org/a") == Uri("HTTP://EXAMPLE.ORG/a")

    def test_path_case_preserved(self):
        assert Uri("http://example.org/A") != Uri("http://example.org/a")

    @pytest.mark.parametrize("bad", ["", "not a uri", "/relative/path", "http://",
                                     "has space.org", "//missing.scheme/x"])
    def test_rejects_non_absolute(self, bad):
        with pytest.raises(BadUri):
            Uri(bad)

    def test_non_http_schemes_parse(self):
        assert Uri("info:doi/10.1086/503091").scheme == "info"
        assert not Uri("doi:10.1234/x").is_http

    def test_fragment_kept(self):
        assert Uri("http://example.org/a#proxy/1").fragment == "proxy/1"


class TestNewAggregation:
    def test_three_members(self):
        g = new_aggregation(REM, AGG, RES)
        assert len(list(g.match(None, vocab.DESCRIBES))) == 1
        assert len(list(g.match(None, vocab.AGGREGATES))) == 3
        assert len(list(g.match(None, vocab.TYPE))) == 2
        assert len(g) == 6

    def test_empty_member_list_constructible(self):
        g = new_aggregation(REM, AGG, [])
        assert not list(g.match(None, vocab.AGGREGATES))

    def test_duplicate_members_collapse(self):
        g = new_aggregation(REM, AGG, [RES[0], RES[0]])
        assert len(list(g.match(None, vocab.AGGREGATES))) == 1

    def test_rem_equals_agg_rejected(self):
        with pytest.raises(IdentityClash):
            new_aggregation(AGG, AGG, RES)

    def test_self_aggregation_rejected(self):
        with pytest.raises(IdentityClash):
            new_aggregation(REM, AGG, [AGG])

    @pytest.mark.parametrize("bad", ["ftp://example.org/x", "doi:10.1/x", "relative"])
    def test_non_http_identities_rejected(self, bad):
        with pytest.raises(BadUri):
            new_aggregation(REM, AGG, [bad])
        with pytest.raises(BadUri):
            new_aggregation(bad, AGG, [])


class TestAddTriple:
    def test_adds_metadata(self):
        g = new_aggregation(REM, AGG, RES)
        before = len(g)
        g = add_triple(g, Triple(Ref(g.rem_uri), vocab.CREATOR,
                                 Literal("Example University Library")))
        assert len(g) == before + 1
        g = add_triple(g, Triple(Ref(g.agg_uri), vocab.MODIFIED, Literal("2008-10-01")))
        assert len(g) == before + 2

    def test_idempotent(self):
        g = new_aggregation(REM, AGG, RES)
        t = Triple(Ref(g.agg_uri), vocab.TITLE, Literal("x"))
        once = add_triple(g, t)
        assert add_triple(once, t).triples == once.triples

    def test_describes_immutable(self):
        g = new_aggregation(REM, AGG, RES)
        with pytest.raises(DescribesImmutable):
            add_triple(g, Triple(Ref(g.rem_uri), vocab.DESCRIBES, Ref(g.agg_uri)))

    def test_blank_cannot_be_typed_as_model_class(self):
        g = new_aggregation(REM, AGG, RES)
        for cls in (vocab.AGGREGATION, vocab.RESOURCE_MAP, vocab.PROXY):
            with pytest.raises(BlankIdentity):
                add_triple(g, Triple(Blank("b"), vocab.TYPE, Ref(cls)))

    def test_input_graph_not_mutated(self):
        g = new_aggregation(REM, AGG, RES)
        snapshot = set(g.triples)
        add_triple(g, Triple(Ref(g.agg_uri), vocab.TITLE, Literal("x")))
        assert set(g.triples) == snapshot


class TestCreateProxy:
    P1 = "http://example.org/agg-1#proxy/1"

    def test_adds_three_triples(self):
        g = new_aggregation(REM, AGG, RES)
        g2 = create_proxy(g, self.P1, RES[0], AGG)
        assert len(g2) == len(g) + 3
        (proxy,) = proxies_of(g2)
        assert proxy.proxy_for == Uri(RES[0]) and proxy.proxy_in == Uri(AGG)

    def test_not_aggregated(self):
        g = new_aggregation(REM, AGG, RES)
        with pytest.raises(NotAggregated):
            create_proxy(g, self.P1, "http://example.org/res/9", AGG)

    def test_duplicate_pair_rejected_and_scan_oracle(self):
        g = create_proxy(new_aggregation(REM, AGG, RES), self.P1, RES[0], AGG)
        with pytest.raises(DuplicateProxy):
            create_proxy(g, "http://example.org/agg-1#proxy/other", RES[0], AGG)
        # oracle: scan all (proxyFor, proxyIn) pairs, assert no duplicates
        pairs = [(p.proxy_for, p.proxy_in) for p in proxies_of(g)]
        assert len(pairs) == len(set(pairs))

    def test_proxy_uri_must_differ(self):
        g = new_aggregation(REM, AGG, RES)
        with pytest.raises(IdentityClash):
            create_proxy(g, RES[0], RES[0], AGG)


class TestMarkNested:
    NESTED_REM = "http://example.org/rem-2"

    def test_adds_is_described_by(self):
        g = new_aggregation(REM, AGG, RES)
        g2 = mark_nested(g, RES[1], self.NESTED_REM)
        assert g2.has(Ref(Uri(RES[1])), vocab.IS_DESCRIBED_BY, Ref(Uri(self.NESTED_REM)))
        assert len(g2) == len(g) + 1

    def test_idempotent(self):
        g = mark_nested(new_aggregation(REM, AGG, RES), RES[1], self.NESTED_REM)
        assert mark_nested(g, RES[1], self.NESTED_REM).triples == g.triples

    def test_multiple_maps_per_aggregation_retained(self):
        g = mark_nested(new_aggregation(REM, AGG, RES), RES[1], self.NESTED_REM)
        g = mark_nested(g, RES[1], "http://example.org/rem-2-atom")
        assert len(list(g.match(Ref(Uri(RES[1])), vocab.IS_DESCRIBED_BY))) == 2

    def test_requires_membership(self):
        g = new_aggregation(REM, AGG, RES)
        with pytest.raises(NotAggregated):
            mark_nested(g, "http://example.org/res/9", self.NESTED_REM)


class TestAddSimilarTo:
    def test_doi_uri_accepted(self):
        g = add_similar_to(new_aggregation(REM, AGG, RES), "info:doi/10.1086/503091")
        (obj,) = [t.object for t in g.match(Ref(g.agg_uri), vocab.SIMILAR_TO)]
        assert obj == Ref(Uri("info:doi/10.1086/503091"))

    def test_self_reference_accepted(self):
        g = add_similar_to(new_aggregation(REM, AGG, RES), AGG)
        assert g.has(Ref(g.agg_uri), vocab.SIMILAR_TO, Ref(g.agg_uri))

    def test_garbage_rejected(self):
        with pytest.raises(BadUri):
            add_similar_to(new_aggregation(REM, AGG, RES), "not a uri")


def test_rename_resource_rewrites_everything():
    g = new_aggregation(REM, AGG, RES)
    g = add_triple(g, Triple(Ref(g.rem_uri), vocab.CREATOR, Literal("x")))
    new_rem = Uri("http://example.org/rem-1.atom")
    renamed = rename_resource(g, g.rem_uri, new_rem)
    assert renamed.rem_uri == new_rem
    assert not any(Ref(Uri(REM)) in (t.subject, t.object) for t in renamed.triples)
    assert renamed.has(Ref(new_rem), vocab.CREATOR, Literal("x"))
    assert renamed.has(Ref(new_rem), vocab.DESCRIBES, Ref(Uri(AGG)))


def test_literal_lang_xor_datatype():
    with pytest.raises(ValueError):
        Literal("x", lang="en", datatype=Uri("http://www.w3.org/2001/XMLSchema#string"))


def test_graph_values_hashable_and_frozen():
    g = new_aggregation(REM, AGG, RES)
    assert hash(g.rem_uri) == hash(Uri(REM))
    with pytest.raises(Exception):
        g.rem_uri = Uri("http://example.org/other")
