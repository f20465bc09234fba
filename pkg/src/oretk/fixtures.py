"""Deterministic corpus generators.

Two worked corpora ship with the toolkit: a repository document with
its format variants and prior versions (the splash-page shape), and a
journal/issue/article/page hierarchy with page-turning order and
citations (the archive shape).  A third generator emits deliberately
broken corpora for negative-path coverage.

Randomness comes from a 32-bit LCG (state' = 1664525*state + 1013904223
mod 2^32) so any implementation, in any language, reproduces the same
corpus byte for byte from the same seed and parameters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional
from urllib.parse import quote

from . import vocab
from .atom import to_atom
from .model import (
    Literal, OreGraph, Ref, Triple, Uri, add_similar_to, add_triple,
    as_uri, create_proxy, mark_nested, new_aggregation, rename_resource,
)
from .rdfxml import from_rdfxml, to_rdfxml
from .wire import WireDocument, WireFormat

__all__ = [
    "Lcg", "CorpusManifest", "AdversarialCorpus", "example_graph", "gen_arxiv",
    "gen_jstor", "gen_adversarial", "atom_variant", "proxy_uri_for",
    "write_corpus", "load_corpus_dir", "ADVERSARIAL_KINDS",
]

MODIFIED_STAMP = "2008-10-01T00:00:00Z"


class Lcg:
    """Numerical-Recipes LCG; quality is irrelevant, reproducibility is not."""

    MULTIPLIER = 1664525
    INCREMENT = 1013904223
    MODULUS = 2 ** 32

    def __init__(self, seed: int):
        self._state = seed % self.MODULUS

    def next_u32(self) -> int:
        self._state = (self.MULTIPLIER * self._state + self.INCREMENT) % self.MODULUS
        return self._state

    def below(self, n: int) -> int:
        # modulo bias is acceptable at corpus scale
        return self.next_u32() % n

    def fraction(self) -> float:
        return self.next_u32() / self.MODULUS


@dataclass
class CorpusManifest:
    """Ground truth for the oracle tests: declared counts and link pairs."""
    seed: int
    counts: dict[str, int]
    agg_uris: list[str]
    expected_crawl_nodes: int
    citation_pairs: list[tuple[str, str]]

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "counts": dict(self.counts),
            "agg_uris": list(self.agg_uris),
            "expected_crawl_nodes": self.expected_crawl_nodes,
            "citation_pairs": [list(p) for p in self.citation_pairs],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "CorpusManifest":
        return cls(
            seed=data["seed"],
            counts=dict(data["counts"]),
            agg_uris=list(data["agg_uris"]),
            expected_crawl_nodes=data["expected_crawl_nodes"],
            citation_pairs=[tuple(p) for p in data["citation_pairs"]],
        )


def proxy_uri_for(agg: Uri, target: Uri) -> Uri:
    """Fixture proxy minting scheme: agg URI + '#proxy/' + encoded target tail."""
    if target.value.startswith(agg.value):
        tail = target.value[len(agg.value):].lstrip("/")
    else:
        tail = target.value
    return Uri(f"{agg.value}#proxy/{quote(tail, safe='')}")


def _rem_for(agg: Uri) -> Uri:
    return Uri(agg.value + "/rem.rdf")


def _with_chain(graph: OreGraph, ordered_members: list[Uri]) -> OreGraph:
    """Proxies for the members, chained with followedBy in the given order."""
    proxies = []
    for member in ordered_members:
        puri = proxy_uri_for(graph.agg_uri, member)
        graph = create_proxy(graph, puri, member, graph.agg_uri)
        proxies.append(puri)
    for left, right in zip(proxies, proxies[1:]):
        graph = add_triple(graph, Triple(Ref(left), vocab.FOLLOWED_BY, Ref(right)))
    return graph


def _meta(graph: OreGraph, title: str) -> OreGraph:
    graph = add_triple(graph, Triple(Ref(graph.agg_uri), vocab.TITLE, Literal(title)))
    return add_triple(
        graph, Triple(Ref(graph.rem_uri), vocab.MODIFIED, Literal(MODIFIED_STAMP)))


def example_graph() -> OreGraph:
    """The minimal worked example: one map describing an aggregation of
    three resources, with creator and modified metadata on the map.
    The golden files fixtures/fig2.{rdf,atom} are its canonical bytes."""
    graph = new_aggregation(
        "http://example.org/rem-1", "http://example.org/agg-1",
        [f"http://example.org/res/{i}" for i in (1, 2, 3)])
    graph = add_triple(graph, Triple(
        Ref(graph.rem_uri), vocab.CREATOR, Literal("Example University Library")))
    return add_triple(graph, Triple(
        Ref(graph.rem_uri), vocab.MODIFIED, Literal(MODIFIED_STAMP)))


_FORMAT_NAMES = ("ps", "pdf", "html", "dvi", "src")


def gen_arxiv(base_uri: Uri | str, n_formats: int = 4, n_versions: int = 1,
              seed: int = 1) -> tuple[list[OreGraph], CorpusManifest]:
    """One repository document aggregating its format variants.

    Prior versions (n_versions - 1 of them) become their own
    aggregations, linked from the current document with
    dcterms:references plus isDescribedBy pointers to their own maps.
    Navigational links of the splash page are deliberately not
    aggregated: they point outside the document.
    """
    if n_formats < 1 or n_versions < 1:
        raise ValueError("n_formats and n_versions must be >= 1")
    base = as_uri(base_uri).value.rstrip("/")
    rng = Lcg(seed)
    doi = f"info:doi/10.{1000 + rng.below(9000)}/{rng.below(10 ** 6):06d}"

    def formats_of(agg: Uri) -> list[Uri]:
        names = [_FORMAT_NAMES[i] if i < len(_FORMAT_NAMES) else f"fmt{i}"
                 for i in range(n_formats)]
        return [Uri(f"{agg.value}/{name}") for name in names]

    current = Uri(f"{base}/eprint/0801.0001")
    graph = new_aggregation(_rem_for(current), current, formats_of(current))
    graph = _meta(graph, "A synthetic e-print about resource aggregation")
    graph = add_triple(graph, Triple(Ref(current), vocab.CREATOR, Literal("First Author")))
    graph = add_triple(graph, Triple(Ref(current), vocab.CREATOR, Literal("Second Author")))
    graph = add_triple(graph, Triple(Ref(current), vocab.MODIFIED, Literal(MODIFIED_STAMP)))
    graph = add_triple(graph, Triple(Ref(graph.rem_uri), vocab.CREATOR,
                                     Literal("Example Repository")))
    graph = add_similar_to(graph, doi)

    graphs = []
    versions: list[Uri] = []
    citation_pairs: list[tuple[str, str]] = []
    for v in range(1, n_versions):
        vagg = Uri(f"{base}/eprint/0801.0001/v{v}")
        vgraph = new_aggregation(_rem_for(vagg), vagg, formats_of(vagg))
        vgraph = _meta(vgraph, f"A synthetic e-print about resource aggregation (v{v})")
        graphs.append(vgraph)
        versions.append(vagg)
        graph = add_triple(graph, Triple(Ref(current), vocab.REFERENCES, Ref(vagg)))
        graph = add_triple(graph, Triple(Ref(vagg), vocab.IS_DESCRIBED_BY,
                                         Ref(_rem_for(vagg))))
        citation_pairs.append((current.value, vagg.value))

    graphs.insert(0, graph)
    manifest = CorpusManifest(
        seed=seed,
        counts={
            "journals": 0, "issues": 0, "articles": n_versions, "pages": 0,
            "formats": n_formats, "citations": len(citation_pairs),
        },
        agg_uris=[current.value] + [v.value for v in versions],
        expected_crawl_nodes=n_versions,
        citation_pairs=citation_pairs,
    )
    return graphs, manifest


def gen_jstor(base_uri: Uri | str, journals: int = 2, issues_per: int = 2,
              articles_per: int = 3, pages_per: int = 4,
              citation_density: float = 0.0, seed: int = 1,
              ) -> tuple[list[OreGraph], CorpusManifest]:
    """The journal -> issue -> article -> page-image hierarchy.

    Sibling order at every level is a followedBy chain over proxies
    (order is context-local, so proxies carry it).  Each page image is
    itself a small aggregation of its image file, which is what makes
    the crawl node count exceed the journal/issue/article total.  A
    per-journal masthead image is aggregated by the journal and by each
    of its issues, giving the corpus a multi-membership resource with
    isAggregatedBy back-links.
    """
    if min(journals, issues_per, articles_per, pages_per) < 1:
        raise ValueError("all counts must be >= 1")
    if not 0.0 <= citation_density <= 1.0:
        raise ValueError("citation_density must be within [0, 1]")
    base = as_uri(base_uri).value.rstrip("/")
    rng = Lcg(seed)

    journal_graphs: list[OreGraph] = []
    issue_graphs: list[OreGraph] = []
    article_graphs: dict[str, OreGraph] = {}
    page_graphs: list[OreGraph] = []
    article_order: list[Uri] = []

    for j in range(1, journals + 1):
        journal = Uri(f"{base}/journal/{j}")
        masthead = Uri(f"{journal.value}/masthead.png")
        issues = [Uri(f"{journal.value}/issue/{i}") for i in range(1, issues_per + 1)]
        jgraph = new_aggregation(_rem_for(journal), journal, [*issues, masthead])
        jgraph = _meta(jgraph, f"Journal {j}")
        jgraph = _with_chain(jgraph, issues)
        for issue in issues:
            jgraph = mark_nested(jgraph, issue, _rem_for(issue))
        journal_graphs.append(jgraph)

        for i, issue in enumerate(issues, start=1):
            articles = [Uri(f"{issue.value}/article/{a}")
                        for a in range(1, articles_per + 1)]
            igraph = new_aggregation(_rem_for(issue), issue, [*articles, masthead])
            igraph = _meta(igraph, f"Journal {j}, issue {i}")
            igraph = _with_chain(igraph, articles)
            igraph = add_triple(igraph, Triple(Ref(masthead), vocab.IS_AGGREGATED_BY,
                                               Ref(journal)))
            for article in articles:
                igraph = mark_nested(igraph, article, _rem_for(article))
            issue_graphs.append(igraph)

            for a, article in enumerate(articles, start=1):
                pages = [Uri(f"{article.value}/page/{p}")
                         for p in range(1, pages_per + 1)]
                pdf = Uri(f"{article.value}/full.pdf")
                agraph = new_aggregation(_rem_for(article), article, [*pages, pdf])
                agraph = _meta(agraph, f"Journal {j}, issue {i}, article {a}")
                agraph = _with_chain(agraph, pages)
                for page in pages:
                    agraph = mark_nested(agraph, page, _rem_for(page))
                article_graphs[article.value] = agraph
                article_order.append(article)

                for p, page in enumerate(pages, start=1):
                    image = Uri(f"{page.value}/image.png")
                    pgraph = new_aggregation(_rem_for(page), page, [image])
                    pgraph = _meta(pgraph, f"Journal {j}, issue {i}, article {a}, page {p}")
                    page_graphs.append(pgraph)

    citation_pairs: list[tuple[str, str]] = []
    for citing in article_order:
        for cited in article_order:
            if citing == cited:
                continue
            if rng.fraction() < citation_density:
                article_graphs[citing.value] = add_triple(
                    article_graphs[citing.value],
                    Triple(Ref(citing), vocab.REFERENCES, Ref(cited)))
                citation_pairs.append((citing.value, cited.value))

    graphs = (journal_graphs + issue_graphs
              + [article_graphs[a.value] for a in article_order] + page_graphs)
    n_articles = len(article_order)
    manifest = CorpusManifest(
        seed=seed,
        counts={
            "journals": journals,
            "issues": journals * issues_per,
            "articles": n_articles,
            "pages": n_articles * pages_per,
            "formats": n_articles,  # one PDF per article
            "citations": len(citation_pairs),
        },
        agg_uris=[g.agg_uri.value for g in graphs],
        expected_crawl_nodes=len(graphs),
        citation_pairs=citation_pairs,
    )
    return graphs, manifest


# ---------------------------------------------------------------------------
# adversarial corpora

ADVERSARIAL_KINDS = ("cycle", "disconnected", "double_describes", "redirect_loop")


@dataclass
class AdversarialCorpus:
    kind: str
    graphs: list[OreGraph] = field(default_factory=list)
    documents: list[tuple[str, WireDocument]] = field(default_factory=list)
    redirects: dict[str, str] = field(default_factory=dict)


def gen_adversarial(kind: str, base_uri: Uri | str = "http://adversarial.example",
                    ) -> AdversarialCorpus:
    base = as_uri(base_uri).value.rstrip("/")
    if kind == "cycle":
        a, b = Uri(f"{base}/cycle/a"), Uri(f"{base}/cycle/b")
        ga = mark_nested(new_aggregation(_rem_for(a), a, [b]), b, _rem_for(b))
        gb = mark_nested(new_aggregation(_rem_for(b), b, [a]), a, _rem_for(a))
        return AdversarialCorpus(kind, graphs=[_meta(ga, "cycle a"), _meta(gb, "cycle b")])

    if kind == "disconnected":
        agg = Uri(f"{base}/disconnected/agg")
        graph = new_aggregation(_rem_for(agg), agg, [Uri(f"{base}/disconnected/res")])
        graph = add_triple(graph, Triple(
            Ref(Uri(f"{base}/disconnected/elsewhere")), vocab.CREATOR, Literal("orphan")))
        doc = to_rdfxml(graph, check=False)
        return AdversarialCorpus(kind, documents=[("0.rdf", doc)])

    if kind == "double_describes":
        agg = Uri(f"{base}/double/agg")
        graph = new_aggregation(_rem_for(agg), agg, [Uri(f"{base}/double/res")])
        graph = graph.with_triples([Triple(
            Ref(Uri(f"{base}/double/other-rem")), vocab.DESCRIBES, Ref(agg))])
        doc = to_rdfxml(graph, check=False)
        return AdversarialCorpus(kind, documents=[("0.rdf", doc)])

    if kind == "redirect_loop":
        a, b = f"{base}/loop/a", f"{base}/loop/b"
        return AdversarialCorpus(kind, redirects={a: b, b: a})

    raise ValueError(f"unknown adversarial kind {kind!r}; expected one of {ADVERSARIAL_KINDS}")


# ---------------------------------------------------------------------------
# on-disk corpus layout: <root>/<kind>/<n>.rdf, <n>.atom, manifest.json

def atom_variant(graph: OreGraph) -> OreGraph:
    """Same description under the per-format map URI (…/rem.atom)."""
    old = graph.rem_uri.value
    new = old[: -len(".rdf")] + ".atom" if old.endswith(".rdf") else old + ".atom"
    return rename_resource(graph, graph.rem_uri, Uri(new))


def write_corpus(root: Path | str, kind: str, graphs: list[OreGraph],
                 manifest: Optional[CorpusManifest] = None,
                 documents: Optional[list[tuple[str, WireDocument]]] = None,
                 redirects: Optional[dict[str, str]] = None) -> Path:
    out = Path(root) / kind
    out.mkdir(parents=True, exist_ok=True)
    for i, graph in enumerate(graphs):
        (out / f"{i}.rdf").write_bytes(to_rdfxml(graph).data)
        (out / f"{i}.atom").write_bytes(to_atom(atom_variant(graph)).data)
    for name, doc in documents or []:
        (out / name).write_bytes(doc.data)
    if redirects:
        (out / "redirects.json").write_text(json.dumps(redirects, indent=2, sort_keys=True) + "\n")
    if manifest is not None:
        (out / "manifest.json").write_text(json.dumps(manifest.to_json_dict(), indent=2) + "\n")
    return out


@dataclass
class CorpusOnDisk:
    pairs: list[tuple[OreGraph, Optional[OreGraph]]]  # (rdfxml graph, atom graph)
    redirects: dict[str, str]
    manifest: Optional[CorpusManifest]
    skipped: list[tuple[str, str]]  # (filename, reason) for unparseable documents


def load_corpus_dir(path: Path | str) -> CorpusOnDisk:
    """Read a corpus directory back; unparseable files are recorded, not fatal."""
    from .atom import from_atom
    from .errors import OreError

    root = Path(path)
    pairs: list[tuple[OreGraph, Optional[OreGraph]]] = []
    skipped: list[tuple[str, str]] = []
    for rdf_path in sorted(root.glob("*.rdf")):
        try:
            graph = from_rdfxml(WireDocument(WireFormat.RDFXML, rdf_path.read_bytes()))
        except OreError as exc:
            skipped.append((rdf_path.name, f"{type(exc).__name__}: {exc}"))
            continue
        atom_graph = None
        atom_path = rdf_path.with_suffix(".atom")
        if atom_path.exists():
            try:
                atom_graph = from_atom(WireDocument(WireFormat.ATOM, atom_path.read_bytes()))
            except OreError as exc:
                skipped.append((atom_path.name, f"{type(exc).__name__}: {exc}"))
        pairs.append((graph, atom_graph))

    redirects: dict[str, str] = {}
    redirects_path = root / "redirects.json"
    if redirects_path.exists():
        redirects = json.loads(redirects_path.read_text())

    manifest = None
    manifest_path = root / "manifest.json"
    if manifest_path.exists():
        manifest = CorpusManifest.from_json_dict(json.loads(manifest_path.read_text()))
    return CorpusOnDisk(pairs, redirects, manifest, skipped)
