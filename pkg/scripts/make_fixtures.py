#!/usr/bin/env python3
"""Regenerate the committed golden fixtures.

Writes fixtures/fig2.{rdf,atom}, the arxiv and jstor corpora, the
adversarial corpora, and the JSON expansion fixtures the explorer UI
tests replay. Output is deterministic; rerunning must be a no-op diff.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from oretk.atom import to_atom                       # noqa: E402
from oretk.fixtures import (                         # noqa: E402
    ADVERSARIAL_KINDS, atom_variant, example_graph, gen_adversarial,
    gen_arxiv, gen_jstor, write_corpus,
)
from oretk.rdfxml import to_rdfxml                   # noqa: E402
from oretk.service import Request, Service, ServiceStore  # noqa: E402

ARXIV_BASE = "http://archive.example/arxiv"
JSTOR_BASE = "http://archive.example/jstor"
JSTOR_PARAMS = dict(journals=2, issues_per=2, articles_per=3, pages_per=4,
                    citation_density=0.1, seed=7)


def main() -> None:
    fixtures = ROOT / "fixtures"
    fixtures.mkdir(exist_ok=True)

    fig2 = example_graph()
    (fixtures / "fig2.rdf").write_bytes(to_rdfxml(fig2).data)
    (fixtures / "fig2.atom").write_bytes(to_atom(fig2).data)
    print("wrote fixtures/fig2.{rdf,atom}")

    graphs, manifest = gen_arxiv(ARXIV_BASE, n_formats=4, n_versions=3, seed=1)
    write_corpus(fixtures, "arxiv", graphs, manifest)
    print(f"wrote fixtures/arxiv ({len(graphs)} aggregations)")

    graphs, manifest = gen_jstor(JSTOR_BASE, **JSTOR_PARAMS)
    write_corpus(fixtures, "jstor", graphs, manifest)
    print(f"wrote fixtures/jstor ({len(graphs)} aggregations)")

    for kind in ADVERSARIAL_KINDS:
        corpus = gen_adversarial(kind)
        write_corpus(fixtures / "adversarial", kind, corpus.graphs,
                     documents=corpus.documents, redirects=corpus.redirects)
    print("wrote fixtures/adversarial/{" + ",".join(ADVERSARIAL_KINDS) + "}")

    export_ui_fixtures(graphs)


def export_ui_fixtures(jstor_graphs) -> None:
    """Real /api/crawl responses for the explorer's replay tests."""
    store = ServiceStore()
    for g in jstor_graphs:
        store.publish([g, atom_variant(g)])
    service = Service(store, "http://archive.example")

    out = ROOT / "frontend" / "test" / "fixtures"
    out.mkdir(parents=True, exist_ok=True)
    wanted = {
        "journal1-depth0.json": f"{JSTOR_BASE}/journal/1",
        "issue1-depth0.json": f"{JSTOR_BASE}/journal/1/issue/1",
        "article1-depth0.json": f"{JSTOR_BASE}/journal/1/issue/1/article/1",
    }
    for name, seed in wanted.items():
        response = service.handle_request(Request(
            "GET", f"http://archive.example/api/crawl?seed={seed}&depth=0"))
        assert response.status == 200, (name, response.status)
        (out / name).write_bytes(response.body)
    print(f"wrote {len(wanted)} explorer fixtures under frontend/test/fixtures")


if __name__ == "__main__":
    main()
