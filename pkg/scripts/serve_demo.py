#!/usr/bin/env python3
"""Serve the committed fixture corpora plus the explorer UI.

Usage: python3 scripts/serve_demo.py [PORT]

Publishes the jstor and arxiv corpora from fixtures/, mounts the
explorer (if frontend/dist exists) under /ui, and prints a few URLs to
poke at. Ctrl-C stops it.
"""

from __future__ import annotations

import sys
import time
from pathlib import Path
from urllib.parse import quote

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from oretk.fixtures import load_corpus_dir  # noqa: E402
from oretk.service import ServiceStore, serve  # noqa: E402
from oretk.wire import WireFormat  # noqa: E402


def main() -> None:
    port = int(sys.argv[1]) if len(sys.argv) > 1 else 8080
    store = ServiceStore()
    seeds = []
    for kind in ("jstor", "arxiv"):
        corpus = load_corpus_dir(ROOT / "fixtures" / kind)
        for rdf_graph, atom_graph in corpus.pairs:
            graphs = [rdf_graph] + ([atom_graph] if atom_graph else [])
            store.publish(graphs, [WireFormat.RDFXML, WireFormat.ATOM][: len(graphs)])
        if corpus.manifest:
            seeds.append(corpus.manifest.agg_uris[0])

    ui_dir = ROOT / "frontend" / "dist"
    handle = serve(store, "127.0.0.1", port,
                   ui_dir=str(ui_dir) if ui_dir.is_dir() else None)
    print(f"serving {len(store.entries())} aggregations at {handle.url}", flush=True)
    for seed in seeds:
        print(f"  conneg : curl -i -H 'Accept: application/atom+xml' "
              f"'{handle.url}/mirror/{quote(seed, safe='')}'")
        print(f"  crawl  : curl '{handle.url}/api/crawl?seed={seed}&depth=1'")
    if ui_dir.is_dir():
        print(f"  explorer : {handle.url}/ui/")
    else:
        print("  (build the explorer with `npm run build` in frontend/ to get /ui)")
    try:
        while True:
            time.sleep(1)
    except KeyboardInterrupt:
        handle.stop()
        print("stopped")


if __name__ == "__main__":
    main()
