"""Operator surface: validate, convert, serve, crawl, fixture.

Exit codes are stable: 0 success, 1 validation errors present,
2 parse/IO error, 3 network error, 4 usage error.  Every subcommand
honors --json for machine-readable output; the validate report and
crawl result schemas are published under docs/schemas/.
"""

from __future__ import annotations

import argparse
import json
import logging
import signal
import sys
import threading
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Optional, Sequence

from . import vocab
from .atom import from_atom
from .conneg import SERVER_PREFERENCE
from .discovery import (
    CrawlLimits, UrllibFetcher, ViaFetcher, crawl, crawl_result_to_dict,
    crawl_result_to_json,
)
from .errors import (
    BindFailure, FetchError, NoResourceMap, OreError, TooManyRedirects, XmlMalformed,
)
from .fixtures import (
    ADVERSARIAL_KINDS, atom_variant, gen_adversarial, gen_arxiv, gen_jstor,
    load_corpus_dir, write_corpus,
)
from .rdfxml import from_rdfxml
from .service import ServiceStore, serve
from .validate import validate
from .wire import WireDocument, WireFormat, serialize

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PARSE = 2
EXIT_NETWORK = 3
EXIT_USAGE = 4

logger = logging.getLogger(__name__)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit(2); we map to 4
        raise _UsageError(message)


def _detect_format(data: bytes) -> WireFormat:
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise XmlMalformed(f"not well-formed XML: {exc}") from None
    if root.tag == f"{{{vocab.RDF}}}RDF":
        return WireFormat.RDFXML
    if root.tag in (f"{{{vocab.ATOM}}}entry", f"{{{vocab.ATOM}}}feed"):
        return WireFormat.ATOM
    raise XmlMalformed(f"cannot detect format from root element {root.tag}")


def _load_document(source: str, declared: str) -> WireDocument:
    """Read a resource map from a file path or an http URI."""
    if source.startswith("http://") or source.startswith("https://"):
        status, headers, body = UrllibFetcher()("GET", source, {})
        if status != 200:
            raise NoResourceMap(f"{source} answered {status}")
        data = body
        source_uri = source
    else:
        data = Path(source).read_bytes()
        source_uri = None
    fmt = WireFormat.from_name(declared) if declared != "auto" else _detect_format(data)
    from .uris import Uri
    return WireDocument(fmt, data, source_uri=Uri(source_uri) if source_uri else None)


def _parse_document(doc: WireDocument):
    return from_rdfxml(doc) if doc.format is WireFormat.RDFXML else from_atom(doc)


def _read_config(path: Optional[str]) -> dict[str, str]:
    """Simple key=value config; '#' starts a comment."""
    if not path:
        return {}
    values: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise _UsageError(f"bad config line: {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


# ---------------------------------------------------------------------------
# subcommands

def _cmd_validate(args: argparse.Namespace) -> int:
    doc = _load_document(args.input, args.format)
    graph = _parse_document(doc)
    report = validate(graph, args.level)
    if args.json:
        print(report.to_json(), end="")
    else:
        for f in report.findings:
            subject = f" {f.subject}" if f.subject else ""
            print(f"{f.severity.upper():7s} {f.code}{subject}: {f.message}")
        print(f"valid: {str(report.valid).lower()} ({report.level}, "
              f"{len(report.errors())} errors, "
              f"{len(report.findings) - len(report.errors())} warnings)")
    return EXIT_OK if report.valid else EXIT_VALIDATION


def _cmd_convert(args: argparse.Namespace) -> int:
    doc = _load_document(args.input, args.format)
    graph = _parse_document(doc)
    target = WireFormat.from_name(args.to)
    out_doc = serialize(graph, target, check=False)
    if args.output in (None, "-"):
        sys.stdout.buffer.write(out_doc.data)
    else:
        Path(args.output).write_bytes(out_doc.data)
    if args.json:
        print(json.dumps({
            "format": target.value,
            "media_type": target.media_type,
            "bytes": len(out_doc.data),
            "output": args.output or "-",
        }, indent=2))
    return EXIT_OK


def _publish_corpus(store: ServiceStore, corpus_dir: str,
                    default_format: Optional[WireFormat]) -> int:
    corpus = load_corpus_dir(corpus_dir)
    for name, reason in corpus.skipped:
        logger.warning("skipping %s: %s", name, reason)
    count = 0
    for rdf_graph, atom_graph in corpus.pairs:
        graphs = [rdf_graph] + ([atom_graph] if atom_graph is not None else [])
        formats = [WireFormat.RDFXML, WireFormat.ATOM][: len(graphs)]
        store.publish(graphs, formats, default_format=default_format)
        count += 1
    for source, target in sorted(corpus.redirects.items()):
        store.add_redirect(source, target)
    return count


def _cmd_serve(args: argparse.Namespace, stop_event: Optional[threading.Event] = None) -> int:
    config = _read_config(args.config)
    bind = args.bind or config.get("bind", "127.0.0.1")
    port_raw = args.port if args.port is not None else config.get("port", "8080")
    try:
        port = int(port_raw)
        if not 0 <= port <= 65535:
            raise ValueError
    except (TypeError, ValueError):
        raise _UsageError(f"bad port: {port_raw!r}") from None
    default_name = args.default_format or config.get("default_format")
    default_format = WireFormat.from_name(default_name) if default_name else None
    preference_raw = config.get("preference")
    preference = tuple(WireFormat.from_name(n.strip()) for n in preference_raw.split(",")) \
        if preference_raw else SERVER_PREFERENCE
    base = args.base or config.get("base")
    ui_dir = args.ui_dir or config.get("ui_dir")

    store = ServiceStore(preference)
    count = _publish_corpus(store, args.corpus_dir, default_format)
    handle = serve(store, bind, port, external_base=base, ui_dir=ui_dir)
    if args.json:
        print(json.dumps({"serving": handle.url, "entries": count}, indent=2), flush=True)
    else:
        print(f"serving {count} aggregations at {handle.url} (Ctrl-C to stop)", flush=True)

    stop = stop_event or threading.Event()
    if stop_event is None:
        signal.signal(signal.SIGTERM, lambda *_: stop.set())
        try:
            while not stop.wait(0.5):
                pass
        except KeyboardInterrupt:
            pass
    else:
        stop.wait()
    handle.stop()
    return EXIT_OK


def _cmd_crawl(args: argparse.Namespace) -> int:
    follow = frozenset(x.strip() for x in args.follow.split(",") if x.strip())
    limits = CrawlLimits(max_depth=args.depth, max_nodes=args.max_nodes,
                         max_fetches=args.max_fetches)
    preferred = WireFormat.from_name(args.format) if args.format != "auto" else None
    fetcher = UrllibFetcher()
    if args.via:
        fetcher = ViaFetcher(args.via, fetcher)
    result = crawl(args.seeds, limits, follow, fetcher,
                   preferred=preferred, width=args.width, delay=args.delay)
    payload = crawl_result_to_json(result)
    if args.out:
        Path(args.out).write_text(payload)
    if args.json or not args.out:
        if args.json:
            print(payload, end="")
        else:
            data = crawl_result_to_dict(result)
            for node in data["nodes"]:
                marker = "authoritative" if node["authoritative"] else "non-authoritative"
                print(f"{node['agg_uri']} <- {node['rem_uri']} [{marker}]")
            print(f"nodes: {len(data['nodes'])}, edges: {len(data['edges'])}, "
                  f"errors: {len(data['errors'])}, fetches: {data['fetches']}, "
                  f"truncated: {str(data['truncated']).lower()}")
    if not result.nodes and result.errors:
        return EXIT_NETWORK
    return EXIT_OK


def _cmd_fixture(args: argparse.Namespace) -> int:
    out = Path(args.out)
    manifests: dict[str, dict] = {}
    if args.kind == "arxiv":
        graphs, manifest = gen_arxiv(args.base_uri, args.formats, args.versions, args.seed)
        write_corpus(out, "arxiv", graphs, manifest)
        manifests["arxiv"] = manifest.to_json_dict()
    elif args.kind == "jstor":
        graphs, manifest = gen_jstor(args.base_uri, args.journals, args.issues,
                                     args.articles, args.pages, args.density, args.seed)
        write_corpus(out, "jstor", graphs, manifest)
        manifests["jstor"] = manifest.to_json_dict()
    else:
        kinds = [args.pathology] if args.pathology else list(ADVERSARIAL_KINDS)
        for kind in kinds:
            corpus = gen_adversarial(kind, args.base_uri)
            write_corpus(out / "adversarial", kind, corpus.graphs,
                         documents=corpus.documents, redirects=corpus.redirects)
            manifests[kind] = {"kind": kind, "graphs": len(corpus.graphs),
                               "documents": len(corpus.documents),
                               "redirects": len(corpus.redirects)}
    if args.json:
        print(json.dumps(manifests, indent=2))
    else:
        for name in manifests:
            print(f"wrote {name} corpus under {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(prog="oretk", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a resource map file or URI")
    p.add_argument("input")
    p.add_argument("--level", choices=("strict", "lax"), default="strict")
    p.add_argument("--format", choices=("auto", "rdfxml", "atom"), default="auto")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("convert", help="convert between serializations (canonicalizing)")
    p.add_argument("input")
    p.add_argument("output", nargs="?", help="output path; '-' or absent = stdout")
    p.add_argument("--to", required=True, choices=("rdfxml", "atom"))
    p.add_argument("--format", choices=("auto", "rdfxml", "atom"), default="auto")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("serve", help="publish a corpus directory over HTTP")
    p.add_argument("corpus_dir")
    p.add_argument("--bind", default=None)
    p.add_argument("--port", default=None)
    p.add_argument("--default-format", choices=("rdfxml", "atom"), default=None)
    p.add_argument("--base", default=None, help="advertised base URI")
    p.add_argument("--ui-dir", default=None, help="serve explorer assets from here under /ui")
    p.add_argument("--config", default=None, help="key=value config file (flags win)")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("crawl", help="crawl aggregations from seed URIs")
    p.add_argument("seeds", nargs="+")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--max-nodes", type=int, default=1000)
    p.add_argument("--max-fetches", type=int, default=10000)
    p.add_argument("--follow", default="nested",
                   help="comma list of nested,references,isAggregatedBy")
    p.add_argument("--format", choices=("auto", "rdfxml", "atom"), default="auto")
    p.add_argument("--width", type=int, default=1)
    p.add_argument("--delay", type=float, default=0.0)
    p.add_argument("--via", default=None,
                   help="mirror gateway base URI for corpora authored under a foreign authority")
    p.add_argument("--out", default=None, help="write CrawlResult JSON here")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("fixture", help="generate a fixture corpus")
    p.add_argument("kind", choices=("arxiv", "jstor", "adversarial"))
    p.add_argument("out")
    p.add_argument("--base-uri", default="http://archive.example")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--formats", type=int, default=4)
    p.add_argument("--versions", type=int, default=1)
    p.add_argument("--journals", type=int, default=2)
    p.add_argument("--issues", type=int, default=2)
    p.add_argument("--articles", type=int, default=3)
    p.add_argument("--pages", type=int, default=4)
    p.add_argument("--density", type=float, default=0.0)
    p.add_argument("--pathology", choices=ADVERSARIAL_KINDS, default=None)
    p.add_argument("--json", action="store_true")

    return parser


_COMMANDS = {
    "validate": _cmd_validate,
    "convert": _cmd_convert,
    "serve": _cmd_serve,
    "crawl": _cmd_crawl,
    "fixture": _cmd_fixture,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FetchError, NoResourceMap, TooManyRedirects, BindFailure) as exc:
        print(f"network error: {exc}", file=sys.stderr)
        return EXIT_NETWORK
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OreError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
