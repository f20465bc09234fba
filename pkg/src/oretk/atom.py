"""Atom entry serialization of a resource map.

One aggregation maps to one Atom entry: atom:id is the aggregation URI,
the rel="self" link is the resource map URI, and each aggregated
resource becomes a link whose rel is the full aggregates term URI.
Three triples ride implicitly on those natives: the describes triple
and the two rdf:type triples for the map and the aggregation.  Every
other triple is carried verbatim inside a single ore:triples extension
element as RDF/XML, so extraction recovers exactly the triple set the
RDF/XML serialization carries.

atom:title and atom:updated are display projections (from dcterms:title
on the aggregation and dcterms:modified on the map); extraction ignores
them because the underlying triples travel in ore:triples unchanged.
"""

from __future__ import annotations

import logging
from typing import Optional

from . import vocab, xmlout
from .errors import (
    AmbiguousDescribes, InvalidGraph, NoDescribes, NotSingleEntry, XmlMalformed,
)
from .model import Literal, OreGraph, Ref, Triple
from .rdfxml import (
    _ParseContext, graph_from_triples, parse_node_element, parse_xml_bytes,
    plan_namespaces, relabel_blanks, render_descriptions, resolve_reference, _scoped,
)
from .uris import Uri
from .wire import WireDocument, WireFormat

__all__ = ["to_atom", "from_atom", "EPOCH_UPDATED"]

logger = logging.getLogger(__name__)

_ATOM = vocab.ATOM
_AGGREGATES_REL = vocab.AGGREGATES.value

EPOCH_UPDATED = "1970-01-01T00:00:00Z"


def _native_triples(graph: OreGraph) -> set[Triple]:
    natives = {
        Triple(Ref(graph.rem_uri), vocab.DESCRIBES, Ref(graph.agg_uri)),
        Triple(Ref(graph.rem_uri), vocab.TYPE, Ref(vocab.RESOURCE_MAP)),
        Triple(Ref(graph.agg_uri), vocab.TYPE, Ref(vocab.AGGREGATION)),
    }
    natives |= {
        t for t in graph.match(Ref(graph.agg_uri), vocab.AGGREGATES)
        if isinstance(t.object, Ref)
    }
    return natives


def _display_literal(graph: OreGraph, subject: Ref, predicate: Uri) -> Optional[str]:
    literals = [o for o in graph.objects(subject, predicate) if isinstance(o, Literal)]
    return literals[0].text if literals else None


def to_atom(graph: OreGraph, *, check: bool = True) -> WireDocument:
    if check:
        from .validate import validate

        report = validate(graph, "lax")
        if not report.valid:
            raise InvalidGraph(report)

    carried = relabel_blanks(graph.triples - frozenset(_native_triples(graph)))
    decls, qname = plan_namespaces({t.predicate for t in carried})

    title = _display_literal(graph, Ref(graph.agg_uri), vocab.TITLE) or graph.agg_uri.value
    updated = _display_literal(graph, Ref(graph.rem_uri), vocab.MODIFIED)
    if updated is None:
        updated = EPOCH_UPDATED
        logger.warning(
            "resource map %s has no dcterms:modified; atom:updated set to the epoch placeholder",
            graph.rem_uri,
        )

    members = sorted(
        (t.object.uri.value for t in graph.match(Ref(graph.agg_uri), vocab.AGGREGATES)
         if isinstance(t.object, Ref))
    )

    lines = [xmlout.open_tag("atom:entry", decls)]
    lines.append("  " + xmlout.text_element("atom:id", graph.agg_uri.value))
    lines.append("  " + xmlout.text_element("atom:title", title))
    lines.append("  " + xmlout.text_element("atom:updated", updated))
    lines.append("  " + xmlout.empty_tag(
        "atom:link", {"href": graph.rem_uri.value, "rel": "self"}))
    for member in members:
        lines.append("  " + xmlout.empty_tag(
            "atom:link", {"href": member, "rel": _AGGREGATES_REL}))
    if carried:
        lines.append("  " + xmlout.open_tag("ore:triples"))
        lines += render_descriptions(carried, qname, indent=2)
        lines.append("  </ore:triples>")
    lines.append("</atom:entry>")
    return WireDocument(WireFormat.ATOM, xmlout.document(lines))


def from_atom(doc: WireDocument) -> OreGraph:
    """GRDDL-style extraction: native elements plus ore:triples content."""
    if doc.format is not WireFormat.ATOM:
        raise ValueError(f"expected an atom document, got {doc.format.value}")
    root = parse_xml_bytes(doc.data)
    ctx = _ParseContext(source_uri=doc.source_uri)
    base, lang = _scoped(root, None, None, ctx)

    if root.tag == f"{{{_ATOM}}}entry":
        entry = root
    elif root.tag == f"{{{_ATOM}}}feed":
        entries = [e for e in root if e.tag == f"{{{_ATOM}}}entry"]
        if len(entries) != 1:
            raise NotSingleEntry(
                f"expected exactly one entry in the feed, found {len(entries)}")
        entry = entries[0]
        base, lang = _scoped(entry, base, lang, ctx)
    else:
        raise XmlMalformed(f"root element is not an Atom entry or feed: {root.tag}")

    agg_uri: Optional[Uri] = None
    self_hrefs: list[Uri] = []
    aggregated: list[Uri] = []

    for child in entry:
        if child.tag == f"{{{_ATOM}}}id":
            agg_uri = resolve_reference((child.text or "").strip(), base, ctx)
        elif child.tag == f"{{{_ATOM}}}link":
            href = child.get("href")
            if href is None:
                raise XmlMalformed("atom:link without href")
            rel = child.get("rel", "alternate")
            target = resolve_reference(href, base, ctx)
            if rel == "self":
                self_hrefs.append(target)
            elif rel == _AGGREGATES_REL:
                aggregated.append(target)
        elif child.tag == f"{{{vocab.ORE}}}triples":
            inner_base, inner_lang = _scoped(child, base, lang, ctx)
            for node in child:
                parse_node_element(node, inner_base, inner_lang, ctx)

    if agg_uri is None:
        raise NoDescribes("entry has no atom:id; cannot recover the aggregation URI")
    unique_selfs = sorted({u.value for u in self_hrefs})
    if not unique_selfs:
        raise NoDescribes("entry has no rel=\"self\" link; cannot recover the map URI")
    if len(unique_selfs) > 1:
        raise AmbiguousDescribes("entry carries more than one rel=\"self\" link")
    rem_uri = Uri(unique_selfs[0])

    ctx.triples.append(Triple(Ref(rem_uri), vocab.DESCRIBES, Ref(agg_uri)))
    ctx.triples.append(Triple(Ref(rem_uri), vocab.TYPE, Ref(vocab.RESOURCE_MAP)))
    ctx.triples.append(Triple(Ref(agg_uri), vocab.TYPE, Ref(vocab.AGGREGATION)))
    for member in aggregated:
        ctx.triples.append(Triple(Ref(agg_uri), vocab.AGGREGATES, Ref(member)))
    return graph_from_triples(ctx.triples)
