"""RDF/XML writer and parser for the aggregation profile.

The writer emits one canonical form: subjects in lexicographic order,
predicates ordered within each subject, blank labels regenerated as
b0, b1, ... in first-use order.  Serializing the same graph twice gives
byte-identical output, which the golden-file tests rely on.

The parser covers the profile subset: rdf:about, rdf:resource, nested
property elements, xml:lang, rdf:datatype, rdf:nodeID, xml:base, and
typed node elements.  rdf:parseType, reification (rdf:ID), and
rdf:li/containers raise UnsupportedRdfXml; the profile never needs them
and a full RDF/XML grammar is out of scope.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional
from urllib.parse import urljoin, urlsplit

from . import vocab, xmlout
from .errors import (
    AmbiguousDescribes, BadUri, BlankIdentity, IdentityClash, InvalidGraph,
    NoBase, NoDescribes, UnsupportedRdfXml, XmlMalformed,
)
from .model import Blank, Literal, OreGraph, Ref, Term, Triple, triple_key
from .uris import Uri
from .wire import WireDocument, WireFormat

__all__ = ["to_rdfxml", "from_rdfxml"]

_RDF = vocab.RDF
_XML_BASE = "{http://www.w3.org/XML/1998/namespace}base"
_XML_LANG = "{http://www.w3.org/XML/1998/namespace}lang"

_NCNAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")

# Namespaces with fixed prefixes; atom is excluded because no predicate
# lives there (its namespace URI has no trailing separator).
_WELL_KNOWN = (
    (vocab.RDF, "rdf"),
    (vocab.RDFS, "rdfs"),
    (vocab.OWL, "owl"),
    (vocab.ORE, "ore"),
    (vocab.DCTERMS, "dcterms"),
    (vocab.FST, "fst"),
    (vocab.XSD, "xsd"),
)

# Declared on every document root, used or not, exactly once each.
ALWAYS_DECLARED = {
    "xmlns:atom": vocab.ATOM,
    "xmlns:dcterms": vocab.DCTERMS,
    "xmlns:ore": vocab.ORE,
    "xmlns:rdf": vocab.RDF,
}


# ---------------------------------------------------------------------------
# writing

def _split_predicate(uri: Uri) -> tuple[str, str]:
    """Split into (namespace, ncname local part) or raise ValueError."""
    value = uri.value
    for ns, _prefix in _WELL_KNOWN:
        if value.startswith(ns) and _NCNAME.match(value[len(ns):]):
            return ns, value[len(ns):]
    cut = max(value.rfind("#"), value.rfind("/"))
    local = value[cut + 1:]
    if cut <= 0 or not _NCNAME.match(local):
        raise ValueError(f"predicate {value!r} cannot be written as a QName")
    return value[: cut + 1], local


def plan_namespaces(predicates: Iterable[Uri]) -> tuple[dict[str, str], Callable[[Uri], str]]:
    """Namespace declarations plus a predicate->QName function.

    Prefixes are fixed for the well-known namespaces; anything else is
    minted ns0, ns1, ... in lexicographic namespace order.
    """
    known_prefix = dict(_WELL_KNOWN)
    used: dict[str, str] = {}  # namespace -> prefix
    for pred in predicates:
        ns, _local = _split_predicate(pred)
        if ns not in used:
            used[ns] = known_prefix.get(ns, "")
    minted = sorted(ns for ns, prefix in used.items() if not prefix)
    for i, ns in enumerate(minted):
        used[ns] = f"ns{i}"

    decls = dict(ALWAYS_DECLARED)
    for ns, prefix in used.items():
        decls[f"xmlns:{prefix}"] = ns

    def qname(pred: Uri) -> str:
        ns, local = _split_predicate(pred)
        return f"{used[ns]}:{local}"

    return decls, qname


def relabel_blanks(triples: Iterable[Triple]) -> list[Triple]:
    """Canonical blank labels b0, b1, ... in first-use order over the
    sorted triple list.  Pure function of the input triple set."""
    ordered = sorted(triples, key=triple_key)
    labels: dict[str, str] = {}

    def fresh(term: Term) -> Term:
        if isinstance(term, Blank):
            if term.label not in labels:
                labels[term.label] = f"b{len(labels)}"
            return Blank(labels[term.label])
        return term

    return [Triple(fresh(t.subject), t.predicate, fresh(t.object)) for t in ordered]


def render_descriptions(triples: Iterable[Triple], qname: Callable[[Uri], str],
                        indent: int) -> list[str]:
    """rdf:Description blocks in canonical order, as indented lines."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    lines: list[str] = []
    ordered = sorted(triples, key=triple_key)
    current: Optional[Term] = None
    block_open = False
    for t in ordered:
        if not block_open or t.subject != current:
            if block_open:
                lines.append(f"{pad}</rdf:Description>")
            current = t.subject
            block_open = True
            if isinstance(current, Ref):
                attrs = {"rdf:about": current.uri.value}
            else:
                attrs = {"rdf:nodeID": current.label}
            lines.append(pad + xmlout.open_tag("rdf:Description", attrs))
        name = qname(t.predicate)
        obj = t.object
        if isinstance(obj, Ref):
            lines.append(inner + xmlout.empty_tag(name, {"rdf:resource": obj.uri.value}))
        elif isinstance(obj, Blank):
            lines.append(inner + xmlout.empty_tag(name, {"rdf:nodeID": obj.label}))
        else:
            attrs = {}
            if obj.datatype is not None:
                attrs["rdf:datatype"] = obj.datatype.value
            if obj.lang:
                attrs["xml:lang"] = obj.lang
            lines.append(inner + xmlout.text_element(name, obj.text, attrs))
    if block_open:
        lines.append(f"{pad}</rdf:Description>")
    return lines


def to_rdfxml(graph: OreGraph, *, check: bool = True) -> WireDocument:
    """Canonical RDF/XML serialization of the graph.

    check=False skips the validity gate; the adversarial fixture
    generator uses it to emit deliberately broken corpora.
    """
    if check:
        from .validate import validate

        report = validate(graph, "lax")
        if not report.valid:
            raise InvalidGraph(report)
    triples = relabel_blanks(graph.triples)
    decls, qname = plan_namespaces({t.predicate for t in triples})
    lines = [xmlout.open_tag("rdf:RDF", decls)]
    lines += render_descriptions(triples, qname, indent=1)
    lines.append("</rdf:RDF>")
    return WireDocument(WireFormat.RDFXML, xmlout.document(lines))


# ---------------------------------------------------------------------------
# parsing

@dataclass
class _ParseContext:
    source_uri: Optional[Uri]
    counter: int = 0
    triples: list[Triple] = field(default_factory=list)

    def mint_blank(self) -> Blank:
        self.counter += 1
        return Blank(f"genid{self.counter}")


def parse_xml_bytes(data: bytes) -> ET.Element:
    try:
        return ET.fromstring(data)
    except ET.ParseError as exc:
        raise XmlMalformed(f"not well-formed XML: {exc}") from None


def _tag_parts(tag: str) -> tuple[str, str]:
    if not tag.startswith("{"):
        raise XmlMalformed(f"element {tag!r} has no namespace")
    ns, _, local = tag[1:].partition("}")
    return ns, local


def resolve_reference(raw: str, base: Optional[str], ctx: _ParseContext) -> Uri:
    """Resolve a URI reference against xml:base, then the source URI."""
    try:
        parts = urlsplit(raw)
    except ValueError as exc:
        raise XmlMalformed(f"unparseable URI reference {raw!r}: {exc}") from None
    try:
        if parts.scheme:
            return Uri(raw)
        effective = base or (ctx.source_uri.value if ctx.source_uri else None)
        if effective is None:
            raise NoBase(f"relative URI {raw!r} with no xml:base or source URI")
        return Uri(urljoin(effective, raw))
    except BadUri as exc:
        raise XmlMalformed(str(exc)) from None


def _scoped(elem: ET.Element, base: Optional[str], lang: Optional[str],
            ctx: _ParseContext) -> tuple[Optional[str], Optional[str]]:
    xb = elem.get(_XML_BASE)
    if xb is not None:
        base = resolve_reference(xb, base, ctx).value
    xl = elem.get(_XML_LANG)
    if xl is not None:
        lang = xl or None
    return base, lang


_FORBIDDEN_LOCALS = {"li", "Seq", "Bag", "Alt", "Statement"}


def _check_rdf_construct(ns: str, local: str) -> None:
    if ns == _RDF and local in _FORBIDDEN_LOCALS:
        raise UnsupportedRdfXml(f"rdf:{local} is outside the supported profile")


def parse_node_element(elem: ET.Element, base: Optional[str], lang: Optional[str],
                       ctx: _ParseContext):
    """Parse a node element, record its triples, and return its subject."""
    ns, local = _tag_parts(elem.tag)
    _check_rdf_construct(ns, local)
    base, lang = _scoped(elem, base, lang, ctx)

    about = node_id = None
    for key, value in elem.attrib.items():
        if key == f"{{{_RDF}}}about":
            about = value
        elif key == f"{{{_RDF}}}nodeID":
            node_id = value
        elif key in (_XML_BASE, _XML_LANG):
            continue
        elif key in (f"{{{_RDF}}}ID", f"{{{_RDF}}}parseType"):
            raise UnsupportedRdfXml(f"{key.rsplit('}', 1)[-1]} is outside the supported profile")
        else:
            raise UnsupportedRdfXml(f"property attribute {key!r} is outside the supported profile")
    if about is not None and node_id is not None:
        raise XmlMalformed("node element carries both rdf:about and rdf:nodeID")
    if about is not None:
        subject = Ref(resolve_reference(about, base, ctx))
    elif node_id is not None:
        subject = Blank(node_id)
    else:
        subject = ctx.mint_blank()

    if (ns, local) != (_RDF, "Description"):
        try:
            type_uri = Uri(ns + local)
        except BadUri as exc:
            raise XmlMalformed(str(exc)) from None
        ctx.triples.append(Triple(subject, vocab.TYPE, Ref(type_uri)))

    if elem.text and elem.text.strip():
        raise XmlMalformed("node element has text content")
    for child in elem:
        if child.tail and child.tail.strip():
            raise XmlMalformed("stray text between property elements")
        _parse_property_element(child, subject, base, lang, ctx)
    return subject


def _parse_property_element(elem: ET.Element, subject, base: Optional[str],
                            lang: Optional[str], ctx: _ParseContext) -> None:
    ns, local = _tag_parts(elem.tag)
    _check_rdf_construct(ns, local)
    base, lang = _scoped(elem, base, lang, ctx)
    try:
        predicate = Uri(ns + local)
    except BadUri as exc:
        raise XmlMalformed(str(exc)) from None

    resource = node_id = datatype = None
    for key, value in elem.attrib.items():
        if key == f"{{{_RDF}}}resource":
            resource = value
        elif key == f"{{{_RDF}}}nodeID":
            node_id = value
        elif key == f"{{{_RDF}}}datatype":
            datatype = value
        elif key in (_XML_BASE, _XML_LANG):
            continue
        elif key == f"{{{_RDF}}}parseType":
            raise UnsupportedRdfXml(f"rdf:parseType={value!r} is outside the supported profile")
        elif key == f"{{{_RDF}}}ID":
            raise UnsupportedRdfXml("rdf:ID reification is outside the supported profile")
        else:
            raise UnsupportedRdfXml(f"property attribute {key!r} is outside the supported profile")

    children = list(elem)
    has_text = bool(elem.text and elem.text.strip())
    if resource is not None and node_id is not None:
        raise XmlMalformed("property element carries both rdf:resource and rdf:nodeID")
    if (resource is not None or node_id is not None) and (children or has_text):
        raise XmlMalformed("property element mixes a reference with content")
    if datatype is not None and (resource is not None or node_id is not None or children):
        raise XmlMalformed("rdf:datatype applies to literal content only")

    if resource is not None:
        obj: Term = Ref(resolve_reference(resource, base, ctx))
    elif node_id is not None:
        obj = Blank(node_id)
    elif children:
        if len(children) > 1:
            raise XmlMalformed("property element contains more than one node element")
        if has_text or (children[0].tail and children[0].tail.strip()):
            raise XmlMalformed("property element mixes text and element content")
        obj = parse_node_element(children[0], base, lang, ctx)
    else:
        text = elem.text or ""
        if datatype is not None:
            obj = Literal(text, datatype=resolve_reference(datatype, base, ctx))
        elif lang:
            obj = Literal(text, lang=lang)
        else:
            obj = Literal(text)
    ctx.triples.append(Triple(subject, predicate, obj))


def graph_from_triples(triples: Iterable[Triple]) -> OreGraph:
    """Recover the designated URIs from the unique ore:describes triple."""
    triple_set = frozenset(triples)
    describes = sorted((t for t in triple_set if t.predicate == vocab.DESCRIBES),
                       key=triple_key)
    if not describes:
        raise NoDescribes("document carries no ore:describes triple")
    if len(describes) > 1:
        raise AmbiguousDescribes(f"document carries {len(describes)} ore:describes triples")
    anchor = describes[0]
    if not isinstance(anchor.subject, Ref):
        raise BlankIdentity("resource map identity is a blank node")
    if isinstance(anchor.object, Blank):
        raise BlankIdentity("aggregation identity is a blank node")
    if not isinstance(anchor.object, Ref):
        raise XmlMalformed("ore:describes object is a literal")
    rem, agg = anchor.subject.uri, anchor.object.uri
    if rem == agg:
        raise IdentityClash("resource map URI equals aggregation URI")
    return OreGraph(rem, agg, triple_set)


def from_rdfxml(doc: WireDocument) -> OreGraph:
    if doc.format is not WireFormat.RDFXML:
        raise ValueError(f"expected an rdfxml document, got {doc.format.value}")
    root = parse_xml_bytes(doc.data)
    if root.tag != f"{{{_RDF}}}RDF":
        raise XmlMalformed(f"root element is not rdf:RDF: {root.tag}")
    ctx = _ParseContext(source_uri=doc.source_uri)
    base, lang = _scoped(root, None, None, ctx)
    if root.text and root.text.strip():
        raise XmlMalformed("rdf:RDF has text content")
    for child in root:
        if child.tail and child.tail.strip():
            raise XmlMalformed("stray text between node elements")
        parse_node_element(child, base, lang, ctx)
    return graph_from_triples(ctx.triples)
