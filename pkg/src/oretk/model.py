"""Triple-graph model for resource aggregations.

An Aggregation is a conceptual resource: it has a URI but no
representation of its own.  A Resource Map is the document resource
whose representation describes exactly one Aggregation.  Both live in
an OreGraph: an immutable set of triples plus the two designated URIs.
All operations return new graphs; nothing here mutates.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Optional, Union

from . import vocab
from .errors import (
    BadUri,
    BlankIdentity,
    DescribesImmutable,
    DuplicateProxy,
    IdentityClash,
    NotAggregated,
)
from .uris import Uri, as_uri

__all__ = [
    "Uri", "as_uri", "Ref", "Literal", "Blank", "Term", "Node", "Triple",
    "OreGraph", "Proxy", "new_aggregation", "add_triple", "create_proxy",
    "mark_nested", "add_similar_to", "infer", "is_connected",
    "proxies_of", "rename_resource", "term_key", "triple_key",
]


@dataclass(frozen=True)
class Ref:
    """A term naming a resource by URI."""
    uri: Uri


@dataclass(frozen=True)
class Literal:
    """A literal term: lexical form plus optional language tag or datatype.

    Literals compare exactly by (text, lang, datatype); there is no
    value-space canonicalization ("1" and "01" are different literals).
    """
    text: str
    lang: Optional[str] = None
    datatype: Optional[Uri] = None

    def __post_init__(self) -> None:
        if self.lang and self.datatype:
            raise ValueError("a literal carries a language tag or a datatype, not both")


@dataclass(frozen=True)
class Blank:
    """A blank node with a document-scoped label."""
    label: str


Term = Union[Ref, Literal, Blank]
Node = Union[Ref, Blank]


def term_key(t: Term) -> tuple:
    """Deterministic sort key over terms: URIs, then blanks, then literals.

    Blank labels order length-first so the canonical labels b0..b9, b10
    sort in assignment order; keys with different leading tags never
    compare beyond the tag.
    """
    if isinstance(t, Ref):
        return (0, t.uri.value, "", "")
    if isinstance(t, Blank):
        return (1, len(t.label), t.label, "")
    return (2, t.text, t.lang or "", t.datatype.value if t.datatype else "")


@dataclass(frozen=True)
class Triple:
    subject: Node
    predicate: Uri
    object: Term

    def __post_init__(self) -> None:
        if not isinstance(self.subject, (Ref, Blank)):
            raise TypeError("triple subject must be a Ref or Blank")
        if not isinstance(self.predicate, Uri):
            raise TypeError("triple predicate must be a Uri")
        if not isinstance(self.object, (Ref, Literal, Blank)):
            raise TypeError("triple object must be a Ref, Literal, or Blank")


def triple_key(t: Triple) -> tuple:
    return (term_key(t.subject), t.predicate.value, term_key(t.object))


@dataclass(frozen=True)
class Proxy:
    """A resource standing for an aggregated resource within one aggregation."""
    proxy_uri: Uri
    proxy_for: Uri
    proxy_in: Uri


@dataclass(frozen=True)
class OreGraph:
    """A resource map in memory: the two designated URIs plus the triples.

    Invariants (enforced by the construction operations and reported by
    validate(), not by this dataclass): exactly one (rem_uri,
    ore:describes, agg_uri) triple, rem != agg, and a connected
    undirected graph.  Adversarial values remain constructible so the
    validator has something to report on.
    """
    rem_uri: Uri
    agg_uri: Uri
    triples: frozenset[Triple] = field(default_factory=frozenset)

    def match(self, s: Optional[Node] = None, p: Optional[Uri] = None,
              o: Optional[Term] = None) -> Iterator[Triple]:
        """Triples matching the pattern; None is a wildcard."""
        for t in self.triples:
            if s is not None and t.subject != s:
                continue
            if p is not None and t.predicate != p:
                continue
            if o is not None and t.object != o:
                continue
            yield t

    def has(self, s: Optional[Node] = None, p: Optional[Uri] = None,
            o: Optional[Term] = None) -> bool:
        return next(self.match(s, p, o), None) is not None

    def objects(self, s: Node, p: Uri) -> list[Term]:
        return sorted((t.object for t in self.match(s, p)), key=term_key)

    def subjects(self, p: Uri, o: Optional[Term] = None) -> list[Node]:
        return sorted({t.subject for t in self.match(None, p, o)}, key=term_key)

    def sorted_triples(self) -> list[Triple]:
        return sorted(self.triples, key=triple_key)

    def with_triples(self, extra: Iterable[Triple]) -> "OreGraph":
        return replace(self, triples=self.triples | frozenset(extra))

    def __len__(self) -> int:
        return len(self.triples)


def _identity_uri(value: Uri | str, role: str) -> Uri:
    uri = as_uri(value)
    if not uri.is_http:
        raise BadUri(f"{role} must be identified by an http URI, got {uri}")
    return uri


def new_aggregation(rem_uri: Uri | str, agg_uri: Uri | str,
                    aggregated: Iterable[Uri | str] = ()) -> OreGraph:
    """Create a graph describing one aggregation with the given members.

    Duplicate member URIs collapse (set semantics).  An empty member
    list is constructible; strict validation flags it later.
    """
    rem = _identity_uri(rem_uri, "resource map")
    agg = _identity_uri(agg_uri, "aggregation")
    if rem == agg:
        raise IdentityClash("resource map and aggregation must have distinct URIs")
    members: list[Uri] = []
    for r in aggregated:
        uri = _identity_uri(r, "aggregated resource")
        if uri == agg:
            raise IdentityClash(f"aggregation cannot aggregate itself: {uri}")
        if uri not in members:
            members.append(uri)
    triples = {
        Triple(Ref(rem), vocab.DESCRIBES, Ref(agg)),
        Triple(Ref(rem), vocab.TYPE, Ref(vocab.RESOURCE_MAP)),
        Triple(Ref(agg), vocab.TYPE, Ref(vocab.AGGREGATION)),
    }
    triples |= {Triple(Ref(agg), vocab.AGGREGATES, Ref(r)) for r in members}
    return OreGraph(rem, agg, frozenset(triples))


def add_triple(graph: OreGraph, t: Triple) -> OreGraph:
    """Insert one triple.  Connectedness is checked at validate time, not here."""
    if t.predicate == vocab.DESCRIBES:
        raise DescribesImmutable("ore:describes is set at construction only")
    if (t.predicate == vocab.TYPE and isinstance(t.subject, Blank)
            and isinstance(t.object, Ref) and t.object.uri in vocab.MODEL_CLASSES):
        raise BlankIdentity(f"blank node cannot be typed as {t.object.uri}")
    return graph.with_triples([t])


def proxies_of(graph: OreGraph) -> list[Proxy]:
    """All well-formed proxies in the graph (one proxyFor and one proxyIn)."""
    fors: dict[Node, list[Term]] = defaultdict(list)
    ins: dict[Node, list[Term]] = defaultdict(list)
    for t in graph.match(None, vocab.PROXY_FOR):
        fors[t.subject].append(t.object)
    for t in graph.match(None, vocab.PROXY_IN):
        ins[t.subject].append(t.object)
    proxies = []
    for subj in fors.keys() & ins.keys():
        if len(fors[subj]) != 1 or len(ins[subj]) != 1:
            continue
        target, context = fors[subj][0], ins[subj][0]
        if isinstance(subj, Ref) and isinstance(target, Ref) and isinstance(context, Ref):
            proxies.append(Proxy(subj.uri, target.uri, context.uri))
    return sorted(proxies, key=lambda p: p.proxy_uri.value)


def create_proxy(graph: OreGraph, proxy_uri: Uri | str, proxy_for: Uri | str,
                 proxy_in: Uri | str) -> OreGraph:
    """Mint a proxy for proxy_for in the context of proxy_in."""
    puri = _identity_uri(proxy_uri, "proxy")
    target = _identity_uri(proxy_for, "aggregated resource")
    context = _identity_uri(proxy_in, "aggregation")
    if puri in (target, context):
        raise IdentityClash("proxy URI must differ from its resource and aggregation")
    if not graph.has(Ref(context), vocab.AGGREGATES, Ref(target)):
        raise NotAggregated(f"{context} does not aggregate {target}")
    for p in proxies_of(graph):
        if p.proxy_for == target and p.proxy_in == context:
            raise DuplicateProxy(f"{p.proxy_uri} already stands for {target} in {context}")
    return graph.with_triples([
        Triple(Ref(puri), vocab.PROXY_FOR, Ref(target)),
        Triple(Ref(puri), vocab.PROXY_IN, Ref(context)),
        Triple(Ref(puri), vocab.TYPE, Ref(vocab.PROXY)),
    ])


def mark_nested(graph: OreGraph, resource: Uri | str, nested_rem: Uri | str) -> OreGraph:
    """State that an aggregated resource is itself an aggregation,
    described by nested_rem.  Multiple maps per aggregation are legal."""
    res = _identity_uri(resource, "aggregated resource")
    rem = _identity_uri(nested_rem, "resource map")
    if not graph.has(Ref(graph.agg_uri), vocab.AGGREGATES, Ref(res)):
        raise NotAggregated(f"{graph.agg_uri} does not aggregate {res}")
    return graph.with_triples([Triple(Ref(res), vocab.IS_DESCRIBED_BY, Ref(rem))])


def add_similar_to(graph: OreGraph, other: Uri | str) -> OreGraph:
    """Link the aggregation to a somehow-equivalent resource.

    Non-http schemes (doi:, info:) are allowed here and only here among
    the model relations.
    """
    uri = as_uri(other)  # absolute, any scheme
    return graph.with_triples([Triple(Ref(graph.agg_uri), vocab.SIMILAR_TO, Ref(uri))])


def infer(graph: OreGraph) -> OreGraph:
    """Closure under the inverse and subproperty tables.

    Monotone and idempotent; the input graph is not touched.  Inverses
    apply only when the object is a URI term (a literal or blank cannot
    become a subject of the flipped triple).
    """
    triples = set(graph.triples)
    while True:
        new: set[Triple] = set()
        for t in triples:
            inv = vocab.INVERSES.get(t.predicate)
            if inv is not None and isinstance(t.object, Ref):
                new.add(Triple(t.object, inv, t.subject))
            sup = vocab.SUBPROPERTIES.get(t.predicate)
            if sup is not None:
                new.add(Triple(t.subject, sup, t.object))
        if new <= triples:
            break
        triples |= new
    return replace(graph, triples=frozenset(triples))


def _node_id(t: Term) -> Optional[tuple[str, str]]:
    if isinstance(t, Ref):
        return ("uri", t.uri.value)
    if isinstance(t, Blank):
        return ("blank", t.label)
    return None  # literals are leaves attached to their subject


def is_connected(graph: OreGraph) -> bool:
    """True iff every node is reachable from the aggregation URI over
    undirected edges.

    Literal objects are leaf nodes attached to their own subject, so
    they are reachable exactly when their subject is and never bridge
    two components.
    """
    adjacency: dict[tuple[str, str], set[tuple[str, str]]] = defaultdict(set)
    nodes: set[tuple[str, str]] = set()
    for t in graph.triples:
        s = _node_id(t.subject)
        nodes.add(s)
        o = _node_id(t.object)
        if o is not None:
            nodes.add(o)
            adjacency[s].add(o)
            adjacency[o].add(s)
    if not nodes:
        return True
    start = ("uri", graph.agg_uri.value)
    if start not in nodes:
        return False
    seen = {start}
    stack = [start]
    while stack:
        for neighbor in adjacency[stack.pop()]:
            if neighbor not in seen:
                seen.add(neighbor)
                stack.append(neighbor)
    return seen == nodes


def rename_resource(graph: OreGraph, old: Uri, new: Uri) -> OreGraph:
    """Rewrite every occurrence of a URI node, including the designated
    rem/agg fields.  Used to derive per-format resource-map variants."""
    def swap(term: Term) -> Term:
        if isinstance(term, Ref) and term.uri == old:
            return Ref(new)
        return term

    triples = frozenset(
        Triple(swap(t.subject), t.predicate, swap(t.object)) for t in graph.triples
    )
    return OreGraph(
        new if graph.rem_uri == old else graph.rem_uri,
        new if graph.agg_uri == old else graph.agg_uri,
        triples,
    )
