"""Graph validation and the derived aggregation view.

Finding codes are a stable public contract (the CLI and explorer UI
key on them):

  DESCRIBES_COUNT       exactly one ore:describes triple, matching the
                        designated rem/agg URIs            (error)
  AGGREGATES_MIN        at least one aggregated resource   (error strict,
                                                            warning lax)
  CONNECTED             undirected graph is connected      (error)
  PROXY_TARGET          every proxy satisfies its invariant (error)
  IDENTITY_HTTP         model identities use http URIs     (error)
  BLANK_IDENTITY        model identities are named URIs    (error)
  SELF_SIMILAR          aggregation similarTo itself       (warning)
  REM_MODIFIED_MISSING  resource map lacks dcterms:modified (warning,
                                                            strict only)
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

from . import vocab
from .errors import InvalidGraph
from .model import (
    Blank, Literal, OreGraph, Proxy, Ref, Term, Triple, Uri,
    is_connected, proxies_of, term_key, triple_key,
)

__all__ = ["Finding", "ValidationReport", "validate", "AggregationView", "aggregation_view"]

LEVELS = ("strict", "lax")


@dataclass(frozen=True)
class Finding:
    code: str
    severity: str  # "error" | "warning"
    subject: Optional[Uri]
    message: str


@dataclass(frozen=True)
class ValidationReport:
    level: str
    findings: tuple[Finding, ...]

    @property
    def valid(self) -> bool:
        return not any(f.severity == "error" for f in self.findings)

    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "error"]

    def to_json_dict(self) -> dict:
        return {
            "level": self.level,
            "valid": self.valid,
            "findings": [
                {
                    "code": f.code,
                    "severity": f.severity,
                    "subject": f.subject.value if f.subject else None,
                    "message": f.message,
                }
                for f in self.findings
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


def _identity_positions(graph: OreGraph):
    """Yield (term, role) for every position that must hold a named http URI."""
    roles = {
        vocab.DESCRIBES: ("resource map", "aggregation"),
        vocab.IS_DESCRIBED_BY: ("aggregated resource", "resource map"),
        vocab.AGGREGATES: ("aggregation", "aggregated resource"),
        vocab.IS_AGGREGATED_BY: ("aggregated resource", "aggregation"),
        vocab.PROXY_FOR: ("proxy", "aggregated resource"),
        vocab.PROXY_IN: ("proxy", "aggregation"),
    }
    for t in graph.triples:
        pair = roles.get(t.predicate)
        if pair is not None:
            yield t.subject, pair[0]
            yield t.object, pair[1]
        elif (t.predicate == vocab.TYPE and isinstance(t.object, Ref)
              and t.object.uri in vocab.MODEL_CLASSES):
            yield t.subject, f"resource typed {t.object.uri.value.rsplit('/', 1)[-1]}"


def validate(graph: OreGraph, level: str = "strict") -> ValidationReport:
    """Check the graph; problems become findings, never exceptions.

    Pure: the same graph and level always produce an identical report.
    """
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}, got {level!r}")
    findings: set[Finding] = set()

    def flag(code: str, severity: str, subject: Optional[Uri], message: str) -> None:
        findings.add(Finding(code, severity, subject, message))

    describes = sorted(graph.match(None, vocab.DESCRIBES), key=triple_key)
    if len(describes) != 1:
        flag("DESCRIBES_COUNT", "error", graph.rem_uri,
             f"expected exactly one ore:describes triple, found {len(describes)}")
    else:
        t = describes[0]
        if t.subject != Ref(graph.rem_uri) or t.object != Ref(graph.agg_uri):
            flag("DESCRIBES_COUNT", "error", graph.rem_uri,
                 "ore:describes triple does not match the designated rem/agg URIs")
    if graph.rem_uri == graph.agg_uri:
        flag("DESCRIBES_COUNT", "error", graph.rem_uri,
             "resource map URI equals aggregation URI")

    if not graph.has(Ref(graph.agg_uri), vocab.AGGREGATES):
        severity = "error" if level == "strict" else "warning"
        flag("AGGREGATES_MIN", severity, graph.agg_uri,
             "aggregation has no aggregated resources")

    if not is_connected(graph):
        flag("CONNECTED", "error", graph.agg_uri,
             "graph is not connected when edges are treated as undirected")

    _check_proxies(graph, flag)

    for uri in (graph.rem_uri, graph.agg_uri):
        if not uri.is_http:
            flag("IDENTITY_HTTP", "error", uri, f"model identity is not http: {uri}")
    for term, role in _identity_positions(graph):
        if isinstance(term, Ref):
            if not term.uri.is_http:
                flag("IDENTITY_HTTP", "error", term.uri,
                     f"{role} identity is not an http URI: {term.uri}")
        elif isinstance(term, Blank):
            flag("BLANK_IDENTITY", "error", None,
                 f"blank node _:{term.label} used as {role} identity")
        else:
            flag("BLANK_IDENTITY", "error", None,
                 f"literal {term.text!r} used as {role} identity")

    if graph.has(Ref(graph.agg_uri), vocab.SIMILAR_TO, Ref(graph.agg_uri)):
        flag("SELF_SIMILAR", "warning", graph.agg_uri,
             "aggregation declared similarTo itself")

    if level == "strict" and not graph.has(Ref(graph.rem_uri), vocab.MODIFIED):
        flag("REM_MODIFIED_MISSING", "warning", graph.rem_uri,
             "resource map has no dcterms:modified")

    ordered = tuple(sorted(
        findings,
        key=lambda f: (f.code, f.subject.value if f.subject else "", f.severity, f.message),
    ))
    return ValidationReport(level, ordered)


def _check_proxies(graph: OreGraph, flag) -> None:
    fors: dict = defaultdict(list)
    ins: dict = defaultdict(list)
    for t in graph.match(None, vocab.PROXY_FOR):
        fors[t.subject].append(t.object)
    for t in graph.match(None, vocab.PROXY_IN):
        ins[t.subject].append(t.object)
    typed = {t.subject for t in graph.match(None, vocab.TYPE, Ref(vocab.PROXY))}

    seen_pairs: dict[tuple, list] = defaultdict(list)
    for subj in sorted(set(fors) | set(ins) | typed, key=term_key):
        label = subj.uri if isinstance(subj, Ref) else None
        if len(fors.get(subj, [])) != 1 or len(ins.get(subj, [])) != 1:
            flag("PROXY_TARGET", "error", label,
                 "proxy must have exactly one ore:proxyFor and one ore:proxyIn")
            continue
        target, context = fors[subj][0], ins[subj][0]
        if not (isinstance(subj, Ref) and isinstance(target, Ref) and isinstance(context, Ref)):
            continue  # non-URI pieces already flagged as identity problems
        if subj.uri in (target.uri, context.uri):
            flag("PROXY_TARGET", "error", subj.uri,
                 "proxy URI must differ from its resource and its aggregation")
        if not graph.has(context, vocab.AGGREGATES, target):
            flag("PROXY_TARGET", "error", subj.uri,
                 f"{context.uri} does not aggregate {target.uri}")
        seen_pairs[(target.uri, context.uri)].append(subj.uri)
    for (target, context), proxies in sorted(seen_pairs.items()):
        if len(proxies) > 1:
            for extra in proxies[1:]:
                flag("PROXY_TARGET", "error", extra,
                     f"duplicate proxy for {target} in {context}")


@dataclass(frozen=True)
class AggregationView:
    """Derived read model of one aggregation."""
    agg_uri: Uri
    aggregated: tuple[Uri, ...]
    proxies: tuple[Proxy, ...]
    similar_to: tuple[Uri, ...]
    nested: tuple[tuple[Uri, Uri], ...]  # (resource, resource map)
    metadata: tuple[Triple, ...]


def aggregation_view(graph: OreGraph) -> AggregationView:
    """Read model of the graph's aggregation.

    Member order: followedBy chains over this aggregation's proxies win
    for chained members (chains sorted by their first member), everyone
    else follows in lexicographic URI order.
    """
    report = validate(graph, "lax")
    if not report.valid:
        raise InvalidGraph(report)

    agg = Ref(graph.agg_uri)
    members = {t.object.uri for t in graph.match(agg, vocab.AGGREGATES)
               if isinstance(t.object, Ref)}
    chained = _chain_order(graph, members)
    rest = sorted(members - set(chained))
    aggregated = tuple(chained) + tuple(rest)

    similar = tuple(t.object.uri for t in sorted(graph.match(agg, vocab.SIMILAR_TO),
                                                 key=triple_key)
                    if isinstance(t.object, Ref))
    nested = tuple(sorted(
        (t.subject.uri, t.object.uri)
        for t in graph.match(None, vocab.IS_DESCRIBED_BY)
        if isinstance(t.subject, Ref) and isinstance(t.object, Ref)
    ))
    metadata = tuple(sorted(graph.match(agg), key=triple_key))
    return AggregationView(
        agg_uri=graph.agg_uri,
        aggregated=aggregated,
        proxies=tuple(proxies_of(graph)),
        similar_to=similar,
        nested=nested,
        metadata=metadata,
    )


def _chain_order(graph: OreGraph, members: set[Uri]) -> list[Uri]:
    """Members in followedBy chain order, for proxies of this aggregation."""
    proxies = {p.proxy_uri: p for p in proxies_of(graph)
               if p.proxy_in == graph.agg_uri and p.proxy_for in members}
    successor: dict[Uri, Uri] = {}
    has_predecessor: set[Uri] = set()
    for t in sorted(graph.match(None, vocab.FOLLOWED_BY), key=triple_key):
        if not (isinstance(t.subject, Ref) and isinstance(t.object, Ref)):
            continue
        s, o = t.subject.uri, t.object.uri
        if s in proxies and o in proxies and s not in successor:
            successor[s] = o
            has_predecessor.add(o)
    heads = sorted(
        (p for p in set(successor) | has_predecessor if p not in has_predecessor),
        key=lambda p: proxies[p].proxy_for.value,
    )
    ordered: list[Uri] = []
    visited: set[Uri] = set()
    for head in heads:
        cursor: Optional[Uri] = head
        while cursor is not None and cursor not in visited:
            visited.add(cursor)
            member = proxies[cursor].proxy_for
            if member not in ordered:
                ordered.append(member)
            cursor = successor.get(cursor)
    return ordered
