"""Shared builders for the test suite, including the seeded random-graph
generator used by the round-trip and acceptance properties."""

from __future__ import annotations

import itertools
import random

from oretk import vocab
from oretk.model import (
    Blank, Literal, OreGraph, Ref, Triple, Uri, add_triple, create_proxy,
    mark_nested, new_aggregation,
)
from oretk.validate import validate

XSD_STRING = Uri(vocab.XSD + "string")
XSD_DATE = Uri(vocab.XSD + "date")

# lexical forms that stress XML escaping and normalization
LITERAL_POOL = [
    "plain text",
    "ampersand & angle <brackets> and \"quotes\"",
    "tabs\tand\nnewlines\rand returns",
    "Ünïcode — ✓ ∞ 日本語",
    "  leading and trailing  ",
    "",
    "]]> cdata terminator",
    "0001",
]

METADATA_PREDICATES = [
    vocab.TITLE, vocab.CREATOR, vocab.REFERENCES, vocab.SEE_ALSO,
    vocab.SAME_AS, vocab.MODIFIED, vocab.IS_AGGREGATED_BY,
    Uri("http://meta.example/ns#note"),
    Uri("http://meta.example/vocab/source"),
]


def random_literal(rng: random.Random) -> Literal:
    text = rng.choice(LITERAL_POOL)
    shape = rng.randrange(4)
    if shape == 0:
        return Literal(text)
    if shape == 1:
        return Literal(text, lang=rng.choice(["en", "en-US", "de"]))
    if shape == 2:
        return Literal(text, datatype=XSD_STRING)
    return Literal(text, datatype=XSD_DATE)


def random_valid_graph(rng: random.Random, max_triples: int = 200,
                       allow_blanks: bool = True) -> OreGraph:
    """A lax-valid graph with members, proxies, chains, and messy metadata.

    Connectivity holds by construction: every new node hangs off an
    already-reachable one.
    """
    stamp = rng.randrange(10 ** 6)
    base = f"http://corpus{rng.randrange(100)}.example/g{stamp}"
    members = [Uri(f"{base}/resource/{i}") for i in range(rng.randint(1, 8))]
    graph = new_aggregation(f"{base}/rem", f"{base}/agg", members)
    graph = add_triple(graph, Triple(
        Ref(graph.rem_uri), vocab.MODIFIED, Literal("2008-10-01T00:00:00Z")))

    reachable: list = [Ref(graph.rem_uri), Ref(graph.agg_uri)] + [Ref(m) for m in members]
    blanks: list[Blank] = []

    if rng.random() < 0.5 and len(members) >= 2:
        chained = members[: rng.randint(2, len(members))]
        proxies = []
        for m in chained:
            puri = Uri(f"{base}/agg#proxy/{m.value.rsplit('/', 1)[-1]}")
            graph = create_proxy(graph, puri, m, graph.agg_uri)
            proxies.append(puri)
            reachable.append(Ref(puri))
        for left, right in zip(proxies, proxies[1:]):
            graph = add_triple(graph, Triple(Ref(left), vocab.FOLLOWED_BY, Ref(right)))

    if rng.random() < 0.4:
        graph = add_triple(graph, Triple(
            Ref(graph.agg_uri), vocab.SIMILAR_TO,
            Ref(Uri(f"info:doi/10.{1000 + rng.randrange(9000)}/x{stamp}"))))
    if rng.random() < 0.4:
        nested = rng.choice(members)
        graph = mark_nested(graph, nested, Uri(f"{nested.value}/rem"))
        reachable.append(Ref(Uri(f"{nested.value}/rem")))

    target = rng.randint(len(graph.triples), max(len(graph.triples), max_triples))
    fresh = itertools.count()
    while len(graph.triples) < target:
        subject = rng.choice(reachable + blanks if allow_blanks else reachable)
        if isinstance(subject, Blank) and rng.random() < 0.5:
            # blanks keep only literal metadata in this corpus
            graph = add_triple(graph, Triple(subject, vocab.TITLE, random_literal(rng)))
            continue
        predicate = rng.choice(METADATA_PREDICATES)
        roll = rng.random()
        if roll < 0.45:
            obj = random_literal(rng)
        elif roll < 0.85 or not allow_blanks or len(blanks) >= 4:
            new_uri = Uri(f"{base}/meta/{next(fresh)}")
            obj = Ref(new_uri)
            reachable.append(obj)
        else:
            obj = Blank(f"node{len(blanks)}")
            blanks.append(obj)
        if predicate == vocab.IS_AGGREGATED_BY and not isinstance(obj, Ref):
            predicate = vocab.TITLE
        if isinstance(subject, Blank) and predicate == vocab.IS_AGGREGATED_BY:
            predicate = vocab.TITLE
        graph = add_triple(graph, Triple(subject, predicate, obj))

    report = validate(graph, "lax")
    assert report.valid, [f.message for f in report.findings]
    return graph


def blank_labels(graph: OreGraph) -> set[str]:
    labels = set()
    for t in graph.triples:
        for term in (t.subject, t.object):
            if isinstance(term, Blank):
                labels.add(term.label)
    return labels


def graphs_isomorphic(left: OreGraph, right: OreGraph) -> bool:
    """Triple-set equality modulo a bijection between blank labels."""
    if (left.rem_uri, left.agg_uri) != (right.rem_uri, right.agg_uri):
        return False
    if len(left.triples) != len(right.triples):
        return False
    lab_l, lab_r = sorted(blank_labels(left)), sorted(blank_labels(right))
    if len(lab_l) != len(lab_r):
        return False
    if not lab_l:
        return left.triples == right.triples

    def relabeled(triples, mapping):
        def swap(term):
            return Blank(mapping[term.label]) if isinstance(term, Blank) else term
        return {Triple(swap(t.subject), t.predicate, swap(t.object)) for t in triples}

    for perm in itertools.permutations(lab_r):
        mapping = dict(zip(lab_l, perm))
        if relabeled(left.triples, mapping) == right.triples:
            return True
    return False
