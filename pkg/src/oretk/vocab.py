"""The closed predicate vocabulary of the aggregation model.

Every predicate any operation in this toolkit emits is defined here,
together with the two relation tables the inference closure applies:
symmetric inverses and subproperty lifts.
"""

from .uris import Uri

ORE = "http://www.openarchives.org/ore/terms/"
DCTERMS = "http://purl.org/dc/terms/"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
# The Foresite ordering relation has no published namespace; this is an
# explicit local stand-in.
FST = "http://example.org/foresite/terms/"
ATOM = "http://www.w3.org/2005/Atom"
XSD = "http://www.w3.org/2001/XMLSchema#"

DESCRIBES = Uri(ORE + "describes")
IS_DESCRIBED_BY = Uri(ORE + "isDescribedBy")
AGGREGATES = Uri(ORE + "aggregates")
IS_AGGREGATED_BY = Uri(ORE + "isAggregatedBy")
SIMILAR_TO = Uri(ORE + "similarTo")
PROXY_FOR = Uri(ORE + "proxyFor")
PROXY_IN = Uri(ORE + "proxyIn")

AGGREGATION = Uri(ORE + "Aggregation")
RESOURCE_MAP = Uri(ORE + "ResourceMap")
PROXY = Uri(ORE + "Proxy")

HAS_PART = Uri(DCTERMS + "hasPart")
CREATOR = Uri(DCTERMS + "creator")
MODIFIED = Uri(DCTERMS + "modified")
REFERENCES = Uri(DCTERMS + "references")
TITLE = Uri(DCTERMS + "title")

SEE_ALSO = Uri(RDFS + "seeAlso")
SAME_AS = Uri(OWL + "sameAs")
TYPE = Uri(RDF + "type")
FOLLOWED_BY = Uri(FST + "followedBy")

# ore:similarTo sits between rdfs:seeAlso and owl:sameAs in specificity.
# That ordering is documentation only; no inference rule is derived from it.

INVERSES = {
    AGGREGATES: IS_AGGREGATED_BY,
    IS_AGGREGATED_BY: AGGREGATES,
    DESCRIBES: IS_DESCRIBED_BY,
    IS_DESCRIBED_BY: DESCRIBES,
}

SUBPROPERTIES = {
    AGGREGATES: HAS_PART,
    IS_DESCRIBED_BY: SEE_ALSO,
}

MODEL_CLASSES = frozenset({AGGREGATION, RESOURCE_MAP, PROXY})

PREDICATES = frozenset({
    DESCRIBES, IS_DESCRIBED_BY, AGGREGATES, IS_AGGREGATED_BY, SIMILAR_TO,
    PROXY_FOR, PROXY_IN, HAS_PART, CREATOR, MODIFIED, REFERENCES, TITLE,
    SEE_ALSO, SAME_AS, TYPE, FOLLOWED_BY,
})

ALL_TERMS = PREDICATES | MODEL_CLASSES

# Link relation used when a proxy URI is resolved: points back at the
# aggregation providing the context.
AGGREGATION_REL = ORE + "aggregation"
