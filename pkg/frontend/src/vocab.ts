// Namespace constants mirrored from the toolkit's vocabulary.

export const ORE = "http://www.openarchives.org/ore/terms/";
export const DCTERMS = "http://purl.org/dc/terms/";
export const RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
export const RDFS = "http://www.w3.org/2000/01/rdf-schema#";
export const FST = "http://example.org/foresite/terms/";

export const DESCRIBES = ORE + "describes";
export const IS_DESCRIBED_BY = ORE + "isDescribedBy";
export const AGGREGATES = ORE + "aggregates";
export const IS_AGGREGATED_BY = ORE + "isAggregatedBy";
export const SIMILAR_TO = ORE + "similarTo";
export const PROXY_FOR = ORE + "proxyFor";
export const PROXY_IN = ORE + "proxyIn";
export const TYPE = RDF + "type";
export const TITLE = DCTERMS + "title";
export const REFERENCES = DCTERMS + "references";
export const FOLLOWED_BY = FST + "followedBy";

const PREFIXES: ReadonlyArray<readonly [string, string]> = [
  [ORE, "ore"],
  [DCTERMS, "dcterms"],
  [RDF, "rdf"],
  [RDFS, "rdfs"],
  [FST, "fst"],
];

/** Compact a URI to a curie for display, when a known prefix applies. */
export function curie(uri: string): string {
  for (const [ns, prefix] of PREFIXES) {
    if (uri.startsWith(ns)) return `${prefix}:${uri.slice(ns.length)}`;
  }
  return uri;
}
