"""Exception hierarchy shared across the toolkit.

The CLI maps these onto its exit codes with isinstance checks, so parse
failures stay under XmlMalformed and network failures under FetchError.
"""


class OreError(Exception):
    """Base class for all toolkit errors."""


# -- model construction -------------------------------------------------

class BadUri(OreError, ValueError):
    """URI is not absolute, not syntactically valid, or not http where required."""


class IdentityClash(OreError, ValueError):
    """Two model identities that must be distinct are equal."""


class DescribesImmutable(OreError):
    """ore:describes is fixed at construction and cannot be added later."""


class BlankIdentity(OreError):
    """A blank node was used where a named model identity is required."""


class NotAggregated(OreError):
    """Operation requires the resource to be aggregated, and it is not."""


class DuplicateProxy(OreError):
    """A proxy for the same (resource, aggregation) pair already exists."""


class InvalidGraph(OreError):
    """Graph failed the validation gate of an operation that requires validity."""

    def __init__(self, report):
        self.report = report
        errors = [f.code for f in report.findings if f.severity == "error"]
        super().__init__("graph is not valid: " + ", ".join(sorted(set(errors))))


# -- wire formats --------------------------------------------------------

class XmlMalformed(OreError):
    """Document is not well-formed XML or violates the serialization profile."""


class UnsupportedRdfXml(XmlMalformed):
    """Document uses RDF/XML constructs outside the supported profile."""


class NoDescribes(XmlMalformed):
    """Document carries no ore:describes anchor (or no self link, for Atom)."""


class AmbiguousDescribes(XmlMalformed):
    """Document carries more than one ore:describes anchor."""


class NoBase(XmlMalformed):
    """Relative URIs occur but neither xml:base nor a source URI is known."""


class NotSingleEntry(XmlMalformed):
    """Atom document is not exactly one entry (bare or wrapped in a feed)."""


# -- publication service -------------------------------------------------

class MixedAggregations(OreError):
    """publish() was given variant graphs for more than one aggregation."""


class DuplicateAggregation(OreError):
    """Aggregation is already published and replace was not requested."""


class RouteConflict(OreError):
    """A URI is already routed to a different kind of published content."""


class NotAcceptable(OreError):
    """No available serialization format is acceptable to the client."""


class BindFailure(OreError):
    """Server socket could not be bound."""


# -- discovery client ----------------------------------------------------

class FetchError(OreError):
    """Network-level failure (connection refused, DNS, timeout)."""


class TooManyRedirects(OreError):
    """Redirect chain exceeded the hop limit."""


class NoResourceMap(OreError):
    """Dereferencing terminated without a parseable resource map."""
