"""oretk: identify, describe, publish, and crawl aggregations of Web resources."""

from .model import (
    Blank, Literal, OreGraph, Proxy, Ref, Term, Triple, Uri, add_similar_to,
    add_triple, as_uri, create_proxy, infer, is_connected, mark_nested,
    new_aggregation,
)
from .validate import AggregationView, ValidationReport, aggregation_view, validate
from .wire import WireDocument, WireFormat, convert, parse, serialize

__version__ = "0.1.0"

__all__ = [
    "Blank", "Literal", "OreGraph", "Proxy", "Ref", "Term", "Triple", "Uri",
    "add_similar_to", "add_triple", "as_uri", "create_proxy", "infer",
    "is_connected", "mark_nested", "new_aggregation",
    "AggregationView", "ValidationReport", "aggregation_view", "validate",
    "WireDocument", "WireFormat", "convert", "parse", "serialize",
    "__version__",
]
