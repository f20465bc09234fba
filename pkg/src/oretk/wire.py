"""Wire formats for resource maps.

A resource map travels as RDF/XML or as a single Atom entry; each
format has exactly one media type.  Documents are immutable byte
payloads tagged with their format and, when fetched, their source URI.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .uris import Uri


class WireFormat(enum.Enum):
    RDFXML = "rdfxml"
    ATOM = "atom"

    @property
    def media_type(self) -> str:
        return _MEDIA_TYPES[self]

    @classmethod
    def from_name(cls, name: str) -> "WireFormat":
        for fmt in cls:
            if fmt.value == name:
                return fmt
        raise ValueError(f"unknown format {name!r}")

    @classmethod
    def from_media_type(cls, content_type: str) -> Optional["WireFormat"]:
        """Match a Content-Type value, ignoring parameters like charset."""
        essence = content_type.split(";", 1)[0].strip().lower()
        for fmt, media in _MEDIA_TYPES.items():
            if media == essence:
                return fmt
        return None


_MEDIA_TYPES = {
    WireFormat.RDFXML: "application/rdf+xml",
    WireFormat.ATOM: "application/atom+xml",
}


@dataclass(frozen=True)
class WireDocument:
    format: WireFormat
    data: bytes
    source_uri: Optional[Uri] = None


def serialize(graph, fmt: WireFormat, *, check: bool = True) -> WireDocument:
    """Serialize with the canonical writer for the format."""
    from . import atom, rdfxml  # formats import wire; keep the cycle one-way

    if fmt is WireFormat.RDFXML:
        return rdfxml.to_rdfxml(graph, check=check)
    return atom.to_atom(graph, check=check)


def parse(doc: WireDocument):
    from . import atom, rdfxml

    if doc.format is WireFormat.RDFXML:
        return rdfxml.from_rdfxml(doc)
    return atom.from_atom(doc)


def convert(doc: WireDocument, target: WireFormat) -> WireDocument:
    """Parse with the source format, re-serialize with the target.

    Converting a document to its own format canonicalizes it: the
    result is a fixpoint of further conversion.
    """
    graph = parse(doc)
    return serialize(graph, target, check=False)
