"""Accept-header content negotiation over the two wire formats.

Choice rule (documented profile, since HTTP leaves server preference
open): for each available format, the most specific matching media
range decides its quality; a format whose best match has q=0 (or no
match at all) is excluded.  Among the remaining formats, higher
specificity of the matching range wins, then higher q, then the server
preference order (rdfxml before atom).  An absent, empty, or entirely
unparseable Accept header selects the entry's default format.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import NotAcceptable
from .wire import WireFormat

__all__ = ["MediaRange", "NegotiationResult", "SERVER_PREFERENCE", "parse_accept", "negotiate"]

SERVER_PREFERENCE: tuple[WireFormat, ...] = (WireFormat.RDFXML, WireFormat.ATOM)


@dataclass(frozen=True)
class MediaRange:
    type: str
    subtype: str
    q: float

    @property
    def specificity(self) -> int:
        if self.type == "*":
            return 0
        return 1 if self.subtype == "*" else 2

    def matches(self, media_type: str) -> bool:
        mtype, _, msub = media_type.partition("/")
        if self.type == "*":
            return True
        if self.type != mtype:
            return False
        return self.subtype == "*" or self.subtype == msub

    @property
    def media_type(self) -> str:
        return f"{self.type}/{self.subtype}"


def parse_accept(header: str) -> list[MediaRange]:
    """Parse an Accept header; malformed list items are skipped."""
    ranges: list[MediaRange] = []
    for item in header.split(","):
        item = item.strip()
        if not item:
            continue
        parts = [p.strip() for p in item.split(";")]
        mtype, _, msub = parts[0].partition("/")
        mtype, msub = mtype.strip().lower(), msub.strip().lower()
        if not mtype or not msub or " " in mtype or " " in msub:
            continue
        if mtype == "*" and msub != "*":
            continue
        q = 1.0
        for param in parts[1:]:
            name, _, value = param.partition("=")
            if name.strip().lower() == "q":
                try:
                    q = float(value.strip())
                except ValueError:
                    q = 1.0
                q = min(max(q, 0.0), 1.0)
                break  # parameters after q are accept-ext; ignore
        ranges.append(MediaRange(mtype, msub, q))
    return ranges


@dataclass(frozen=True)
class NegotiationResult:
    chosen: WireFormat
    matched_media_type: str
    quality: float


def negotiate(accept_header: Optional[str], available: Iterable[WireFormat], *,
              default: Optional[WireFormat] = None,
              preference: Sequence[WireFormat] = SERVER_PREFERENCE) -> NegotiationResult:
    """Pick a format for the client, or raise NotAcceptable."""
    avail = [f for f in preference if f in set(available)]
    avail += [f for f in available if f not in avail]
    if not avail:
        raise ValueError("available formats must be non-empty")

    ranges = parse_accept(accept_header) if accept_header else []
    if not ranges:
        chosen = default if default in avail else avail[0]
        return NegotiationResult(chosen, "*/*", 1.0)

    scored: dict[WireFormat, tuple[int, float, str]] = {}
    for fmt in avail:
        matching = [r for r in ranges if r.matches(fmt.media_type)]
        if not matching:
            continue
        top = max(r.specificity for r in matching)
        candidates = sorted(
            (r for r in matching if r.specificity == top),
            key=lambda r: (-r.q, r.media_type),
        )
        best = candidates[0]
        if best.q <= 0:
            continue
        scored[fmt] = (top, best.q, best.media_type)

    if not scored:
        raise NotAcceptable(f"no available format is acceptable for {accept_header!r}")
    chosen = sorted(
        scored,
        key=lambda f: (-scored[f][0], -scored[f][1], avail.index(f)),
    )[0]
    top, q, media = scored[chosen]
    return NegotiationResult(chosen, media, q)
