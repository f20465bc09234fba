"""Absolute URI value type.

Equality is exact string comparison after case-normalizing the scheme
and authority; nothing else (percent-escapes, default ports, trailing
slashes) is touched, so two URIs are the same resource only if their
authors spelled them the same way.
"""

from __future__ import annotations

from dataclasses import dataclass
from urllib.parse import urlsplit, urlunsplit

from .errors import BadUri


@dataclass(frozen=True, order=True)
class Uri:
    value: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", _normalize(self.value))

    @property
    def scheme(self) -> str:
        return urlsplit(self.value).scheme

    @property
    def authority(self) -> str:
        return urlsplit(self.value).netloc

    @property
    def fragment(self) -> str:
        return urlsplit(self.value).fragment

    @property
    def is_http(self) -> bool:
        """Model identities must live in plain http space."""
        return self.scheme == "http"

    def __str__(self) -> str:
        return self.value


def as_uri(value: Uri | str) -> Uri:
    """Coerce a string to a Uri; Uri instances pass through unchanged."""
    return value if isinstance(value, Uri) else Uri(value)


def _normalize(raw: object) -> str:
    if isinstance(raw, Uri):  # tolerate Uri(Uri(...))
        return raw.value
    if not isinstance(raw, str):
        raise BadUri(f"URI must be a string, got {type(raw).__name__}")
    if not raw:
        raise BadUri("empty URI")
    if any(c.isspace() for c in raw):
        raise BadUri(f"URI contains whitespace: {raw!r}")
    try:
        parts = urlsplit(raw)
    except ValueError as exc:
        raise BadUri(f"unparseable URI {raw!r}: {exc}") from None
    if not parts.scheme:
        raise BadUri(f"URI is not absolute (no scheme): {raw!r}")
    if parts.scheme in ("http", "https") and not parts.netloc:
        raise BadUri(f"{parts.scheme} URI lacks an authority: {raw!r}")
    return urlunsplit(
        (parts.scheme.lower(), parts.netloc.lower(), parts.path, parts.query, parts.fragment)
    )
