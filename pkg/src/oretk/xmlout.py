"""Canonical XML emission helpers.

Canonical form used by every writer in this package: UTF-8, LF line
endings, 2-space indent, attributes in lexicographic order, and CR/LF/
TAB written as character references so round-trips survive XML's
attribute-value and end-of-line normalization.
"""

from __future__ import annotations

XML_DECL = '<?xml version="1.0" encoding="UTF-8"?>'

_TEXT_ESCAPES = {
    "&": "&amp;", "<": "&lt;", ">": "&gt;",
    "\r": "&#13;", "\n": "&#10;", "\t": "&#9;",
}
_ATTR_ESCAPES = dict(_TEXT_ESCAPES, **{'"': "&quot;"})


def esc_text(value: str) -> str:
    return "".join(_TEXT_ESCAPES.get(c, c) for c in value)


def esc_attr(value: str) -> str:
    return "".join(_ATTR_ESCAPES.get(c, c) for c in value)


def attrs_str(attrs: dict[str, str]) -> str:
    return "".join(f' {k}="{esc_attr(v)}"' for k, v in sorted(attrs.items()))


def open_tag(name: str, attrs: dict[str, str] | None = None) -> str:
    return f"<{name}{attrs_str(attrs or {})}>"


def empty_tag(name: str, attrs: dict[str, str] | None = None) -> str:
    return f"<{name}{attrs_str(attrs or {})}/>"


def text_element(name: str, text: str, attrs: dict[str, str] | None = None) -> str:
    return f"<{name}{attrs_str(attrs or {})}>{esc_text(text)}</{name}>"


def document(lines: list[str]) -> bytes:
    return ("\n".join([XML_DECL, *lines]) + "\n").encode("utf-8")
