"""Plain-text extraction from fetched article payloads."""

from __future__ import annotations

import re
from html.parser import HTMLParser

from .errors import EmptyAfterExtraction, UndecodablePayload

# Content inside these elements never reaches the body text.
SKIP_TAGS = {
    "script", "style", "noscript", "template", "svg", "iframe",
    "nav", "header", "footer", "aside", "form", "button", "select", "option",
}

# Elements that terminate the current paragraph.
BLOCK_TAGS = {
    "p", "div", "section", "article", "main", "blockquote", "pre",
    "h1", "h2", "h3", "h4", "h5", "h6", "li", "ul", "ol", "table", "tr",
    "figure", "figcaption", "br", "hr", "dd", "dt",
}

_CHARSET_RE = re.compile(rb"""charset\s*=\s*["']?\s*([a-zA-Z0-9_\-]+)""")
_INLINE_WS = re.compile(r"[^\S\n]+")


class _ArticleHTMLParser(HTMLParser):
    """Collects paragraph text, dropping scripted and navigational content."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.paragraphs: list[str] = []
        self.title_parts: list[str] = []
        self.h1_parts: list[str] = []
        self._buffer: list[str] = []
        self._skip_depth = 0
        self._in_title = False
        self._in_h1 = False

    def handle_starttag(self, tag, attrs):
        if tag in SKIP_TAGS:
            self._skip_depth += 1
            self._flush()
            return
        if tag == "title":
            self._in_title = True
        if tag == "h1":
            self._in_h1 = True
        if tag in BLOCK_TAGS:
            self._flush()

    def handle_endtag(self, tag):
        if tag in SKIP_TAGS:
            self._skip_depth = max(0, self._skip_depth - 1)
            return
        if tag == "title":
            self._in_title = False
        if tag == "h1":
            self._in_h1 = False
        if tag in BLOCK_TAGS:
            self._flush()

    def handle_data(self, data):
        if self._in_title:
            self.title_parts.append(data)
            return
        if self._in_h1:
            # Headline is captured for the title fallback even when it sits
            # inside a skipped container such as <header>.
            self.h1_parts.append(data)
        if self._skip_depth:
            return
        self._buffer.append(data)

    def _flush(self):
        text = collapse_spaces("".join(self._buffer))
        if text:
            self.paragraphs.append(text)
        self._buffer = []

    def close(self):
        super().close()
        self._flush()


def collapse_spaces(text: str) -> str:
    """Collapse all whitespace runs (including newlines) to single spaces."""
    return re.sub(r"\s+", " ", text).strip()


def normalize_plain_text(text: str) -> str:
    """Collapse intra-line whitespace and drop blank lines; paragraph breaks stay newlines."""
    lines = [_INLINE_WS.sub(" ", line).strip() for line in text.split("\n")]
    return "\n".join(line for line in lines if line)


def decode_payload(raw_payload: bytes, content_type: str) -> str:
    """Decode as UTF-8, falling back to a declared charset; reject otherwise."""
    declared = None
    match = _CHARSET_RE.search(content_type.encode("ascii", errors="ignore"))
    if match:
        declared = match.group(1).decode("ascii")
    else:
        head = raw_payload[:2048]
        match = _CHARSET_RE.search(head)
        if match:
            declared = match.group(1).decode("ascii")

    try:
        return raw_payload.decode("utf-8")
    except UnicodeDecodeError:
        pass
    if declared and declared.lower() not in ("utf-8", "utf8"):
        try:
            return raw_payload.decode(declared)
        except (UnicodeDecodeError, LookupError) as exc:
            raise UndecodablePayload(f"declared charset {declared!r} failed: {exc}") from exc
    raise UndecodablePayload("payload is not valid UTF-8 and declares no usable charset")


def _looks_like_html(content_type: str, text: str) -> bool:
    if "html" in content_type.lower():
        return True
    if "plain" in content_type.lower():
        return False
    head = text[:512].lower()
    return "<html" in head or "<!doctype" in head or "<body" in head


def extract_text(raw_payload: bytes, content_type: str = "") -> tuple[str, str]:
    """Extract (title, body) plain text from a fetched payload.

    HTML is stripped of markup, script/style content, and navigation
    boilerplate; whitespace runs collapse to single spaces and paragraph
    breaks become newlines. Plain text passes through the same whitespace
    normalization, so the operation is idempotent on its own output.
    """
    text = decode_payload(raw_payload, content_type)
    if not _looks_like_html(content_type, text):
        body = normalize_plain_text(text)
        if not body:
            raise EmptyAfterExtraction("payload is empty after normalization")
        return "", body

    parser = _ArticleHTMLParser()
    parser.feed(text)
    parser.close()
    body = "\n".join(parser.paragraphs)
    title = collapse_spaces("".join(parser.title_parts)) or collapse_spaces("".join(parser.h1_parts))
    if not body:
        raise EmptyAfterExtraction("no article text found in document")
    return title, body
