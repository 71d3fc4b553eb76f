"""Source registry, republish gatekeeping, feed fetching, and article identity."""

from __future__ import annotations

import hashlib
import json
import re
import unicodedata
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import datetime, timezone
from email.utils import parsedate_to_datetime
from pathlib import Path
from urllib.parse import urlparse
from urllib.request import url2pathname

import httpx

from .errors import MalformedFeed, UnknownSource, UnreachableSource

ATOM_NS = "{http://www.w3.org/2005/Atom}"
CONTENT_NS = "{http://purl.org/rss/1.0/modules/content/}"

SOURCE_FIELDS = {
    "id", "name", "feed_url", "homepage_url", "language",
    "republish_permitted", "license_note", "enabled",
}

GATE_DISABLED = "disabled"
GATE_NO_PERMISSION = "no_republish_permission"


def _is_absolute_url(url: str) -> bool:
    parsed = urlparse(url)
    if parsed.scheme in ("http", "https"):
        return bool(parsed.netloc)
    if parsed.scheme == "file":
        return bool(parsed.path)
    return False


@dataclass(frozen=True)
class Source:
    """A registered news provider; the unit the republish gate acts on."""

    id: str
    name: str
    feed_url: str
    homepage_url: str
    language: str = "en"
    republish_permitted: bool = False
    license_note: str = ""
    enabled: bool = True

    def __post_init__(self):
        if not self.id:
            raise ValueError("source id must be non-empty")
        for attr in ("feed_url", "homepage_url"):
            if not _is_absolute_url(getattr(self, attr)):
                raise ValueError(f"source {self.id!r}: {attr} is not an absolute URL")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "feed_url": self.feed_url,
            "homepage_url": self.homepage_url,
            "language": self.language,
            "republish_permitted": self.republish_permitted,
            "license_note": self.license_note,
            "enabled": self.enabled,
        }


@dataclass(frozen=True)
class GateDecision:
    allowed: bool
    reason: str | None = None  # GATE_DISABLED | GATE_NO_PERMISSION when denied


def gatekeep(source: Source) -> GateDecision:
    """Allow a source iff it is enabled and has granted republish permission."""
    if not source.enabled:
        return GateDecision(False, GATE_DISABLED)
    if not source.republish_permitted:
        return GateDecision(False, GATE_NO_PERMISSION)
    return GateDecision(True)


class SourceRegistry:
    """Ordered collection of sources with unique ids."""

    def __init__(self, sources: list[Source] | None = None):
        self._by_id: dict[str, Source] = {}
        for source in sources or []:
            self.add(source)

    def add(self, source: Source) -> None:
        if source.id in self._by_id:
            raise ValueError(f"duplicate source id {source.id!r}")
        self._by_id[source.id] = source

    def replace(self, source: Source) -> None:
        if source.id not in self._by_id:
            raise UnknownSource(f"source {source.id!r} not registered")
        self._by_id[source.id] = source

    def get(self, source_id: str) -> Source:
        try:
            return self._by_id[source_id]
        except KeyError:
            raise UnknownSource(f"source {source_id!r} not registered") from None

    def gatekeep(self, source_id: str) -> GateDecision:
        return gatekeep(self.get(source_id))

    def __contains__(self, source_id: str) -> bool:
        return source_id in self._by_id

    def __iter__(self):
        return iter(self._by_id.values())

    def __len__(self) -> int:
        return len(self._by_id)

    def to_list(self) -> list[dict]:
        return [s.to_dict() for s in self]


def parse_source(record: dict) -> Source:
    """Build a Source from a JSON record, rejecting unknown fields (strict mode)."""
    unknown = set(record) - SOURCE_FIELDS
    if unknown:
        raise ValueError(f"unknown source fields: {sorted(unknown)}")
    missing = {"id", "name", "feed_url", "homepage_url"} - set(record)
    if missing:
        raise ValueError(f"source record missing fields: {sorted(missing)}")
    for flag in ("republish_permitted", "enabled"):
        if flag in record and not isinstance(record[flag], bool):
            raise ValueError(f"source {record.get('id')!r}: {flag} must be a boolean")
    return Source(**record)


def load_source_registry(path: str | Path) -> SourceRegistry:
    """Load the JSON source registry file (an array of Source objects)."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, list):
        raise ValueError("source registry must be a JSON array")
    return SourceRegistry([parse_source(r) for r in data])


def save_source_registry(registry: SourceRegistry, path: str | Path) -> None:
    tmp = Path(str(path) + ".tmp")
    tmp.write_text(json.dumps(registry.to_list(), indent=2) + "\n", encoding="utf-8")
    tmp.replace(path)


# --- fetching ---------------------------------------------------------------

_SUFFIX_CONTENT_TYPES = {
    ".html": "text/html",
    ".htm": "text/html",
    ".xml": "application/xml",
    ".txt": "text/plain",
}


def fetch_url(url: str, timeout: float = 10.0, client: httpx.Client | None = None) -> tuple[bytes, str]:
    """Fetch raw bytes from an http(s), file:// or plain local path URL.

    Returns (payload, content_type). Transport problems raise UnreachableSource.
    """
    parsed = urlparse(url)
    if parsed.scheme == "file":
        path = Path(url2pathname(parsed.path))
        return _read_local(path)
    if parsed.scheme in ("http", "https"):
        try:
            if client is not None:
                resp = client.get(url, timeout=timeout, follow_redirects=True)
            else:
                resp = httpx.get(url, timeout=timeout, follow_redirects=True)
        except httpx.HTTPError as exc:
            raise UnreachableSource(f"{url}: {exc}") from exc
        if resp.status_code >= 400:
            raise UnreachableSource(f"{url}: HTTP {resp.status_code}")
        return resp.content, resp.headers.get("content-type", "")
    if not parsed.scheme:
        return _read_local(Path(url))
    raise UnreachableSource(f"unsupported URL scheme: {url}")


def _read_local(path: Path) -> tuple[bytes, str]:
    try:
        payload = path.read_bytes()
    except OSError as exc:
        raise UnreachableSource(f"{path}: {exc}") from exc
    return payload, _SUFFIX_CONTENT_TYPES.get(path.suffix.lower(), "")


# --- feed parsing -----------------------------------------------------------

@dataclass
class ArticleStub:
    """A feed entry before page fetch and extraction."""

    source_id: str
    url: str
    title: str = ""
    published_at: datetime | None = None
    raw_payload: bytes = b""


@dataclass(frozen=True)
class FeedProblem:
    """One recorded, skipped item or feed failure."""

    source_id: str
    error: str
    detail: str
    byte_offset: int | None = None


@dataclass
class FeedFetchResult:
    stubs: list[ArticleStub] = field(default_factory=list)
    problems: list[FeedProblem] = field(default_factory=list)


def _byte_offset_of(text: str, line: int, column: int) -> int:
    """Convert an (1-based line, 0-based column) parse position to a byte offset."""
    lines = text.split("\n")
    prefix = "\n".join(lines[: line - 1])
    if line > 1:
        prefix += "\n"
    prefix += lines[line - 1][:column]
    return len(prefix.encode("utf-8"))


def _parse_timestamp(raw: str | None) -> datetime | None:
    if not raw:
        return None
    raw = raw.strip()
    try:
        # RFC 822 (RSS pubDate)
        dt = parsedate_to_datetime(raw)
    except (TypeError, ValueError):
        try:
            # ISO 8601 (Atom published/updated)
            dt = datetime.fromisoformat(raw.replace("Z", "+00:00"))
        except ValueError:
            return None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def _element_text(parent: ET.Element, tag: str) -> str | None:
    node = parent.find(tag)
    if node is None or node.text is None:
        return None
    return node.text.strip()


def parse_feed(payload: bytes, source_id: str) -> FeedFetchResult:
    """Parse an RSS 2.0 or Atom 1.0 document into stubs plus item-level problems."""
    text = payload.decode("utf-8", errors="replace")
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line, column = exc.position
        offset = _byte_offset_of(text, line, column)
        raise MalformedFeed(f"feed for {source_id!r}: {exc}", byte_offset=offset) from exc

    if root.tag.lower() == "rss":
        return _parse_rss(root, source_id)
    if root.tag == f"{ATOM_NS}feed":
        return _parse_atom(root, source_id)
    raise MalformedFeed(f"feed for {source_id!r}: unrecognized root element <{root.tag}>", byte_offset=0)


def _parse_rss(root: ET.Element, source_id: str) -> FeedFetchResult:
    result = FeedFetchResult()
    channel = root.find("channel")
    if channel is None:
        raise MalformedFeed(f"feed for {source_id!r}: <rss> without <channel>", byte_offset=0)
    for index, item in enumerate(channel.findall("item")):
        link = _element_text(item, "link")
        if not link:
            result.problems.append(FeedProblem(
                source_id=source_id,
                error="MalformedFeed",
                detail=f"item {index} missing <link>",
            ))
            continue
        content = _element_text(item, f"{CONTENT_NS}encoded") or ""
        result.stubs.append(ArticleStub(
            source_id=source_id,
            url=link,
            title=_element_text(item, "title") or "",
            published_at=_parse_timestamp(_element_text(item, "pubDate")),
            raw_payload=content.encode("utf-8"),
        ))
    return result


def _parse_atom(root: ET.Element, source_id: str) -> FeedFetchResult:
    result = FeedFetchResult()
    for index, entry in enumerate(root.findall(f"{ATOM_NS}entry")):
        href = None
        for link in entry.findall(f"{ATOM_NS}link"):
            rel = link.get("rel", "alternate")
            if rel == "alternate" and link.get("href"):
                href = link.get("href")
                break
        if not href:
            result.problems.append(FeedProblem(
                source_id=source_id,
                error="MalformedFeed",
                detail=f"entry {index} missing <link href>",
            ))
            continue
        raw = _element_text(entry, f"{ATOM_NS}content") or ""
        published = _element_text(entry, f"{ATOM_NS}published") or _element_text(entry, f"{ATOM_NS}updated")
        result.stubs.append(ArticleStub(
            source_id=source_id,
            url=href,
            title=_element_text(entry, f"{ATOM_NS}title") or "",
            published_at=_parse_timestamp(published),
            raw_payload=raw.encode("utf-8"),
        ))
    return result


def fetch_feed(source: Source, timeout: float = 10.0, client: httpx.Client | None = None) -> FeedFetchResult:
    """Fetch and parse one source's syndication feed.

    Transport failures raise UnreachableSource; a document-level parse failure
    raises MalformedFeed carrying the byte offset. Item-level defects are
    recorded in the result and skipped, so one bad entry never hides the rest.
    """
    payload, _ = fetch_url(source.feed_url, timeout=timeout, client=client)
    return parse_feed(payload, source.id)


# --- article identity -------------------------------------------------------

_WS_RUN = re.compile(r"\s+")


def normalize_for_dedup(body: str) -> str:
    """NFC-normalize, lowercase, and collapse whitespace runs to single spaces."""
    text = unicodedata.normalize("NFC", body).lower()
    return _WS_RUN.sub(" ", text).strip()


def dedup_key(body: str) -> int:
    """Deterministic 64-bit fingerprint of the normalized body text."""
    digest = hashlib.blake2b(normalize_for_dedup(body).encode("utf-8"), digest_size=8)
    return int.from_bytes(digest.digest(), "big")


def schema_digest_of(parts: list[str]) -> int:
    """64-bit digest of an ordered column schema (same family as dedup_key)."""
    joined = "\x00".join(parts)
    digest = hashlib.blake2b(joined.encode("utf-8"), digest_size=8)
    return int.from_bytes(digest.digest(), "big")


@dataclass
class Article:
    """One stored news item; ``class_label`` is its assigned category once set."""

    id: str
    source_id: str
    url: str
    title: str
    body: str
    language: str
    fetched_at: datetime
    published_at: datetime | None = None
    dedup_hash: int = 0
    class_label: str | None = None
    topic_scores: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "source_id": self.source_id,
            "url": self.url,
            "title": self.title,
            "body": self.body,
            "language": self.language,
            "fetched_at": self.fetched_at.isoformat(),
            "published_at": self.published_at.isoformat() if self.published_at else None,
            "dedup_hash": self.dedup_hash,
            "class_label": self.class_label,
            "topic_scores": self.topic_scores,
        }

    @classmethod
    def from_dict(cls, record: dict) -> "Article":
        return cls(
            id=record["id"],
            source_id=record["source_id"],
            url=record["url"],
            title=record["title"],
            body=record["body"],
            language=record["language"],
            fetched_at=datetime.fromisoformat(record["fetched_at"]),
            published_at=(datetime.fromisoformat(record["published_at"])
                          if record.get("published_at") else None),
            dedup_hash=record["dedup_hash"],
            class_label=record.get("class_label"),
            topic_scores=record.get("topic_scores", {}),
        )


def make_article_id(url: str, dedup_hash: int) -> str:
    digest = hashlib.blake2b(f"{url}\x00{dedup_hash}".encode("utf-8"), digest_size=8)
    return digest.hexdigest()


def build_article(stub: ArticleStub, title: str, body: str, language: str,
                  fetched_at: datetime | None = None) -> Article:
    """Assemble a deduplicatable Article from an extracted stub."""
    if not body.strip():
        raise ValueError("article body must be non-empty after extraction")
    key = dedup_key(body)
    return Article(
        id=make_article_id(stub.url, key),
        source_id=stub.source_id,
        url=stub.url,
        title=title or stub.title,
        body=body,
        language=language,
        fetched_at=fetched_at or datetime.now(timezone.utc),
        published_at=stub.published_at,
        dedup_hash=key,
    )
