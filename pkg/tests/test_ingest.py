"""Feed parsing, gatekeeping, registry strictness, and dedup identity."""

import json

import pytest

from newsdesk.errors import MalformedFeed, UnknownSource, UnreachableSource
from newsdesk.ingest import (
    GATE_DISABLED,
    GATE_NO_PERMISSION,
    Source,
    SourceRegistry,
    dedup_key,
    fetch_feed,
    fetch_url,
    gatekeep,
    load_source_registry,
    normalize_for_dedup,
    parse_feed,
    parse_source,
)

RSS_THREE_ITEMS = """<?xml version="1.0" encoding="utf-8"?>
<rss version="2.0"><channel>
<title>Wire</title><link>http://example.com</link><description>x</description>
<item><title>First</title><link>http://example.com/1</link>
  <pubDate>Fri, 01 Aug 2026 09:00:00 GMT</pubDate></item>
<item><title>Second</title><link>http://example.com/2</link></item>
<item><title>Third</title><link>http://example.com/3</link></item>
</channel></rss>
"""

RSS_EMPTY = """<?xml version="1.0" encoding="utf-8"?>
<rss version="2.0"><channel>
<title>Wire</title><link>http://example.com</link><description>x</description>
</channel></rss>
"""

RSS_ONE_GOOD_ONE_MISSING_LINK = """<?xml version="1.0" encoding="utf-8"?>
<rss version="2.0"><channel>
<title>Wire</title><link>http://example.com</link><description>x</description>
<item><title>Good</title><link>http://example.com/good</link></item>
<item><title>No link here</title></item>
</channel></rss>
"""

ATOM_TWO_ENTRIES = """<?xml version="1.0" encoding="utf-8"?>
<feed xmlns="http://www.w3.org/2005/Atom">
<title>Wire</title><id>urn:wire</id><updated>2026-08-01T12:00:00Z</updated>
<entry><title>A</title><link rel="alternate" href="http://example.com/a"/>
  <id>urn:a</id><published>2026-08-01T09:00:00Z</published></entry>
<entry><title>B</title><link rel="alternate" href="http://example.com/b"/>
  <id>urn:b</id><updated>2026-08-02T09:00:00Z</updated></entry>
</feed>
"""


def make_source(**overrides) -> Source:
    record = {
        "id": "s1",
        "name": "Source One",
        "feed_url": "http://example.com/feed.xml",
        "homepage_url": "http://example.com",
        "republish_permitted": True,
        "enabled": True,
    }
    record.update(overrides)
    return Source(**record)


class TestGatekeep:
    def test_allow_requires_both_flags(self):
        assert gatekeep(make_source()).allowed

    def test_no_permission_denied(self):
        decision = gatekeep(make_source(republish_permitted=False))
        assert not decision.allowed
        assert decision.reason == GATE_NO_PERMISSION

    def test_disabled_denied_even_with_permission(self):
        decision = gatekeep(make_source(enabled=False, republish_permitted=True))
        assert not decision.allowed
        assert decision.reason == GATE_DISABLED

    def test_unknown_source_raises(self):
        registry = SourceRegistry([make_source()])
        with pytest.raises(UnknownSource):
            registry.gatekeep("nope")


class TestRegistry:
    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValueError):
            SourceRegistry([make_source(), make_source()])

    def test_strict_mode_rejects_unknown_fields(self):
        record = make_source().to_dict()
        record["republish_permited"] = True  # typo must not pass silently
        with pytest.raises(ValueError, match="republish_permited"):
            parse_source(record)

    def test_invalid_url_rejected(self):
        with pytest.raises(ValueError):
            make_source(feed_url="not a url")

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "sources.json"
        path.write_text(json.dumps([make_source().to_dict()]), encoding="utf-8")
        registry = load_source_registry(path)
        assert len(registry) == 1
        assert registry.get("s1").name == "Source One"


class TestFeedParsing:
    def test_rss_three_items(self):
        result = parse_feed(RSS_THREE_ITEMS.encode(), "s1")
        assert [s.title for s in result.stubs] == ["First", "Second", "Third"]
        assert [s.url for s in result.stubs] == [f"http://example.com/{i}" for i in (1, 2, 3)]
        assert result.problems == []
        assert result.stubs[0].published_at is not None
        assert result.stubs[0].published_at.tzinfo is not None

    def test_empty_feed_is_not_an_error(self):
        result = parse_feed(RSS_EMPTY.encode(), "s1")
        assert result.stubs == []
        assert result.problems == []

    def test_item_missing_link_recorded_and_skipped(self):
        # Hand count: one parseable item, one defective.
        result = parse_feed(RSS_ONE_GOOD_ONE_MISSING_LINK.encode(), "s1")
        assert len(result.stubs) == 1
        assert result.stubs[0].url == "http://example.com/good"
        assert len(result.problems) == 1
        assert result.problems[0].error == "MalformedFeed"
        assert "link" in result.problems[0].detail

    def test_atom_entries(self):
        result = parse_feed(ATOM_TWO_ENTRIES.encode(), "s1")
        assert [s.url for s in result.stubs] == ["http://example.com/a", "http://example.com/b"]
        assert result.stubs[1].published_at is not None  # falls back to <updated>

    def test_malformed_document_raises_with_byte_offset(self):
        payload = b"<rss version='2.0'><channel><item></channel></rss>"
        with pytest.raises(MalformedFeed) as excinfo:
            parse_feed(payload, "s1")
        assert excinfo.value.byte_offset is not None
        assert 0 <= excinfo.value.byte_offset <= len(payload)

    def test_unrecognized_root_raises(self):
        with pytest.raises(MalformedFeed):
            parse_feed(b"<foo/>", "s1")

    def test_fetch_feed_from_local_file(self, tmp_path):
        feed_path = tmp_path / "feed.xml"
        feed_path.write_text(RSS_THREE_ITEMS, encoding="utf-8")
        source = make_source(feed_url=feed_path.as_uri())
        result = fetch_feed(source)
        assert len(result.stubs) == 3

    def test_fetch_feed_unreachable(self, tmp_path):
        source = make_source(feed_url=(tmp_path / "missing.xml").as_uri())
        with pytest.raises(UnreachableSource):
            fetch_feed(source)


class TestFetchUrl:
    def test_local_path_content_type_by_suffix(self, tmp_path):
        page = tmp_path / "page.html"
        page.write_text("<html><body><p>hi</p></body></html>", encoding="utf-8")
        payload, content_type = fetch_url(page.as_uri())
        assert b"hi" in payload
        assert content_type == "text/html"

    def test_unsupported_scheme(self):
        with pytest.raises(UnreachableSource):
            fetch_url("ftp://example.com/feed")


class TestDedupKey:
    def test_whitespace_and_case_normalization(self):
        assert dedup_key("A  b") == dedup_key("a b")

    def test_empty_body_constant(self):
        # Frozen: blake2b-64 of the empty string, must never drift across runs.
        assert dedup_key("") == dedup_key("")
        assert dedup_key("") == 0xE4A6A0577479B2B4

    def test_distinct_bodies_distinct_keys(self):
        texts = [f"article body number {i} with distinct words" for i in range(50)]
        keys = {dedup_key(t) for t in texts}
        assert len(keys) == len(texts)

    def test_unicode_nfc_equivalence(self):
        # e + combining acute vs precomposed must hash identically.
        assert normalize_for_dedup("café") == normalize_for_dedup("café")
        assert dedup_key("café") == dedup_key("café")
