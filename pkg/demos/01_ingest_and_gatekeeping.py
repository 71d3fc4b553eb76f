"""Walk through ingestion: registry, the republish gate, feeds, and dedup.

Run:  python demos/01_ingest_and_gatekeeping.py
"""

import tempfile
from pathlib import Path

from newsdesk.extract import extract_text
from newsdesk.ingest import Source, dedup_key, fetch_feed, gatekeep, parse_feed

# A source only contributes articles when it is enabled AND has granted
# republish permission. Everything else is denied with a machine reason.
times = Source(id="nyt", name="City Times", feed_url="http://times.test/rss.xml",
               homepage_url="http://times.test", republish_permitted=True)
blog = Source(id="blog", name="Random Blog", feed_url="http://blog.test/rss.xml",
              homepage_url="http://blog.test", republish_permitted=False)
paused = Source(id="paused", name="Paused Wire", feed_url="http://p.test/rss.xml",
                homepage_url="http://p.test", republish_permitted=True, enabled=False)

for source in (times, blog, paused):
    decision = gatekeep(source)
    verdict = "ALLOW" if decision.allowed else f"DENY ({decision.reason})"
    print(f"{source.id:8s} -> {verdict}")

# Feeds are plain RSS 2.0 or Atom 1.0 documents; a defective item is recorded
# and skipped instead of poisoning the rest of the feed.
feed_xml = b"""<?xml version="1.0" encoding="utf-8"?>
<rss version="2.0"><channel>
<title>City Times</title><link>http://times.test</link><description>d</description>
<item><title>Rents rise</title><link>http://times.test/rents</link></item>
<item><title>No link, gets skipped</title></item>
<item><title>Clinic opens</title><link>http://times.test/clinic</link></item>
</channel></rss>
"""
result = parse_feed(feed_xml, "nyt")
print(f"\nparsed {len(result.stubs)} stubs, {len(result.problems)} problem(s)")
for problem in result.problems:
    print(f"  recorded: {problem.error}: {problem.detail}")

# fetch_feed works identically over http(s) and file:// URLs, so everything
# here runs offline.
with tempfile.TemporaryDirectory() as tmp:
    feed_path = Path(tmp) / "feed.xml"
    feed_path.write_bytes(feed_xml)
    local = Source(id="local", name="Local Fixture", feed_url=feed_path.as_uri(),
                   homepage_url="http://local.test", republish_permitted=True)
    print(f"\nfrom {feed_path.as_uri()}: {len(fetch_feed(local).stubs)} stubs")

# Extraction strips markup, scripts, and navigation chrome; paragraph breaks
# become newlines.
page = b"""<html><head><title>Rents rise</title></head><body>
<nav>Home | Subscribe</nav>
<p>Rents rose 12 percent.</p><p>Tenants organized.</p>
<script>track()</script></body></html>"""
title, body = extract_text(page, "text/html")
print(f"\ntitle: {title!r}")
print(f"body:  {body!r}")

# Dedup keys are computed on normalized text, so trivial reformatting of the
# same body maps to the same 64-bit fingerprint.
print("\ndedup_key('A  b') == dedup_key('a b'):", dedup_key("A  b") == dedup_key("a b"))
print("dedup_key differs for real edits:", dedup_key("a b") != dedup_key("a c"))
