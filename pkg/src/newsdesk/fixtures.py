"""Seeded synthetic corpus generator: feeds, article pages, labels, and config.

The generated articles are built from glossary-covered vocabulary so the
whole pipeline (including mock translation and its QA battery) runs offline
and deterministically. Fixture text is demo content, not ground truth.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from importlib import resources
from pathlib import Path
from xml.sax.saxutils import escape

from .features import load_lexicons

PLACES = ["queens", "brooklyn", "bronx"]
TIMES = ["year", "week", "month"]
PERCENTS = ["12", "15", "25", "40", "60", "75"]
COUNTS = ["5,000", "93,000", "208,000"]

TITLE_TEMPLATES = [
    "{t1} and {t2} costs rise in {place}",
    "New {t1} {t2} plan for {place} residents",
    "Officials report {num} percent rise in {t1} {t2}",
    "City {t1} program will expand {t2} access",
    "{t1} {t2} services open new {place} center",
]

SENTENCE_TEMPLATES = [
    "Officials announced new {t1} and {t2} support for {place} residents.",
    "Community {t1} services will expand {t2} access for local families.",
    "City officials report {num} percent increase in {t1} and {t2} costs.",
    "New {t1} {t2} center will open in {place} this {time}.",
    "Local {t1} program will support {t2} access for {big} people.",
    "City plans {num} million fund for {t1} {t2} and {t3} benefits.",
    "{t1} and {t2} access will rise for {place} residents this {time}.",
    "News report: {t1} {t2} and {t3} costs rise in {place}.",
]

CONTAMINATION_TEMPLATE = "Community news report: {t1} plans for {place} residents."

PAGE_TEMPLATE = """<!DOCTYPE html>
<html>
<head>
<meta charset="utf-8">
<title>{title}</title>
</head>
<body>
<nav>Home | Sections | Subscribe | Sign In</nav>
<header><h1>{title}</h1></header>
<article>
{paragraphs}
</article>
<footer>Copyright 2026 Fixture Wire Desk | Contact | Privacy | Terms</footer>
<script>window.analytics = "stub";</script>
</body>
</html>
"""


@dataclass
class FixtureCorpus:
    root: Path
    config_path: Path
    sources_path: Path
    lexicons_path: Path
    glossary_path: Path
    labels_path: Path
    feeds_dir: Path
    pages_dir: Path
    labels: dict  # article page URL -> true topic


def _packaged(name: str) -> str:
    return (resources.files("newsdesk") / "data" / name).read_text(encoding="utf-8")


def _fill(template: str, rng: random.Random, words: list[str]) -> str:
    t1, t2, t3 = rng.sample(words, 3)
    text = template.format(
        t1=t1, t2=t2, t3=t3,
        place=rng.choice(PLACES),
        time=rng.choice(TIMES),
        num=rng.choice(PERCENTS),
        big=rng.choice(COUNTS),
    )
    return text[0].upper() + text[1:]


def _article(rng: random.Random, words: list[str], foreign_words: list[str],
             paragraph_count: int = 4) -> tuple[str, list[str]]:
    title = _fill(rng.choice(TITLE_TEMPLATES), rng, words)
    paragraphs = []
    for _ in range(paragraph_count):
        sentences = [_fill(rng.choice(SENTENCE_TEMPLATES), rng, words) for _ in range(2)]
        paragraphs.append(" ".join(sentences))
    if rng.random() < 0.25:
        # Light cross-topic noise so the corpus is not perfectly block-diagonal.
        paragraphs[-1] += " " + _fill(CONTAMINATION_TEMPLATE, rng, foreign_words)
    return title, paragraphs


def _page(title: str, paragraphs: list[str]) -> str:
    body = "\n".join(f"<p>{escape(p)}</p>" for p in paragraphs)
    return PAGE_TEMPLATE.format(title=escape(title), paragraphs=body)


def _rss_feed(name: str, homepage: str, items: list[tuple[str, str, datetime]]) -> str:
    parts = [
        '<?xml version="1.0" encoding="utf-8"?>',
        '<rss version="2.0">',
        "<channel>",
        f"<title>{escape(name)}</title>",
        f"<link>{escape(homepage)}</link>",
        "<description>synthetic fixture feed</description>",
    ]
    for title, url, published in items:
        stamp = published.strftime("%a, %d %b %Y %H:%M:%S GMT")
        parts += [
            "<item>",
            f"<title>{escape(title)}</title>",
            f"<link>{escape(url)}</link>",
            f"<pubDate>{stamp}</pubDate>",
            "</item>",
        ]
    parts += ["</channel>", "</rss>", ""]
    return "\n".join(parts)


def _atom_feed(name: str, feed_id: str, items: list[tuple[str, str, datetime]]) -> str:
    parts = [
        '<?xml version="1.0" encoding="utf-8"?>',
        '<feed xmlns="http://www.w3.org/2005/Atom">',
        f"<title>{escape(name)}</title>",
        f"<id>{escape(feed_id)}</id>",
        "<updated>2026-08-01T12:00:00Z</updated>",
    ]
    for index, (title, url, published) in enumerate(items):
        parts += [
            "<entry>",
            f"<title>{escape(title)}</title>",
            f'<link rel="alternate" href="{escape(url)}"/>',
            f"<id>{escape(feed_id)}:{index}</id>",
            f"<published>{published.strftime('%Y-%m-%dT%H:%M:%SZ')}</published>",
            "</entry>",
        ]
    parts += ["</feed>", ""]
    return "\n".join(parts)


def generate_fixture_corpus(root: str | Path, seed: int = 7,
                            articles_per_feed: int = 10) -> FixtureCorpus:
    """Write a self-contained fixture corpus under ``root``.

    One source per topic; the final topic ships as Atom so both feed formats
    are exercised. All paths inside the generated config are relative, so the
    directory can be moved as a unit.
    """
    rng = random.Random(seed)
    root = Path(root)
    feeds_dir = root / "feeds"
    pages_dir = root / "pages"
    feeds_dir.mkdir(parents=True, exist_ok=True)
    pages_dir.mkdir(parents=True, exist_ok=True)

    lexicons_path = root / "lexicons.json"
    glossary_path = root / "glossary.json"
    lexicons_path.write_text(_packaged("lexicons.json"), encoding="utf-8")
    glossary_path.write_text(_packaged("glossary.json"), encoding="utf-8")

    lexicons = load_lexicons(lexicons_path)
    topics = [lex.topic for lex in lexicons]
    pools = {lex.topic: sorted(lex.terms) for lex in lexicons}

    base_time = datetime(2026, 8, 1, 9, 0, tzinfo=timezone.utc)
    sources = []
    labels: dict[str, str] = {}
    seen_bodies: set[str] = set()

    for topic_index, topic in enumerate(topics):
        words = pools[topic]
        foreign = sorted(w for t in topics if t != topic for w in pools[t])
        items = []
        for i in range(articles_per_feed):
            while True:
                title, paragraphs = _article(rng, words, foreign)
                fingerprint = title + "".join(paragraphs)
                if fingerprint not in seen_bodies:
                    seen_bodies.add(fingerprint)
                    break
            page_path = pages_dir / f"{topic}_{i}.html"
            page_path.write_text(_page(title, paragraphs), encoding="utf-8")
            url = page_path.resolve().as_uri()
            labels[url] = topic
            items.append((title, url, base_time + timedelta(hours=topic_index, minutes=7 * i)))

        feed_path = feeds_dir / f"{topic}.xml"
        name = f"Fixture {topic.title()} Wire"
        homepage = pages_dir.resolve().as_uri()
        if topic_index == len(topics) - 1:
            feed_path.write_text(_atom_feed(name, f"urn:fixture:{topic}", items), encoding="utf-8")
        else:
            feed_path.write_text(_rss_feed(name, homepage, items), encoding="utf-8")
        sources.append({
            "id": f"fixture-{topic}",
            "name": name,
            "feed_url": feed_path.resolve().as_uri(),
            "homepage_url": homepage,
            "language": "en",
            "republish_permitted": True,
            "license_note": "synthetic fixture content",
            "enabled": True,
        })

    sources_path = root / "sources.json"
    sources_path.write_text(json.dumps(sources, indent=2) + "\n", encoding="utf-8")

    labels_path = root / "labels.json"
    labels_path.write_text(json.dumps(labels, indent=2) + "\n", encoding="utf-8")

    config = {
        "sources_path": "sources.json",
        "lexicons_path": "lexicons.json",
        "glossary_path": "glossary.json",
        "labels_path": "labels.json",
        "store_dir": "store",
        "feature_mode": "topic_relevance",
        "classifier_hyper": {
            "learning_rate": 0.5,
            "epochs": 500,
            "l2_lambda": 1e-4,
            "seed": 0,
            "tolerance": 1e-9,
        },
        "backends": [
            {"id": "mock", "kind": "mock_glossary", "max_chunk_chars": 1200},
            {
                "id": "remote-example",
                "kind": "remote_llm",
                "endpoint": "http://localhost:9999/v1/translate",
                "model_name": "bn-news-translator",
                "max_chunk_chars": 2000,
                "response_path": "text",
            },
        ],
    }
    config_path = root / "config.json"
    config_path.write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")

    return FixtureCorpus(
        root=root,
        config_path=config_path,
        sources_path=sources_path,
        lexicons_path=lexicons_path,
        glossary_path=glossary_path,
        labels_path=labels_path,
        feeds_dir=feeds_dir,
        pages_dir=pages_dir,
        labels=labels,
    )
