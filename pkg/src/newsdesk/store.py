"""Append-only JSON-lines persistence with in-memory secondary indexes.

One directory holds one store: ``articles.jsonl``, ``jobs.jsonl``,
``runs.jsonl``, ``labels.jsonl`` and a ``models/`` subdirectory. Records are
never rewritten; label corrections are new events whose latest entry wins.
A torn trailing line (crash mid-append) is dropped on reload, so reloads are
prefix-consistent.
"""

from __future__ import annotations

import fcntl
import json
import logging
import os
from collections import defaultdict
from datetime import datetime, timezone
from pathlib import Path

from .errors import MalformedFilter, StoreLocked, UnknownArticle, UnknownJob
from .features import tokenize
from .ingest import Article
from .translator import TranslationJob

logger = logging.getLogger(__name__)

LABEL_ORIGIN_OPERATOR = "operator"
LABEL_ORIGIN_MODEL = "model"

_FILTER_KEYS = {"class_label", "topic_min_score", "source_id", "text_query", "limit", "offset"}


def _read_jsonl(path: Path) -> list[dict]:
    """Load records; stop at the first undecodable line (prefix consistency)."""
    if not path.exists():
        return []
    records = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError:
                logger.warning("%s: dropping torn record at line %d and after", path, lineno + 1)
                break
    return records


class ArticleStore:
    """Single-writer, many-reader store for articles, jobs, labels, and runs."""

    def __init__(self, root: str | Path, writer: bool = True):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "models").mkdir(exist_ok=True)
        self._lock_handle = None
        if writer:
            self._acquire_lock()

        self._articles: dict[str, Article] = {}
        self._order: list[str] = []
        self._by_source: dict[str, list[str]] = defaultdict(list)
        self._by_hash: set[int] = set()
        self._jobs: dict[str, TranslationJob] = {}
        self._jobs_by_article: dict[str, list[str]] = defaultdict(list)
        self._runs: list[dict] = []
        self._label_events: list[dict] = []
        self._label_overrides: dict[str, str] = {}
        self._load()

    # -- lifecycle ----------------------------------------------------------

    def _acquire_lock(self) -> None:
        handle = open(self.root / "lock", "w")
        try:
            fcntl.flock(handle.fileno(), fcntl.LOCK_EX | fcntl.LOCK_NB)
        except OSError:
            handle.close()
            raise StoreLocked(f"another writer holds the lock on {self.root}") from None
        self._lock_handle = handle

    def close(self) -> None:
        if self._lock_handle is not None:
            fcntl.flock(self._lock_handle.fileno(), fcntl.LOCK_UN)
            self._lock_handle.close()
            self._lock_handle = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _load(self) -> None:
        for record in _read_jsonl(self.root / "articles.jsonl"):
            article = Article.from_dict(record)
            self._index_article(article)
        for record in _read_jsonl(self.root / "jobs.jsonl"):
            job = TranslationJob.from_dict(record)
            self._jobs[job.id] = job
            if job.article_id:
                self._jobs_by_article[job.article_id].append(job.id)
        self._runs = _read_jsonl(self.root / "runs.jsonl")
        self._label_events = _read_jsonl(self.root / "labels.jsonl")
        for event in self._label_events:
            self._label_overrides[event["article_id"]] = event["class_label"]

    def _index_article(self, article: Article) -> None:
        self._articles[article.id] = article
        self._order.append(article.id)
        self._by_source[article.source_id].append(article.id)
        self._by_hash.add(article.dedup_hash)

    def _append(self, filename: str, record: dict) -> None:
        path = self.root / filename
        with open(path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
            handle.flush()
            os.fsync(handle.fileno())

    # -- articles -------------------------------------------------------------

    def append_article(self, article: Article) -> None:
        if article.id in self._articles:
            raise ValueError(f"duplicate article id {article.id!r}")
        self._append("articles.jsonl", article.to_dict())
        self._index_article(article)

    def has_dedup_hash(self, key: int) -> bool:
        return key in self._by_hash

    def get_article(self, article_id: str) -> Article:
        try:
            return self._articles[article_id]
        except KeyError:
            raise UnknownArticle(f"article {article_id!r} not in store") from None

    def __len__(self) -> int:
        return len(self._articles)

    def articles(self) -> list[Article]:
        return [self._articles[i] for i in self._order]

    def effective_label(self, article_id: str) -> str | None:
        """Latest operator/model label event wins over the ingest-time label."""
        if article_id in self._label_overrides:
            return self._label_overrides[article_id]
        return self.get_article(article_id).class_label

    # -- labels ---------------------------------------------------------------

    def append_label(self, article_id: str, class_label: str, origin: str) -> None:
        if article_id not in self._articles:
            raise UnknownArticle(f"article {article_id!r} not in store")
        event = {
            "article_id": article_id,
            "class_label": class_label,
            "origin": origin,
            "at": datetime.now(timezone.utc).isoformat(),
        }
        self._append("labels.jsonl", event)
        self._label_events.append(event)
        self._label_overrides[article_id] = class_label

    def operator_labels(self) -> dict[str, str]:
        labels = {}
        for event in self._label_events:
            if event.get("origin") == LABEL_ORIGIN_OPERATOR:
                labels[event["article_id"]] = event["class_label"]
        return labels

    # -- jobs -------------------------------------------------------------------

    def append_job(self, job: TranslationJob) -> None:
        self._append("jobs.jsonl", job.to_dict())
        self._jobs[job.id] = job
        if job.article_id:
            self._jobs_by_article[job.article_id].append(job.id)

    def get_job(self, job_id: str) -> TranslationJob:
        try:
            return self._jobs[job_id]
        except KeyError:
            raise UnknownJob(f"translation job {job_id!r} not in store") from None

    def jobs_for_article(self, article_id: str) -> list[TranslationJob]:
        return [self._jobs[j] for j in self._jobs_by_article.get(article_id, [])]

    def has_done_translation(self, article_id: str) -> bool:
        return any(j.status == "done" for j in self.jobs_for_article(article_id))

    # -- runs ---------------------------------------------------------------------

    def append_run(self, run_record: dict) -> None:
        self._append("runs.jsonl", run_record)
        self._runs.append(run_record)

    def latest_run(self) -> dict | None:
        return self._runs[-1] if self._runs else None

    # -- queries --------------------------------------------------------------------

    def query_articles(self, filters: dict | None = None) -> tuple[list[Article], int]:
        """Conjunctive filtering with stable ordering (fetched_at desc, then id).

        Returns (page, total matches before paging).
        """
        filters = dict(filters or {})
        unknown = set(filters) - _FILTER_KEYS
        if unknown:
            raise MalformedFilter(f"unknown filter keys: {sorted(unknown)}")

        limit = filters.pop("limit", 50)
        offset = filters.pop("offset", 0)
        if not isinstance(limit, int) or not isinstance(offset, int) or limit < 0 or offset < 0:
            raise MalformedFilter("limit and offset must be non-negative integers")

        class_label = filters.get("class_label")
        source_id = filters.get("source_id")
        text_query = filters.get("text_query")
        topic_min = filters.get("topic_min_score")
        if topic_min is not None:
            try:
                topic, threshold = topic_min
                threshold = float(threshold)
            except (TypeError, ValueError):
                raise MalformedFilter("topic_min_score must be a (topic, threshold) pair") from None

        query_tokens = tokenize(text_query) if text_query else []

        matches = []
        for article in self._articles.values():
            if class_label is not None and self.effective_label(article.id) != class_label:
                continue
            if source_id is not None and article.source_id != source_id:
                continue
            if topic_min is not None and article.topic_scores.get(topic, 0.0) < threshold:
                continue
            if query_tokens:
                doc_tokens = set(tokenize(f"{article.title}\n{article.body}"))
                if not all(tok in doc_tokens for tok in query_tokens):
                    continue
            matches.append(article)

        matches.sort(key=lambda a: a.id)
        matches.sort(key=lambda a: a.fetched_at, reverse=True)
        total = len(matches)
        return matches[offset:offset + limit], total

    # -- models -----------------------------------------------------------------------

    @property
    def model_path(self) -> Path:
        return self.root / "models" / "current.json"

    @property
    def model_schema_path(self) -> Path:
        return self.root / "models" / "current.schema.json"
