"""End-to-end orchestration: ingest, featurize, classify, translate on demand.

The pipeline mirrors the editorial workflow: poll permitted sources, extract
and deduplicate articles, score them against the topic lexicons, assign a
class with the trained model, and leave translation to explicit per-article
requests from the review dashboard or CLI.
"""

from __future__ import annotations

import json
import logging
import random
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import classifier as clf
from .errors import (
    InsufficientLabels,
    MalformedFilter,
    NewsdeskError,
    NoEligibleSources,
    NoModel,
    UnknownBackend,
)
from .extract import extract_text
from .features import (
    MODE_TFIDF,
    MODE_TOPIC,
    FeatureMatrix,
    Vocabulary,
    build_vocabulary,
    featurize_tfidf,
    featurize_topics,
    load_lexicons,
    topic_scores_for_text,
)
from .ingest import (
    Article,
    ArticleStub,
    SourceRegistry,
    build_article,
    dedup_key,
    fetch_feed,
    fetch_url,
    load_source_registry,
)
from .store import LABEL_ORIGIN_MODEL, LABEL_ORIGIN_OPERATOR, ArticleStore
from .translator import (
    TranslationBackendSpec,
    TranslationFailed,
    TranslationJob,
    build_backend,
    load_glossary,
    translate,
)

logger = logging.getLogger(__name__)

OTHER_CLASS = "other"

LABELS_FIXTURE = "fixture-labels"
LABELS_OPERATOR = "operator-labels"


@dataclass
class AppConfig:
    """Deployment configuration; every path may be absolute or config-relative."""

    sources_path: Path
    lexicons_path: Path
    glossary_path: Path
    store_dir: Path
    backends: list[TranslationBackendSpec] = field(default_factory=list)
    feature_mode: str = MODE_TOPIC
    classifier_hyper: clf.Hyper = field(default_factory=clf.Hyper)
    labels_path: Path | None = None
    parallelism: int = 4
    translate_concurrency: int = 2

    def __post_init__(self):
        if self.feature_mode not in (MODE_TOPIC, MODE_TFIDF):
            raise ValueError(f"unknown feature_mode {self.feature_mode!r}")


def load_config(path: str | Path) -> AppConfig:
    """Read the JSON config file; relative paths resolve against its directory."""
    path = Path(path)
    data = json.loads(path.read_text(encoding="utf-8"))
    base = path.parent

    def resolve(value):
        p = Path(value)
        return p if p.is_absolute() else (base / p)

    hyper = clf.Hyper(**data.get("classifier_hyper", {}))
    backends = [TranslationBackendSpec.from_dict(b) for b in data.get("backends", [])]
    return AppConfig(
        sources_path=resolve(data["sources_path"]),
        lexicons_path=resolve(data["lexicons_path"]),
        glossary_path=resolve(data["glossary_path"]),
        store_dir=resolve(data["store_dir"]),
        backends=backends,
        feature_mode=data.get("feature_mode", MODE_TOPIC),
        classifier_hyper=hyper,
        labels_path=resolve(data["labels_path"]) if data.get("labels_path") else None,
        parallelism=data.get("parallelism", 4),
        translate_concurrency=data.get("translate_concurrency", 2),
    )


@dataclass
class PipelineRun:
    """Bookkeeping for one ingest/featurize/classify execution."""

    run_id: str
    started_at: datetime
    finished_at: datetime | None = None
    sources_polled: int = 0
    articles_fetched: int = 0
    ingested: int = 0
    deduped: int = 0
    gate_denied: int = 0
    extraction_failures: int = 0
    classified: int = 0
    errors: list = field(default_factory=list)

    def record_error(self, stage: str, subject_id: str, reason: str) -> None:
        self.errors.append({"stage": stage, "id": subject_id, "reason": reason})

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "started_at": self.started_at.isoformat(),
            "finished_at": self.finished_at.isoformat() if self.finished_at else None,
            "sources_polled": self.sources_polled,
            "articles_fetched": self.articles_fetched,
            "ingested": self.ingested,
            "deduped": self.deduped,
            "gate_denied": self.gate_denied,
            "extraction_failures": self.extraction_failures,
            "classified": self.classified,
            "errors": self.errors,
        }


class NewsdeskService:
    """Owns the store plus the loaded registry, lexicons, glossary, and model."""

    def __init__(self, config: AppConfig, store: ArticleStore | None = None):
        self.config = config
        self.registry: SourceRegistry = load_source_registry(config.sources_path)
        self.lexicons = load_lexicons(config.lexicons_path)
        self.glossary = load_glossary(config.glossary_path)
        # Explicit None check: an empty store is len() == 0 and would be falsy.
        self.store = store if store is not None else ArticleStore(config.store_dir)
        self.backends: dict[str, TranslationBackendSpec] = {b.id: b for b in config.backends}
        self._backend_impls: dict[str, object] = {}
        self._translate_slots = threading.Semaphore(config.translate_concurrency)
        self._model: clf.ClassifierModel | None = None
        self._vocabulary: Vocabulary | None = None
        if self.store.model_path.exists():
            self._model = clf.load_model(self.store.model_path)
            if self.store.model_schema_path.exists():
                schema = json.loads(self.store.model_schema_path.read_text(encoding="utf-8"))
                if schema.get("mode") == MODE_TFIDF:
                    self._vocabulary = Vocabulary.from_dict(schema["vocabulary"])

    def close(self) -> None:
        self.store.close()

    @property
    def class_set(self) -> list[str]:
        """Configured classes: one per topic plus the catch-all ``other``."""
        return [lex.topic for lex in self.lexicons] + [OTHER_CLASS]

    @property
    def model(self) -> clf.ClassifierModel | None:
        return self._model

    # -- backends -------------------------------------------------------------

    def backend_for(self, backend_id: str):
        if backend_id not in self.backends:
            raise UnknownBackend(f"no translation backend registered as {backend_id!r}")
        if backend_id not in self._backend_impls:
            self._backend_impls[backend_id] = build_backend(
                self.backends[backend_id], glossary=self.glossary)
        return self.backends[backend_id], self._backend_impls[backend_id]

    # -- featurization ----------------------------------------------------------

    def _matrix_for(self, articles: list[Article]) -> FeatureMatrix:
        if self.config.feature_mode == MODE_TOPIC:
            return featurize_topics(articles, self.lexicons)
        if self._vocabulary is None:
            self._vocabulary = build_vocabulary(articles, min_df=1, max_terms=5000)
        return featurize_tfidf(articles, self._vocabulary)

    # -- pipeline ------------------------------------------------------------------

    def run_pipeline(self, train: bool = False,
                     label_source: str = LABELS_FIXTURE) -> PipelineRun:
        """Execute one end-to-end pass: ingest, (optionally train), classify, persist."""
        eligible = [s for s in self.registry if self.registry.gatekeep(s.id).allowed]
        if not eligible:
            raise NoEligibleSources("no enabled source with republish permission")
        if self._model is None and not train:
            raise NoModel("no trained model in store; run with train enabled first")

        run = PipelineRun(run_id=uuid.uuid4().hex[:12], started_at=datetime.now(timezone.utc))
        stubs = self._poll_sources(eligible, run)
        new_articles = self.ingest_stubs(stubs, run)

        if train:
            # Articles land unlabeled, then a fresh model labels them via events.
            for article in new_articles:
                self.store.append_article(article)
                run.ingested += 1
            self.train_from_store(label_source=label_source)
            run.classified = self.classify_unlabeled()
        else:
            if new_articles:
                matrix = self._matrix_for(new_articles)
                for article, label in zip(new_articles, clf.predict(self._model, matrix)):
                    article.class_label = label
            for article in new_articles:
                self.store.append_article(article)
                run.ingested += 1
            run.classified = len(new_articles)

        run.finished_at = datetime.now(timezone.utc)
        self.store.append_run(run.to_dict())
        return run

    def _poll_sources(self, eligible, run: PipelineRun) -> list[ArticleStub]:
        """Fetch feeds concurrently; one failing source never aborts the rest."""
        results: dict[str, list[ArticleStub]] = {}

        def poll(source):
            return fetch_feed(source, timeout=10.0)

        workers = max(1, min(self.config.parallelism, len(eligible)))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(poll, source): source for source in eligible}
            for future, source in futures.items():
                try:
                    result = future.result()
                except NewsdeskError as exc:
                    run.record_error("ingest", source.id, f"{exc.code}: {exc.message}")
                    continue
                run.sources_polled += 1
                results[source.id] = result.stubs
                for problem in result.problems:
                    run.record_error("ingest", source.id, f"{problem.error}: {problem.detail}")

        # Registry order keeps multi-source runs deterministic.
        stubs: list[ArticleStub] = []
        for source in eligible:
            stubs.extend(results.get(source.id, []))
        return stubs

    def ingest_stubs(self, stubs: list[ArticleStub], run: PipelineRun) -> list[Article]:
        """Gate, extract, and deduplicate stubs into fresh Article records.

        The gate is re-checked per stub; articles from denied or unknown
        sources never pass, whatever path produced the stub.
        """
        new_articles: list[Article] = []
        seen_hashes: set[int] = set()
        for stub in stubs:
            run.articles_fetched += 1
            try:
                decision = self.registry.gatekeep(stub.source_id)
            except NewsdeskError:
                decision = None
            if decision is None or not decision.allowed:
                reason = decision.reason if decision else "unknown_source"
                run.gate_denied += 1
                run.record_error("gate", stub.url, reason)
                continue
            source = self.registry.get(stub.source_id)

            payload, content_type = stub.raw_payload, "text/html"
            if not payload:
                try:
                    payload, content_type = fetch_url(stub.url, timeout=10.0)
                except NewsdeskError as exc:
                    run.extraction_failures += 1
                    run.record_error("fetch_page", stub.url, f"{exc.code}: {exc.message}")
                    continue
            try:
                title, body = extract_text(payload, content_type)
            except NewsdeskError as exc:
                run.extraction_failures += 1
                run.record_error("extract", stub.url, f"{exc.code}: {exc.message}")
                continue

            key = dedup_key(body)
            if key in seen_hashes or self.store.has_dedup_hash(key):
                run.deduped += 1
                continue
            seen_hashes.add(key)

            article = build_article(stub, title=stub.title or title, body=body,
                                    language=source.language)
            article.topic_scores = {
                lex.topic: float(score)
                for lex, score in zip(self.lexicons,
                                      topic_scores_for_text(f"{article.title}\n{article.body}",
                                                            self.lexicons))
            }
            new_articles.append(article)
        return new_articles

    def classify_unlabeled(self) -> int:
        """Label every stored article that still has no effective label."""
        pending = [a for a in self.store.articles() if self.store.effective_label(a.id) is None]
        if not pending:
            return 0
        if self._model is None:
            raise NoModel("classification requested without a trained model")
        matrix = self._matrix_for(pending)
        for article, label in zip(pending, clf.predict(self._model, matrix)):
            self.store.append_label(article.id, label, LABEL_ORIGIN_MODEL)
        return len(pending)

    # -- training ---------------------------------------------------------------------

    def _labeled_articles(self, label_source: str) -> tuple[list[Article], list[str]]:
        if label_source == LABELS_FIXTURE:
            if not self.config.labels_path or not Path(self.config.labels_path).exists():
                raise InsufficientLabels("no fixture labels file configured")
            by_url = json.loads(Path(self.config.labels_path).read_text(encoding="utf-8"))
            pairs = [(a, by_url[a.url]) for a in self.store.articles() if a.url in by_url]
        elif label_source == LABELS_OPERATOR:
            operator = self.store.operator_labels()
            pairs = [(a, operator[a.id]) for a in self.store.articles() if a.id in operator]
        else:
            raise MalformedFilter(f"unknown label source {label_source!r}")
        if not pairs:
            raise InsufficientLabels(f"no labeled articles available from {label_source}")
        articles, labels = zip(*pairs)
        return list(articles), list(labels)

    def train_from_store(self, label_source: str = LABELS_FIXTURE,
                         hyper: clf.Hyper | None = None,
                         holdout_fraction: float = 0.0,
                         holdout_seed: int = 13) -> tuple[clf.ClassifierModel, clf.EvalReport | None]:
        """Train on labeled stored articles and persist the model.

        With a holdout fraction, a deterministic split is evaluated first and
        the returned report reflects that held-out accuracy; the persisted
        model is always retrained on all labeled articles.
        """
        hyper = hyper or self.config.classifier_hyper
        articles, labels = self._labeled_articles(label_source)
        distinct = sorted(set(labels))
        if len(articles) < len(distinct):
            raise InsufficientLabels(
                f"{len(articles)} labeled articles cannot cover {len(distinct)} classes")

        if self.config.feature_mode == MODE_TFIDF:
            self._vocabulary = build_vocabulary(articles, min_df=1, max_terms=5000)
        matrix = self._matrix_for(articles)

        report = None
        if holdout_fraction > 0.0:
            rng = random.Random(holdout_seed)
            indices = list(range(len(articles)))
            rng.shuffle(indices)
            n_holdout = max(1, round(holdout_fraction * len(indices)))
            holdout_idx = sorted(indices[:n_holdout])
            train_idx = sorted(indices[n_holdout:])
            train_matrix = FeatureMatrix(
                rows=[matrix.rows[i] for i in train_idx],
                columns=matrix.columns,
                values=matrix.values[train_idx],
                mode=matrix.mode,
            )
            holdout_matrix = FeatureMatrix(
                rows=[matrix.rows[i] for i in holdout_idx],
                columns=matrix.columns,
                values=matrix.values[holdout_idx],
                mode=matrix.mode,
            )
            split_model = clf.train(train_matrix, [labels[i] for i in train_idx], hyper)
            report = clf.evaluate(split_model, holdout_matrix, [labels[i] for i in holdout_idx])

        model = clf.train(matrix, labels, hyper)
        clf.save_model(model, self.store.model_path)
        schema_record: dict = {"mode": matrix.mode, "columns": matrix.columns}
        if self.config.feature_mode == MODE_TFIDF and self._vocabulary is not None:
            schema_record["vocabulary"] = self._vocabulary.to_dict()
        self.store.model_schema_path.write_text(
            json.dumps(schema_record) + "\n", encoding="utf-8")
        self._model = model
        return model, report

    # -- queries and translation ---------------------------------------------------------

    def query_articles(self, filters: dict | None = None) -> tuple[list[Article], int]:
        return self.store.query_articles(filters)

    def translate_article(self, article_id: str, backend_id: str) -> TranslationJob:
        """Translate one article's title and body; the job persists either way."""
        article = self.store.get_article(article_id)
        spec, backend = self.backend_for(backend_id)
        with self._translate_slots:
            try:
                job = translate(article.body, spec, backend,
                                article_id=article.id, title=article.title)
            except TranslationFailed as failure:
                self.store.append_job(failure.job)
                raise failure.cause from failure
        self.store.append_job(job)
        return job

    def set_operator_label(self, article_id: str, class_label: str) -> None:
        if class_label not in self.class_set:
            raise MalformedFilter(
                f"class_label {class_label!r} is not in the configured class set")
        self.store.append_label(article_id, class_label, LABEL_ORIGIN_OPERATOR)
