"""newsdesk: news ingestion, topic classification, and Bangla translation."""

from .classifier import ClassifierModel, EvalReport, Hyper, evaluate, predict, softmax, train
from .errors import NewsdeskError
from .features import (
    FeatureMatrix,
    TopicLexicon,
    Vocabulary,
    build_vocabulary,
    featurize_tfidf,
    featurize_topics,
    tokenize,
)
from .ingest import Article, ArticleStub, Source, SourceRegistry, dedup_key, fetch_feed, gatekeep
from .extract import extract_text
from .service import AppConfig, NewsdeskService, PipelineRun, load_config
from .store import ArticleStore
from .translator import (
    QAReport,
    TranslationBackendSpec,
    TranslationJob,
    chunk_text,
    mock_translate,
    qa_check,
    translate,
)

__version__ = "0.1.0"

__all__ = [
    "AppConfig",
    "Article",
    "ArticleStore",
    "ArticleStub",
    "ClassifierModel",
    "EvalReport",
    "FeatureMatrix",
    "Hyper",
    "NewsdeskError",
    "NewsdeskService",
    "PipelineRun",
    "QAReport",
    "Source",
    "SourceRegistry",
    "TopicLexicon",
    "TranslationBackendSpec",
    "TranslationJob",
    "Vocabulary",
    "build_vocabulary",
    "chunk_text",
    "dedup_key",
    "evaluate",
    "extract_text",
    "featurize_tfidf",
    "featurize_topics",
    "fetch_feed",
    "gatekeep",
    "load_config",
    "mock_translate",
    "predict",
    "qa_check",
    "softmax",
    "tokenize",
    "train",
    "translate",
]
