"""Article-by-topic and article-by-term feature matrices.

Two featurization modes share one matrix container: ``topic_relevance``
scores articles against weighted topic lexicons, and ``tfidf`` builds a
bag-of-words matrix over a corpus vocabulary.
"""

from __future__ import annotations

import csv
import json
import math
import unicodedata
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyCorpus, EmptyLexicons, SchemaMismatch
from .ingest import Article, schema_digest_of

MODE_TOPIC = "topic_relevance"
MODE_TFIDF = "tfidf"

# Labels aligned to matrix rows; every entry must belong to the configured
# class set, and the length must equal the matrix row count.
LabelVector = list


def nfc_lower(text: str) -> str:
    return unicodedata.normalize("NFC", text).lower()


def _is_word_char(ch: str) -> bool:
    # Letters, combining marks, and digits form tokens; marks matter because
    # Bengali vowel signs are category Mc and must not split words.
    return unicodedata.category(ch)[0] in ("L", "M", "N")


def tokenize(text: str) -> list[str]:
    """Split normalized text into letter/digit tokens, Latin or Bengali alike."""
    text = nfc_lower(text)
    tokens = []
    current: list[str] = []
    for ch in text:
        if _is_word_char(ch):
            current.append(ch)
        elif current:
            tokens.append("".join(current))
            current = []
    if current:
        tokens.append("".join(current))
    # A run of bare combining marks is not a token.
    return [t for t in tokens if any(unicodedata.category(c)[0] in ("L", "N") for c in t)]


def _doc_text(doc) -> str:
    if isinstance(doc, str):
        return doc
    return f"{doc.title}\n{doc.body}"


def _doc_id(doc, index: int) -> str:
    if isinstance(doc, Article):
        return doc.id
    return f"doc{index}"


# --- topic lexicons ---------------------------------------------------------

@dataclass(frozen=True)
class TopicLexicon:
    """One editorial topic as a weighted term list (tokens pre-normalized)."""

    topic: str
    terms: dict[str, float]

    def __post_init__(self):
        for token, weight in self.terms.items():
            if weight <= 0:
                raise ValueError(f"lexicon {self.topic!r}: weight for {token!r} must be > 0")


def load_lexicons(path: str | Path) -> list[TopicLexicon]:
    """Read the lexicon file: a JSON array of {topic, terms: [{token, weight}]}."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    lexicons = []
    seen = set()
    for entry in data:
        topic = entry["topic"]
        if topic in seen:
            raise ValueError(f"duplicate topic {topic!r} in lexicon file")
        seen.add(topic)
        terms = {nfc_lower(t["token"]): float(t["weight"]) for t in entry["terms"]}
        lexicons.append(TopicLexicon(topic=topic, terms=terms))
    return lexicons


def save_lexicons(lexicons: list[TopicLexicon], path: str | Path) -> None:
    data = [
        {"topic": lex.topic,
         "terms": [{"token": tok, "weight": w} for tok, w in sorted(lex.terms.items())]}
        for lex in lexicons
    ]
    Path(path).write_text(json.dumps(data, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")


# --- vocabulary -------------------------------------------------------------

@dataclass
class Vocabulary:
    """Deterministic column schema for bag-of-words features."""

    terms: list[str]
    document_frequency: dict[str, int]
    corpus_size: int

    def to_dict(self) -> dict:
        return {
            "terms": self.terms,
            "document_frequency": self.document_frequency,
            "corpus_size": self.corpus_size,
        }

    @classmethod
    def from_dict(cls, record: dict) -> "Vocabulary":
        return cls(
            terms=list(record["terms"]),
            document_frequency={k: int(v) for k, v in record["document_frequency"].items()},
            corpus_size=int(record["corpus_size"]),
        )


def build_vocabulary(corpus, min_df: int = 1, max_terms: int = 20000) -> Vocabulary:
    """Collect corpus terms with document frequency >= min_df.

    When more than max_terms survive, the highest-df terms win, ties broken
    lexicographically; the final term list is sorted lexicographically so
    column order is reproducible.
    """
    docs = list(corpus)
    if not docs:
        raise EmptyCorpus("cannot build a vocabulary from an empty corpus")
    df: Counter = Counter()
    for doc in docs:
        df.update(set(tokenize(_doc_text(doc))))
    kept = [t for t, n in df.items() if n >= min_df]
    if len(kept) > max_terms:
        kept.sort(key=lambda t: (-df[t], t))
        kept = kept[:max_terms]
    kept.sort()
    return Vocabulary(
        terms=kept,
        document_frequency={t: df[t] for t in kept},
        corpus_size=len(docs),
    )


# --- matrices ---------------------------------------------------------------

@dataclass
class FeatureMatrix:
    """N articles by M columns; rows align with ``rows`` article ids."""

    rows: list[str]
    columns: list[str]
    values: np.ndarray
    mode: str

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (len(self.rows), len(self.columns)):
            raise SchemaMismatch(
                f"matrix shape {self.values.shape} does not match "
                f"{len(self.rows)} rows x {len(self.columns)} columns")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return len(self.columns)

    def schema_digest(self) -> int:
        return schema_digest_of([self.mode, *self.columns])

    def row_for(self, article_id: str) -> np.ndarray:
        return self.values[self.rows.index(article_id)]


def featurize_tfidf(corpus, vocab: Vocabulary) -> FeatureMatrix:
    """TF-IDF matrix: tf = raw count, idf = ln((1+N)/(1+df)) + 1, rows L2-normalized.

    N is the corpus size recorded when the vocabulary was built, so documents
    scored later against the same vocabulary get identical idf weights.
    """
    if not vocab.terms:
        raise SchemaMismatch("vocabulary is empty")
    docs = list(corpus)
    index = {t: j for j, t in enumerate(vocab.terms)}
    idf = np.array(
        [math.log((1 + vocab.corpus_size) / (1 + vocab.document_frequency[t])) + 1.0
         for t in vocab.terms])
    values = np.zeros((len(docs), len(vocab.terms)))
    for i, doc in enumerate(docs):
        counts = Counter(tokenize(_doc_text(doc)))
        for token, count in counts.items():
            j = index.get(token)
            if j is not None:
                values[i, j] = count * idf[j]
        norm = np.linalg.norm(values[i])
        if norm > 0:
            values[i] /= norm
    return FeatureMatrix(
        rows=[_doc_id(d, i) for i, d in enumerate(docs)],
        columns=list(vocab.terms),
        values=values,
        mode=MODE_TFIDF,
    )


def featurize_topics(corpus, lexicons: list[TopicLexicon]) -> FeatureMatrix:
    """Topic-relevance matrix: weighted lexicon hits per token, clamped to [0, 1]."""
    if not lexicons:
        raise EmptyLexicons("at least one topic lexicon is required")
    docs = list(corpus)
    values = np.zeros((len(docs), len(lexicons)))
    for i, doc in enumerate(docs):
        values[i] = topic_scores_for_text(_doc_text(doc), lexicons)
    return FeatureMatrix(
        rows=[_doc_id(d, i) for i, d in enumerate(docs)],
        columns=[lex.topic for lex in lexicons],
        values=values,
        mode=MODE_TOPIC,
    )


def topic_scores_for_text(text: str, lexicons: list[TopicLexicon]) -> np.ndarray:
    """Per-topic relevance of one text: sum of hit weights / token count."""
    tokens = tokenize(text)
    scores = np.zeros(len(lexicons))
    if not tokens:
        return scores
    counts = Counter(tokens)
    for j, lex in enumerate(lexicons):
        total = sum(weight * counts[token] for token, weight in lex.terms.items() if token in counts)
        scores[j] = min(1.0, total / len(tokens))
    return scores


def export_matrix_csv(matrix: FeatureMatrix, path: str | Path) -> None:
    """Debug/CLI export: header row is the column schema, first column the article id."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["article_id", *matrix.columns])
        for row_id, row in zip(matrix.rows, matrix.values):
            writer.writerow([row_id, *(repr(v) for v in row)])
