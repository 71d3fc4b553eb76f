"""English-to-Bangla translation: chunking, pluggable backends, and QA checks.

The backend contract is vendor-free: a remote LLM speaks a small JSON-over-HTTP
protocol, and a deterministic glossary mock stands in for it so every test and
demo runs offline.
"""

from __future__ import annotations

import os
import re
import unicodedata
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone

import httpx

from .errors import BackendRefusal, BackendUnavailable, EmptyInput
from .features import nfc_lower

SENTENCE_TERMINATORS = ".!?।"  # including the Bengali danda
MARKER_OPEN = "⟨"   # ⟨ wraps tokens the mock cannot translate
MARKER_CLOSE = "⟩"  # ⟩

BENGALI_BLOCK = (0x0980, 0x09FF)
_BENGALI_DIGITS = str.maketrans({chr(0x09E6 + v): str(v) for v in range(10)})

API_KEY_ENV = "BANGLA_AI_API_KEY"

DEFAULT_PROMPT_TEMPLATE = (
    "Translate the following English news text to Bangla. "
    "Keep every number and proper name intact.\n\n{text}"
)


@dataclass(frozen=True)
class TranslationBackendSpec:
    """Operator-editable backend configuration; no vendor is hard-wired."""

    id: str
    kind: str  # "remote_llm" | "mock_glossary"
    endpoint: str = ""
    model_name: str = ""
    prompt_template: str = DEFAULT_PROMPT_TEMPLATE
    max_chunk_chars: int = 2000
    timeout: float = 30.0
    max_retries: int = 2
    response_path: str = "text"

    def __post_init__(self):
        if self.kind not in ("remote_llm", "mock_glossary"):
            raise ValueError(f"unknown backend kind {self.kind!r}")
        if self.prompt_template.count("{text}") != 1:
            raise ValueError("prompt_template must contain exactly one {text} placeholder")
        if self.max_chunk_chars < 200:
            raise ValueError("max_chunk_chars must be at least 200")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")

    @classmethod
    def from_dict(cls, record: dict) -> "TranslationBackendSpec":
        return cls(**record)


# --- chunking ---------------------------------------------------------------

@dataclass(frozen=True)
class Chunk:
    text: str
    oversized: bool = False


def split_sentences(text: str) -> list[str]:
    """Split at ., !, ? or the Bengali danda when followed by whitespace."""
    sentences = []
    start = 0
    i = 0
    while i < len(text):
        if text[i] in SENTENCE_TERMINATORS and i + 1 < len(text) and text[i + 1].isspace():
            sentence = text[start:i + 1].strip()
            if sentence:
                sentences.append(sentence)
            i += 1
            while i < len(text) and text[i].isspace():
                i += 1
            start = i
        else:
            i += 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def chunk_text(text: str, max_chunk_chars: int) -> list[Chunk]:
    """Greedy sentence packing: each chunk is the longest sentence prefix that fits.

    A single sentence over the limit becomes its own chunk, flagged oversized.
    Joining all chunk texts with single spaces reconstructs the input modulo
    collapsed whitespace at sentence boundaries.
    """
    if max_chunk_chars <= 0:
        raise ValueError("max_chunk_chars must be positive")
    sentences = split_sentences(text)
    chunks: list[Chunk] = []
    current: list[str] = []
    length = 0
    for sentence in sentences:
        candidate = len(sentence) if not current else length + 1 + len(sentence)
        if candidate <= max_chunk_chars:
            current.append(sentence)
            length = candidate
            continue
        if current:
            chunks.append(Chunk(" ".join(current)))
            current, length = [], 0
        if len(sentence) > max_chunk_chars:
            chunks.append(Chunk(sentence, oversized=True))
        else:
            current, length = [sentence], len(sentence)
    if current:
        chunks.append(Chunk(" ".join(current)))
    return chunks


# --- glossary mock backend ----------------------------------------------------

def load_glossary(path) -> dict[str, str]:
    """Read the JSON English-token -> Bangla map, normalizing keys."""
    import json
    from pathlib import Path

    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return {nfc_lower(k): v for k, v in data.items()}


def _is_word_char(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("L", "M", "N")


def mock_translate(text: str, glossary: dict[str, str]) -> str:
    """Deterministic token-by-token stand-in for the real translator.

    Glossary hits are replaced, numerals and punctuation copy verbatim, and
    unknown word tokens are wrapped in angle markers so reviewers can see
    exactly what was not translated.
    """
    out: list[str] = []
    token: list[str] = []

    def flush():
        if not token:
            return
        word = "".join(token)
        token.clear()
        if all(unicodedata.category(c)[0] == "N" for c in word):
            out.append(word)  # numerals copy verbatim
            return
        replacement = glossary.get(nfc_lower(word))
        out.append(replacement if replacement is not None else f"{MARKER_OPEN}{word}{MARKER_CLOSE}")

    for ch in text:
        if _is_word_char(ch):
            token.append(ch)
        else:
            flush()
            out.append(ch)
    flush()
    return "".join(out)


class BackendTransportError(Exception):
    """Internal: a transient delivery failure eligible for retry."""


class MockGlossaryBackend:
    """Offline backend; ``fail_first`` injects transient failures for retry tests."""

    def __init__(self, spec: TranslationBackendSpec, glossary: dict[str, str], fail_first: int = 0):
        self.spec = spec
        self.glossary = {nfc_lower(k): v for k, v in glossary.items()}
        self.fail_first = fail_first
        self.calls = 0

    def translate_chunk(self, text: str) -> str:
        self.calls += 1
        if self.calls <= self.fail_first:
            raise BackendTransportError(f"injected failure {self.calls}")
        return mock_translate(text, self.glossary)


class RemoteLLMBackend:
    """One HTTP POST per chunk; the API key env var is sent as a bearer token."""

    def __init__(self, spec: TranslationBackendSpec, client: httpx.Client | None = None):
        self.spec = spec
        self.client = client
        self.calls = 0

    def _headers(self) -> dict[str, str]:
        headers = {"content-type": "application/json"}
        api_key = os.environ.get(API_KEY_ENV)
        if api_key:
            headers["authorization"] = f"Bearer {api_key}"
        return headers

    def translate_chunk(self, text: str) -> str:
        self.calls += 1
        prompt = self.spec.prompt_template.replace("{text}", text)
        request = {"model": self.spec.model_name, "prompt": prompt}
        try:
            if self.client is not None:
                resp = self.client.post(self.spec.endpoint, json=request,
                                        headers=self._headers(), timeout=self.spec.timeout)
            else:
                resp = httpx.post(self.spec.endpoint, json=request,
                                  headers=self._headers(), timeout=self.spec.timeout)
        except httpx.HTTPError as exc:
            raise BackendTransportError(str(exc)) from exc
        if resp.status_code >= 400:
            raise BackendRefusal(f"backend returned HTTP {resp.status_code}",
                                 response_body=resp.text)
        try:
            data = resp.json()
        except ValueError:
            raise BackendRefusal("backend response is not JSON", response_body=resp.text) from None
        return self._extract(data, resp.text)

    def _extract(self, data, body: str) -> str:
        value = data
        for part in self.spec.response_path.split("."):
            try:
                value = value[int(part)] if isinstance(value, list) else value[part]
            except (KeyError, IndexError, TypeError, ValueError):
                raise BackendRefusal(
                    f"backend response missing field path {self.spec.response_path!r}",
                    response_body=body) from None
        if not isinstance(value, str):
            raise BackendRefusal("backend response field is not text", response_body=body)
        return value


def build_backend(spec: TranslationBackendSpec, glossary: dict[str, str] | None = None,
                  client: httpx.Client | None = None):
    if spec.kind == "mock_glossary":
        return MockGlossaryBackend(spec, glossary or {})
    return RemoteLLMBackend(spec, client=client)


# --- QA ---------------------------------------------------------------------

@dataclass
class QAReport:
    """Automatic translation checks; the entity check is advisory only."""

    numerals_preserved: bool
    missing_numerals: list = field(default_factory=list)
    entities_preserved: bool = True
    missing_entities: list = field(default_factory=list)
    script_ok: bool = False
    length_ratio: float = 0.0
    passed: bool = False

    def to_dict(self) -> dict:
        return {
            "numerals_preserved": self.numerals_preserved,
            "missing_numerals": self.missing_numerals,
            "entities_preserved": self.entities_preserved,
            "missing_entities": self.missing_entities,
            "script_ok": self.script_ok,
            "length_ratio": self.length_ratio,
            "passed": self.passed,
        }

    @classmethod
    def from_dict(cls, record: dict) -> "QAReport":
        return cls(**record)


def _capitalized_tokens(text: str) -> list[str]:
    """Naive entity candidates: capitalized alphabetic tokens of length >= 2."""
    seen = []
    for token in re.findall(r"[^\W\d_][\w]*", text, flags=re.UNICODE):
        if len(token) >= 2 and token[0].isupper() and token.isalpha() and token not in seen:
            seen.append(token)
    return seen


def qa_check(source: str, output: str) -> QAReport:
    """Validate numerals, entities (advisory), script, and length ratio."""
    digit_runs = []
    for run in re.findall(r"[0-9]+", source):
        if run not in digit_runs:
            digit_runs.append(run)
    normalized_output = output.translate(_BENGALI_DIGITS)
    missing_numerals = [run for run in digit_runs if run not in normalized_output]

    missing_entities = [t for t in _capitalized_tokens(source) if t not in output]

    letters = [ch for ch in output if unicodedata.category(ch).startswith("L")]
    bengali = [ch for ch in letters if BENGALI_BLOCK[0] <= ord(ch) <= BENGALI_BLOCK[1]]
    script_ok = bool(letters) and len(bengali) / len(letters) >= 0.5

    length_ratio = len(output) / len(source) if source else 0.0

    return QAReport(
        numerals_preserved=not missing_numerals,
        missing_numerals=missing_numerals,
        entities_preserved=not missing_entities,
        missing_entities=missing_entities,
        script_ok=script_ok,
        length_ratio=length_ratio,
        passed=(not missing_numerals) and script_ok and 0.3 <= length_ratio <= 3.0,
    )


# --- jobs ---------------------------------------------------------------------

STATUS_PENDING = "pending"
STATUS_DONE = "done"
STATUS_FAILED = "failed"


@dataclass
class TranslationJob:
    """One translation request: input, chunks, Bangla output, and QA verdicts."""

    id: str
    article_id: str | None
    source_text: str
    chunks: list[str]
    backend_id: str
    status: str = STATUS_PENDING
    output_text: str = ""
    qa: QAReport | None = None
    error: str | None = None
    created_at: datetime | None = None
    finished_at: datetime | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "article_id": self.article_id,
            "source_text": self.source_text,
            "chunks": self.chunks,
            "backend_id": self.backend_id,
            "status": self.status,
            "output_text": self.output_text,
            "qa": self.qa.to_dict() if self.qa else None,
            "error": self.error,
            "created_at": self.created_at.isoformat() if self.created_at else None,
            "finished_at": self.finished_at.isoformat() if self.finished_at else None,
        }

    @classmethod
    def from_dict(cls, record: dict) -> "TranslationJob":
        return cls(
            id=record["id"],
            article_id=record.get("article_id"),
            source_text=record["source_text"],
            chunks=list(record["chunks"]),
            backend_id=record["backend_id"],
            status=record["status"],
            output_text=record.get("output_text", ""),
            qa=QAReport.from_dict(record["qa"]) if record.get("qa") else None,
            error=record.get("error"),
            created_at=(datetime.fromisoformat(record["created_at"])
                        if record.get("created_at") else None),
            finished_at=(datetime.fromisoformat(record["finished_at"])
                         if record.get("finished_at") else None),
        )


class TranslationFailed(Exception):
    """Internal carrier: wraps the taxonomy error and the failed job record."""

    def __init__(self, cause: Exception, job: TranslationJob):
        super().__init__(str(cause))
        self.cause = cause
        self.job = job


def _translate_with_retries(backend, spec: TranslationBackendSpec, chunk: str) -> str:
    attempts = spec.max_retries + 1
    last_error = None
    for _ in range(attempts):
        try:
            return backend.translate_chunk(chunk)
        except BackendTransportError as exc:
            last_error = exc
    raise BackendUnavailable(
        f"backend {spec.id!r} unreachable after {attempts} attempts: {last_error}")


def translate(text: str, spec: TranslationBackendSpec, backend,
              article_id: str | None = None, title: str | None = None) -> TranslationJob:
    """Run one translation job through a backend, chunk by chunk, in order.

    A non-empty ``title`` travels as its own first chunk. QA failures do not
    fail the job (the reviewing journalist decides); backend failures mark the
    job failed and raise TranslationFailed carrying both the job and cause.
    """
    if not text or not text.strip():
        raise EmptyInput("translation input text is empty")
    source_text = f"{title}\n{text}" if title else text
    chunks = []
    if title:
        chunks.append(Chunk(title))
    chunks.extend(chunk_text(text, spec.max_chunk_chars))

    job = TranslationJob(
        id=uuid.uuid4().hex[:12],
        article_id=article_id,
        source_text=source_text,
        chunks=[c.text for c in chunks],
        backend_id=spec.id,
        created_at=datetime.now(timezone.utc),
    )
    outputs = []
    try:
        for chunk in job.chunks:
            outputs.append(_translate_with_retries(backend, spec, chunk))
    except (BackendUnavailable, BackendRefusal) as exc:
        job.status = STATUS_FAILED
        job.error = f"{exc.code}: {exc.message}"
        job.finished_at = datetime.now(timezone.utc)
        raise TranslationFailed(exc, job) from exc

    job.output_text = "\n".join(outputs)
    job.qa = qa_check(source_text, job.output_text)
    job.status = STATUS_DONE
    job.finished_at = datetime.now(timezone.utc)
    return job
