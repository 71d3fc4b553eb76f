"""Chunking, the glossary mock, QA checks, retries, and the remote wire contract."""

import json
import random
import re

import httpx
import pytest

from newsdesk.errors import BackendRefusal, BackendUnavailable, EmptyInput
from newsdesk.translator import (
    MockGlossaryBackend,
    RemoteLLMBackend,
    TranslationBackendSpec,
    TranslationFailed,
    chunk_text,
    mock_translate,
    qa_check,
    split_sentences,
    translate,
)

GLOSSARY = {
    "housing": "আবাসন",
    "jobs": "চাকরি",
    "rent": "ভাড়া",
    "rises": "বাড়ছে",
    "in": "মধ্যে",
    "queens": "কুইন্স",
}


def mock_spec(**overrides) -> TranslationBackendSpec:
    record = {"id": "mock", "kind": "mock_glossary", "max_chunk_chars": 1000}
    record.update(overrides)
    return TranslationBackendSpec(**record)


class TestBackendSpec:
    def test_prompt_template_must_have_one_placeholder(self):
        with pytest.raises(ValueError):
            mock_spec(prompt_template="no placeholder")
        with pytest.raises(ValueError):
            mock_spec(prompt_template="{text} and {text}")

    def test_chunk_floor_enforced_on_config(self):
        with pytest.raises(ValueError):
            mock_spec(max_chunk_chars=100)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            mock_spec(kind="carrier_pigeon")


class TestSentenceSplit:
    def test_terminators_with_whitespace(self):
        assert split_sentences("One. Two! Three? Done") == ["One.", "Two!", "Three?", "Done"]

    def test_bengali_danda(self):
        assert split_sentences("প্রথম বাক্য। দ্বিতীয় বাক্য।") == ["প্রথম বাক্য।", "দ্বিতীয় বাক্য।"]

    def test_decimal_points_do_not_split(self):
        assert split_sentences("Rent rose 3.5 percent. Done") == \
            ["Rent rose 3.5 percent.", "Done"]

    def test_consecutive_terminators_stay_together(self):
        assert split_sentences("Wow!! Go.") == ["Wow!!", "Go."]


class TestChunkText:
    def test_short_text_single_chunk(self):
        text = "Small piece of text under the limit."
        chunks = chunk_text(text, 1000)
        assert len(chunks) == 1
        assert chunks[0].text == text
        assert not chunks[0].oversized

    def test_greedy_packing_three_sentences(self):
        # Three sentences of exactly 40 chars; 40+1+40=81 fits in 85, adding
        # the third (122) does not -> [s1 s2], [s3].
        s1 = "a" * 38 + "x."
        s2 = "b" * 38 + "y."
        s3 = "c" * 38 + "z."
        assert len(s1) == len(s2) == len(s3) == 40
        chunks = chunk_text(f"{s1} {s2} {s3}", 85)
        assert [c.text for c in chunks] == [f"{s1} {s2}", s3]
        assert not any(c.oversized for c in chunks)

    def test_oversized_sentence_flagged(self):
        sentence = "w" * 300
        chunks = chunk_text(sentence, 200)
        assert len(chunks) == 1
        assert chunks[0].oversized
        assert chunks[0].text == sentence

    def test_empty_text(self):
        assert chunk_text("", 500) == []
        assert chunk_text("   \n  ", 500) == []

    def test_reconstruction_property_random_sequences(self):
        rng = random.Random(99)
        words = ["rent", "rises", "fast", "in", "queens", "now"]
        for _ in range(100):
            sentences = []
            for _ in range(rng.randint(1, 12)):
                body = " ".join(rng.choices(words, k=rng.randint(1, 8)))
                sentences.append(body + rng.choice(".!?"))
            source = ""
            for s in sentences:
                source += s + rng.choice([" ", "  ", "\n", "\n\n", " \t "])
            limit = rng.randint(20, 120)
            chunks = chunk_text(source, limit)
            rebuilt = " ".join(c.text for c in chunks)
            assert re.sub(r"\s+", " ", rebuilt).strip() == re.sub(r"\s+", " ", source).strip()
            for c in chunks:
                assert c.oversized or len(c.text) <= limit


class TestMockTranslate:
    def test_numeral_copy_and_dictionary(self):
        assert mock_translate("25 jobs", GLOSSARY) == "25 চাকরি"

    def test_empty(self):
        assert mock_translate("", GLOSSARY) == ""

    def test_unknown_token_wrapped_in_markers(self):
        assert mock_translate("zebra", {}) == "⟨zebra⟩"

    def test_punctuation_copied_verbatim(self):
        assert mock_translate("rent, rises!", GLOSSARY) == "ভাড়া, বাড়ছে!"

    def test_case_insensitive_lookup_preserves_original_in_markers(self):
        assert mock_translate("Housing Zebra", GLOSSARY) == "আবাসন ⟨Zebra⟩"

    def test_deterministic(self):
        text = "housing rent rises in queens 42 times"
        assert mock_translate(text, GLOSSARY) == mock_translate(text, GLOSSARY)


class TestQACheck:
    def test_numerals_preserved_paper_figure(self):
        report = qa_check("About 208,000 immigrants arrived.",
                          "প্রায় 208,000 অভিবাসী এসেছে।")
        assert report.numerals_preserved
        assert report.missing_numerals == []

    def test_bengali_digit_equivalents_accepted(self):
        report = qa_check("25 jobs", "২৫ চাকরি")
        assert report.numerals_preserved

    def test_missing_numeral_reported(self):
        report = qa_check("25 jobs", "চাকরি")
        assert not report.numerals_preserved
        assert report.missing_numerals == ["25"]
        assert not report.passed

    def test_latin_output_fails_script_check(self):
        report = qa_check("housing news", "housing news unchanged")
        assert not report.script_ok
        assert not report.passed

    def test_bengali_output_passes_script_check(self):
        report = qa_check("housing news", "আবাসন সংবাদ")
        assert report.script_ok
        assert report.passed

    def test_entity_check_is_advisory(self):
        report = qa_check("Mayor Adams spoke in Queens.", "মেয়র কথা বলেছেন।")
        assert not report.entities_preserved
        assert "Adams" in report.missing_entities
        assert report.passed  # entities never gate

    def test_entity_inside_markers_counts_as_preserved(self):
        report = qa_check("Adams spoke.", "⟨Adams⟩ কথা বলেছেন।")
        assert report.entities_preserved

    def test_length_ratio_gate(self):
        source = "housing " * 40
        report = qa_check(source, "আ")
        assert report.length_ratio < 0.3
        assert not report.passed


class TestTranslateJob:
    def test_mock_end_to_end(self):
        spec = mock_spec()
        backend = MockGlossaryBackend(spec, GLOSSARY)
        job = translate("housing", spec, backend)
        assert job.status == "done"
        assert job.output_text == "আবাসন"
        assert job.qa.script_ok
        assert job.finished_at is not None

    def test_two_chunks_joined_with_newline(self):
        spec = mock_spec(max_chunk_chars=200)
        backend = MockGlossaryBackend(spec, GLOSSARY)
        first = ("rent rises in queens now and " * 6).strip() + "."
        second = ("jobs rises in queens too and " * 6).strip() + "."
        assert len(first) > 100 and len(first) + len(second) > 200
        job = translate(f"{first} {second}", spec, backend)
        assert len(job.chunks) == 2
        assert job.output_text == "\n".join(
            mock_translate(c, {k: v for k, v in GLOSSARY.items()}) for c in job.chunks)

    def test_title_becomes_first_chunk(self):
        spec = mock_spec()
        backend = MockGlossaryBackend(spec, GLOSSARY)
        job = translate("rent rises.", spec, backend, title="housing in queens")
        assert job.chunks[0] == "housing in queens"
        assert job.source_text.startswith("housing in queens\n")
        assert job.output_text.splitlines()[0] == "আবাসন মধ্যে কুইন্স"

    def test_empty_input_rejected(self):
        spec = mock_spec()
        with pytest.raises(EmptyInput):
            translate("   ", spec, MockGlossaryBackend(spec, GLOSSARY))

    def test_qa_failure_still_yields_done(self):
        spec = mock_spec()
        job = translate("mystery words", spec, MockGlossaryBackend(spec, {}))
        assert job.status == "done"
        assert not job.qa.passed

    def test_retry_count_exact(self):
        spec = mock_spec(max_retries=2)
        backend = MockGlossaryBackend(spec, GLOSSARY, fail_first=10)
        with pytest.raises(TranslationFailed) as excinfo:
            translate("housing", spec, backend)
        assert isinstance(excinfo.value.cause, BackendUnavailable)
        assert backend.calls == 3  # min(attempts_needed, max_retries + 1)
        assert excinfo.value.job.status == "failed"

    def test_transient_failure_recovers_within_budget(self):
        spec = mock_spec(max_retries=2)
        backend = MockGlossaryBackend(spec, GLOSSARY, fail_first=2)
        job = translate("housing", spec, backend)
        assert job.status == "done"
        assert backend.calls == 3

    def test_mock_numerals_always_survive(self):
        # QA soundness on the known-good path: the mock copies digits verbatim.
        rng = random.Random(5)
        spec = mock_spec()
        backend = MockGlossaryBackend(spec, GLOSSARY)
        for _ in range(50):
            numbers = [str(rng.randint(0, 99999)) for _ in range(rng.randint(1, 4))]
            text = "housing " + " jobs ".join(numbers) + " rent."
            job = translate(text, spec, backend)
            assert job.qa.numerals_preserved


def remote_spec(**overrides) -> TranslationBackendSpec:
    record = {
        "id": "llm",
        "kind": "remote_llm",
        "endpoint": "http://backend.test/v1/translate",
        "model_name": "bn-mt",
        "max_chunk_chars": 2000,
        "max_retries": 2,
    }
    record.update(overrides)
    return TranslationBackendSpec(**record)


class TestRemoteBackend:
    def make_client(self, handler):
        return httpx.Client(transport=httpx.MockTransport(handler))

    def test_posts_model_and_rendered_prompt(self):
        captured = {}

        def handler(request):
            captured["json"] = json.loads(request.content)
            captured["auth"] = request.headers.get("authorization")
            return httpx.Response(200, json={"text": "আবাসন"})

        spec = remote_spec(prompt_template="Translate: {text}")
        backend = RemoteLLMBackend(spec, client=self.make_client(handler))
        job = translate("housing", spec, backend)
        assert job.status == "done"
        assert captured["json"] == {"model": "bn-mt", "prompt": "Translate: housing"}
        assert job.output_text == "আবাসন"

    def test_api_key_sent_as_bearer(self, monkeypatch):
        monkeypatch.setenv("BANGLA_AI_API_KEY", "sk-secret")
        seen = {}

        def handler(request):
            seen["auth"] = request.headers.get("authorization")
            return httpx.Response(200, json={"text": "ঠিক"})

        spec = remote_spec()
        backend = RemoteLLMBackend(spec, client=self.make_client(handler))
        translate("housing", spec, backend)
        assert seen["auth"] == "Bearer sk-secret"

    def test_response_path_expression(self):
        def handler(request):
            return httpx.Response(200, json={
                "choices": [{"message": {"content": "আবাসন সংবাদ"}}]})

        spec = remote_spec(response_path="choices.0.message.content")
        backend = RemoteLLMBackend(spec, client=self.make_client(handler))
        job = translate("housing news", spec, backend)
        assert job.output_text == "আবাসন সংবাদ"

    def test_unreachable_retries_then_fails(self):
        attempts = {"n": 0}

        def handler(request):
            attempts["n"] += 1
            raise httpx.ConnectError("refused")

        spec = remote_spec(max_retries=2)
        backend = RemoteLLMBackend(spec, client=self.make_client(handler))
        with pytest.raises(TranslationFailed) as excinfo:
            translate("housing", spec, backend)
        assert isinstance(excinfo.value.cause, BackendUnavailable)
        assert attempts["n"] == 3
        assert excinfo.value.job.status == "failed"

    def test_refusal_preserves_body_and_does_not_retry(self):
        attempts = {"n": 0}

        def handler(request):
            attempts["n"] += 1
            return httpx.Response(429, text="rate limited, slow down")

        spec = remote_spec()
        backend = RemoteLLMBackend(spec, client=self.make_client(handler))
        with pytest.raises(TranslationFailed) as excinfo:
            translate("housing", spec, backend)
        cause = excinfo.value.cause
        assert isinstance(cause, BackendRefusal)
        assert "rate limited" in cause.response_body
        assert attempts["n"] == 1

    def test_missing_response_field_is_refusal(self):
        def handler(request):
            return httpx.Response(200, json={"unexpected": "shape"})

        spec = remote_spec()
        backend = RemoteLLMBackend(spec, client=self.make_client(handler))
        with pytest.raises(TranslationFailed) as excinfo:
            translate("housing", spec, backend)
        assert isinstance(excinfo.value.cause, BackendRefusal)
