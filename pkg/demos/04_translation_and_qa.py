"""Chunking, the deterministic mock translator, and the QA battery.

Run:  python demos/04_translation_and_qa.py
"""

from newsdesk.translator import (
    MockGlossaryBackend,
    TranslationBackendSpec,
    chunk_text,
    mock_translate,
    qa_check,
    translate,
)

GLOSSARY = {
    "housing": "আবাসন", "costs": "খরচ", "rise": "বৃদ্ধি", "in": "মধ্যে",
    "queens": "কুইন্স", "rents": "ভাড়া", "rose": "বেড়েছে", "percent": "শতাংশ",
    "tenants": "ভাড়াটিয়ারা", "organized": "সংগঠিত",
}

# Long articles are split at sentence boundaries and greedily packed, so no
# request exceeds the backend's chunk budget. Oversized single sentences are
# flagged rather than silently truncated.
text = "Rents rose 12 percent in Queens. Tenants organized. " * 8
chunks = chunk_text(text, 220)
print(f"{len(text)} chars -> {len(chunks)} chunks, sizes "
      f"{[len(c.text) for c in chunks]}, oversized={any(c.oversized for c in chunks)}")

# The glossary mock is the offline stand-in for a remote LLM: dictionary hits
# are translated, numerals and punctuation copy verbatim, unknown tokens are
# wrapped in angle markers for the reviewer.
print(mock_translate("Housing costs rise 25 percent in Queens.", GLOSSARY))
print(mock_translate("Unknown zebra token", GLOSSARY))

# The QA battery checks numerals, script, and length; entity preservation is
# advisory only (proper names are legitimately re-scripted in Bangla).
spec = TranslationBackendSpec(id="mock", kind="mock_glossary", max_chunk_chars=400)
job = translate(text, spec, MockGlossaryBackend(spec, GLOSSARY))
print(f"\njob {job.id}: status={job.status}, chunks={len(job.chunks)}")
qa = job.qa
print(f"numerals_preserved={qa.numerals_preserved} script_ok={qa.script_ok} "
      f"length_ratio={qa.length_ratio:.2f} passed={qa.passed}")

# A dropped numeral is caught and listed.
bad = qa_check("Rents rose 12 percent.", "ভাড়া বেড়েছে শতাংশ।")
print(f"\ndropped numeral -> numerals_preserved={bad.numerals_preserved}, "
      f"missing={bad.missing_numerals}, passed={bad.passed}")

# Bengali digits count as preserved numerals (legitimate localization).
localized = qa_check("Rents rose 12 percent.", "ভাড়া ১২ শতাংশ বেড়েছে।")
print(f"Bengali digits accepted -> numerals_preserved={localized.numerals_preserved}")
