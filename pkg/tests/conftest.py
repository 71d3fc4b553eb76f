"""Shared fixtures: a seeded synthetic corpus and services over fresh stores."""

from __future__ import annotations

import pytest

from newsdesk.fixtures import generate_fixture_corpus
from newsdesk.service import NewsdeskService, load_config
from newsdesk.store import ArticleStore


@pytest.fixture(scope="session")
def corpus(tmp_path_factory):
    """One seeded fixture corpus shared by all read-only consumers."""
    root = tmp_path_factory.mktemp("fixture-corpus")
    return generate_fixture_corpus(root, seed=7)


@pytest.fixture
def fresh_service(corpus, tmp_path):
    """Service over the shared corpus with an isolated, empty store."""
    config = load_config(corpus.config_path)
    service = NewsdeskService(config, store=ArticleStore(tmp_path / "store"))
    yield service
    service.close()


@pytest.fixture(scope="module")
def populated_service(corpus, tmp_path_factory):
    """Service whose store holds the fixture corpus, trained and classified."""
    config = load_config(corpus.config_path)
    store = ArticleStore(tmp_path_factory.mktemp("store"))
    service = NewsdeskService(config, store=store)
    service.run_pipeline(train=True)
    yield service
    service.close()
