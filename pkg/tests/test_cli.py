"""Command-line surface: every subcommand against a generated corpus."""

import json

import pytest

from newsdesk.cli import main


@pytest.fixture(scope="module")
def cli_corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli-corpus")
    assert main(["fixtures", "generate", "--seed", "7", "--out", str(root)]) == 0
    return root


def run_cli(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_fixtures_generate_output(cli_corpus_dir, capsys):
    assert (cli_corpus_dir / "config.json").exists()
    assert (cli_corpus_dir / "sources.json").exists()
    assert len(list((cli_corpus_dir / "feeds").iterdir())) == 6
    assert len(list((cli_corpus_dir / "pages").iterdir())) == 60


def test_ingest_with_train(cli_corpus_dir, capsys):
    config = str(cli_corpus_dir / "config.json")
    code, out, _ = run_cli(capsys, "ingest", "--config", config, "--train")
    assert code == 0
    run = json.loads(out)
    assert run["ingested"] == 60
    assert run["classified"] == 60


def test_train_with_holdout(cli_corpus_dir, capsys):
    config = str(cli_corpus_dir / "config.json")
    code, out, _ = run_cli(capsys, "train", "--config", config, "--holdout", "0.25")
    assert code == 0
    payload = json.loads(out)
    assert payload["holdout"]["accuracy"] >= 0.9
    assert len(payload["classes"]) == 6


def test_classify_reports_zero_when_all_labeled(cli_corpus_dir, capsys):
    config = str(cli_corpus_dir / "config.json")
    code, out, _ = run_cli(capsys, "classify", "--config", config)
    assert code == 0
    assert json.loads(out) == {"classified": 0}


def test_translate_article(cli_corpus_dir, capsys):
    config = str(cli_corpus_dir / "config.json")
    store_articles = (cli_corpus_dir / "store" / "articles.jsonl").read_text().splitlines()
    article_id = json.loads(store_articles[0])["id"]
    code, out, _ = run_cli(capsys, "translate", article_id, "--config", config,
                           "--backend", "mock")
    assert code == 0
    job = json.loads(out)
    assert job["status"] == "done"
    assert job["qa"]["script_ok"] is True


def test_unknown_article_maps_to_error_payload(cli_corpus_dir, capsys):
    config = str(cli_corpus_dir / "config.json")
    code, _, err = run_cli(capsys, "translate", "ghost", "--config", config)
    assert code == 1
    assert json.loads(err)["error"] == "UnknownArticle"


def test_serve_parser_wiring():
    from newsdesk.cli import build_parser

    args = build_parser().parse_args(
        ["serve", "--config", "x.json", "--port", "9001", "--host", "0.0.0.0"])
    assert args.port == 9001
    assert args.func.__name__ == "cmd_serve"
