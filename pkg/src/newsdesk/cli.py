"""Operator command line: ingest, train, classify, translate, serve, fixtures."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .classifier import EvalReport
from .errors import NewsdeskError
from .fixtures import generate_fixture_corpus
from .service import LABELS_FIXTURE, LABELS_OPERATOR, NewsdeskService, load_config


def _service(args) -> NewsdeskService:
    return NewsdeskService(load_config(args.config))


def _print(payload) -> None:
    print(json.dumps(payload, ensure_ascii=False, indent=2))


def cmd_ingest(args) -> int:
    service = _service(args)
    try:
        run = service.run_pipeline(train=args.train)
        _print(run.to_dict())
        return 0
    finally:
        service.close()


def cmd_train(args) -> int:
    service = _service(args)
    if args.mode:
        service.config.feature_mode = args.mode
        service._vocabulary = None
    try:
        label_source = LABELS_OPERATOR if args.labels == "operator" else LABELS_FIXTURE
        model, report = service.train_from_store(
            label_source=label_source, holdout_fraction=args.holdout)
        payload = {"classes": model.classes, "training_meta": model.training_meta}
        if isinstance(report, EvalReport):
            payload["holdout"] = report.to_dict()
        _print(payload)
        return 0
    finally:
        service.close()


def cmd_classify(args) -> int:
    service = _service(args)
    try:
        count = service.classify_unlabeled()
        _print({"classified": count})
        return 0
    finally:
        service.close()


def cmd_translate(args) -> int:
    service = _service(args)
    try:
        job = service.translate_article(args.article_id, args.backend)
        _print(job.to_dict())
        return 0
    finally:
        service.close()


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    service = _service(args)
    static_dir = args.dashboard
    if static_dir is None:
        default_dist = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        if default_dist.is_dir():
            static_dir = default_dist
    app = create_app(service, static_dir=static_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def cmd_fixtures_generate(args) -> int:
    corpus = generate_fixture_corpus(Path(args.out), seed=args.seed,
                                     articles_per_feed=args.articles_per_feed)
    _print({
        "root": str(corpus.root),
        "config": str(corpus.config_path),
        "feeds": sorted(p.name for p in corpus.feeds_dir.iterdir()),
        "articles": len(corpus.labels),
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="newsdesk",
                                     description="News ingest, classification, and Bangla translation")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="poll permitted sources and classify new articles")
    p.add_argument("--config", required=True)
    p.add_argument("--train", action="store_true",
                   help="train on labeled fixtures before classifying")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("train", help="train the classifier from stored labeled articles")
    p.add_argument("--config", required=True)
    p.add_argument("--mode", choices=["topic_relevance", "tfidf"], default=None)
    p.add_argument("--labels", choices=["fixture", "operator"], default="fixture")
    p.add_argument("--holdout", type=float, default=0.0,
                   help="fraction held out for evaluation (0 disables)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="label stored articles that have no label yet")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("translate", help="translate one stored article")
    p.add_argument("article_id")
    p.add_argument("--config", required=True)
    p.add_argument("--backend", default="mock")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("serve", help="run the HTTP API (and dashboard, if built)")
    p.add_argument("--config", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--dashboard", default=None, help="directory of built dashboard assets")
    p.set_defaults(func=cmd_serve)

    p_fix = sub.add_parser("fixtures", help="fixture corpus utilities")
    fix_sub = p_fix.add_subparsers(dest="fixtures_command", required=True)
    p = fix_sub.add_parser("generate", help="write a synthetic corpus for offline runs")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out", required=True)
    p.add_argument("--articles-per-feed", type=int, default=10)
    p.set_defaults(func=cmd_fixtures_generate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except NewsdeskError as exc:
        print(json.dumps({"error": exc.code, "message": exc.message}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
