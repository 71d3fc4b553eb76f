"""JSON-over-HTTP API consumed by the review dashboard and operators."""

from __future__ import annotations

import logging
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .errors import NewsdeskError
from .ingest import Article, Source, parse_source
from .service import NewsdeskService

logger = logging.getLogger(__name__)

# HTTP status per error code; anything unlisted maps to 400.
ERROR_STATUS = {
    "UnknownArticle": 404,
    "UnknownJob": 404,
    "UnknownSource": 404,
    "UnknownBackend": 400,
    "MalformedFilter": 400,
    "EmptyInput": 400,
    "NoModel": 409,
    "NoEligibleSources": 409,
    "InsufficientLabels": 409,
    "DegenerateLabels": 409,
    "BackendUnavailable": 502,
    "BackendRefusal": 502,
    "UnreachableSource": 502,
    "StoreLocked": 503,
}


def article_payload(service: NewsdeskService, article: Article) -> dict:
    record = article.to_dict()
    record["class_label"] = service.store.effective_label(article.id)
    record["source_name"] = (service.registry.get(article.source_id).name
                             if article.source_id in service.registry else article.source_id)
    record["has_translation"] = service.store.has_done_translation(article.id)
    return record


def create_app(service: NewsdeskService, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="newsdesk", version="0.1.0")

    @app.exception_handler(NewsdeskError)
    async def newsdesk_error_handler(request: Request, exc: NewsdeskError):
        status = ERROR_STATUS.get(exc.code, 400)
        return JSONResponse(status_code=status,
                            content={"error": exc.code, "message": exc.message})

    @app.get("/api/articles")
    def list_articles(class_label: str | None = Query(None, alias="class"),
                      source: str | None = None,
                      q: str | None = None, topic: str | None = None,
                      topic_min: float | None = None,
                      limit: int = 50, offset: int = 0):
        filters: dict = {"limit": limit, "offset": offset}
        if class_label:
            filters["class_label"] = class_label
        if source:
            filters["source_id"] = source
        if q:
            filters["text_query"] = q
        if topic is not None and topic_min is not None:
            filters["topic_min_score"] = (topic, topic_min)
        items, total = service.query_articles(filters)
        return {"items": [article_payload(service, a) for a in items], "total": total}

    @app.get("/api/articles/{article_id}")
    def get_article(article_id: str):
        return article_payload(service, service.store.get_article(article_id))

    @app.post("/api/articles/{article_id}/translate")
    def translate_article(article_id: str, body: dict):
        backend_id = body.get("backend_id", "")
        job = service.translate_article(article_id, backend_id)
        return job.to_dict()

    @app.get("/api/jobs/{job_id}")
    def get_job(job_id: str):
        return service.store.get_job(job_id).to_dict()

    @app.get("/api/backends")
    def list_backends():
        return {"items": [{"id": spec.id, "kind": spec.kind}
                          for spec in service.backends.values()]}

    @app.get("/api/sources")
    def list_sources():
        return {"items": service.registry.to_list()}

    @app.post("/api/sources", status_code=201)
    def add_source(body: dict):
        try:
            source = parse_source(body)
            service.registry.add(source)
        except ValueError as exc:
            return JSONResponse(status_code=400,
                                content={"error": "MalformedFilter", "message": str(exc)})
        _persist_sources(service)
        return source.to_dict()

    @app.patch("/api/sources/{source_id}")
    def patch_source(source_id: str, body: dict):
        current = service.registry.get(source_id)
        allowed = {"enabled", "republish_permitted"}
        unknown = set(body) - allowed
        if unknown:
            return JSONResponse(
                status_code=400,
                content={"error": "MalformedFilter",
                         "message": f"only {sorted(allowed)} are patchable, got {sorted(unknown)}"})
        record = current.to_dict()
        record.update({k: bool(v) for k, v in body.items()})
        updated = Source(**record)
        service.registry.replace(updated)
        _persist_sources(service)
        return updated.to_dict()

    @app.post("/api/labels", status_code=201)
    def post_label(body: dict):
        article_id = body.get("article_id", "")
        class_label = body.get("class_label", "")
        service.set_operator_label(article_id, class_label)
        return {"article_id": article_id, "class_label": class_label}

    @app.get("/api/runs/latest")
    def latest_run():
        run = service.store.latest_run()
        if run is None:
            return JSONResponse(status_code=404,
                                content={"error": "UnknownRun", "message": "no pipeline runs yet"})
        return run

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="dashboard")

    return app


def _persist_sources(service: NewsdeskService) -> None:
    from .ingest import save_source_registry

    save_source_registry(service.registry, service.config.sources_path)
