"""Read-only HTTP service over a report file.

The report is loaded once into memory and never mutated; every endpoint is
a pure projection of it, so identical requests always get identical
responses. Until a report is loaded the API answers 503.
"""

from __future__ import annotations

import logging
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .report import index_report, loads_report

logger = logging.getLogger(__name__)


def create_app(report: dict | None = None, cors_origins: list[str] | None = None) -> FastAPI:
    app = FastAPI(title="sitrep report API", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )
    state = {"report": None, "index": None}
    if report is not None:
        state["report"] = report
        state["index"] = index_report(report)

    def ready() -> dict:
        if state["report"] is None:
            raise HTTPException(status_code=503, detail="report not loaded")
        return state["report"]

    def lookup(kind: str, node_id: str) -> dict:
        ready()
        node = state["index"][kind].get(node_id)
        if node is None:
            raise HTTPException(status_code=404, detail=f"unknown {kind[:-1]} id: {node_id}")
        return node

    @app.get("/healthz")
    def healthz() -> JSONResponse:
        return JSONResponse("ok")

    @app.get("/report")
    def full_report() -> dict:
        return ready()

    @app.get("/timespans")
    def timespans() -> list:
        return ready()["timespans"]

    @app.get("/chapters/{chapter_id}")
    def chapter(chapter_id: str) -> dict:
        return lookup("chapters", chapter_id)

    @app.get("/sections/{section_id}")
    def section(section_id: str) -> dict:
        return lookup("sections", section_id)

    @app.get("/contexts/{context_id}")
    def context(context_id: str) -> dict:
        return lookup("contexts", context_id)

    return app


def load_report_file(report_path: str | Path) -> dict:
    return loads_report(Path(report_path).read_text(encoding="utf-8"))


def serve(report_path: str | Path, bind_address: str = "127.0.0.1:8000", cors_origins: list[str] | None = None) -> None:
    """Serve the report file until interrupted."""
    import uvicorn

    report = load_report_file(report_path)
    host, _, port = bind_address.partition(":")
    app = create_app(report, cors_origins=cors_origins)
    logger.info("serving %s on %s", report_path, bind_address)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000), log_level="warning")
