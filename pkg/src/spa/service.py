"""HTTP checking service: a stateless JSON API over the script checker.

POST /api/check            {"script": "<text>"} -> full per-step report
GET  /api/examples         names of the shipped example scripts
GET  /api/examples/{name}  script text
GET  /                     the bundled web proof editor (static files)

Requests are independent; the only server-side state is the read-only set
of example scripts.  Malformed JSON is a 400, bodies over 1 MiB a 413.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import HTMLResponse, JSONResponse, PlainTextResponse
from pydantic import BaseModel, ValidationError

from .script import check_text

MAX_BODY_BYTES = 1 << 20
DEFAULT_PORT = 7423


class AssumptionView(BaseModel):
    label: str
    formula: str


class GoalStateView(BaseModel):
    assumptions: list[AssumptionView]
    target: str


class StepView(BaseModel):
    line: int
    status: str
    message: Optional[str] = None
    goals: list[GoalStateView]


class LemmaView(BaseModel):
    name: str
    statement: str
    complete: bool
    warnings: list[str]
    steps: list[StepView]


class ParseErrorView(BaseModel):
    line: int
    column: int
    message: str


class CheckRequest(BaseModel):
    script: str


class CheckResponse(BaseModel):
    complete: bool
    lemmas: list[LemmaView]
    error: Optional[ParseErrorView] = None


def example_names() -> list[str]:
    root = resources.files("spa") / "examples"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".spa"))


def example_text(name: str) -> Optional[str]:
    if not name.replace("_", "").isalnum():
        return None
    path = resources.files("spa") / "examples" / f"{name}.spa"
    try:
        return path.read_text(encoding="utf-8")
    except (FileNotFoundError, NotADirectoryError):
        return None


def create_app() -> FastAPI:
    app = FastAPI(title="spa proof checker", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.post("/api/check", response_model=CheckResponse)
    async def api_check(request: Request):
        declared = request.headers.get("content-length")
        if declared is not None and declared.isdigit() and int(declared) > MAX_BODY_BYTES:
            return JSONResponse({"detail": "script too large"}, status_code=413)
        body = await request.body()
        if len(body) > MAX_BODY_BYTES:
            return JSONResponse({"detail": "script too large"}, status_code=413)
        try:
            payload = json.loads(body)
        except (UnicodeDecodeError, json.JSONDecodeError):
            return JSONResponse({"detail": "malformed JSON body"}, status_code=400)
        try:
            req = CheckRequest.model_validate(payload)
        except ValidationError:
            return JSONResponse(
                {"detail": 'expected a JSON object {"script": "<text>"}'},
                status_code=400,
            )
        report = check_text(req.script)
        return JSONResponse(CheckResponse.model_validate(report.to_dict()).model_dump())

    @app.get("/api/examples")
    def api_examples():
        return example_names()

    @app.get("/api/examples/{name}")
    def api_example(name: str):
        text = example_text(name)
        if text is None:
            return JSONResponse({"detail": f"unknown example {name!r}"}, status_code=404)
        return PlainTextResponse(text)

    static = resources.files("spa") / "static"
    if static.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static), html=True), name="editor")
    else:
        @app.get("/", response_class=HTMLResponse)
        def index():
            return "<h1>spa proof checker</h1><p>POST scripts to /api/check.</p>"

    return app


def resolve_port(port: Optional[int] = None) -> int:
    """Explicit flag wins, then the SPA_PORT environment variable, then 7423."""
    import os

    if port is not None:
        return port
    return int(os.environ.get("SPA_PORT", DEFAULT_PORT))


def serve(port: Optional[int] = None, host: str = "127.0.0.1") -> None:
    import uvicorn

    uvicorn.run(create_app(), host=host, port=resolve_port(port))
