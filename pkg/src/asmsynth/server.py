"""HTTP service over taxonomies, parts, synthesis jobs, and result artifacts.

Reads are concurrent; taxonomy and catalog writes are serialized behind one
lock. A synthesis job snapshots the catalog at submission, runs on a worker
pool, and compiles every result eagerly so the browse endpoints are pure
lookups. When a data directory is configured, accepted writes and finished
jobs are persisted as the same JSON documents the CLI consumes.
"""

from __future__ import annotations

import json
import os
import threading
import uuid as uuidlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from starlette.requests import Request as HttpRequest

from .assembly import bom_to_json, program_to_json
from .catalog import (
    Catalog,
    load_workspace,
    make_catalog,
    part_from_json,
    part_to_json,
    save_part,
    validate_part,
    with_context,
)
from .errors import AngleCountMismatch, AsmSynthError, SchemaViolation
from .kinematics import export_scene, forward_kinematics
from .pipeline import SynthesisResult, json_text, result_entry_to_json, synthesize
from .synthesis import Request, request_from_json, request_to_json
from .taxonomy import (
    HIERARCHIES,
    TaxonomyContext,
    load_taxonomies,
    save_taxonomies,
    taxonomy_from_json,
    taxonomy_to_json,
)

JOB_STATES = ("queued", "running", "done", "failed")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


@dataclass
class Job:
    job_id: str
    request: Request
    state: str = "queued"
    error: str | None = None
    results: list[SynthesisResult] = field(default_factory=list)
    snapshot: tuple[TaxonomyContext, Catalog] | None = None
    created_at: str = field(default_factory=_now)
    started_at: str | None = None
    finished_at: str | None = None

    def to_json(self) -> dict:
        doc: dict[str, Any] = {
            "jobId": self.job_id,
            "state": self.state,
            "request": request_to_json(self.request),
            "createdAt": self.created_at,
            "startedAt": self.started_at,
            "finishedAt": self.finished_at,
        }
        if self.state == "done":
            doc["resultCount"] = len(self.results)
        if self.state == "failed":
            doc["error"] = self.error
        return doc


class AppState:
    """Shared mutable state; `lock` serializes all writers."""

    def __init__(self, data_dir: Path | None, workers: int | None):
        self.lock = threading.Lock()
        self.data_dir = data_dir
        if data_dir is not None and (data_dir / "taxonomies.json").exists():
            self.ctx, self.catalog = load_workspace(data_dir)
        else:
            self.ctx = load_taxonomies([])
            self.catalog = make_catalog(self.ctx, ())
        self.jobs: dict[str, Job] = {}
        self.executor = ThreadPoolExecutor(
            max_workers=workers or max(1, os.cpu_count() or 1),
            thread_name_prefix="synth",
        )

    def persist_taxonomies(self) -> None:
        if self.data_dir is None:
            return
        self.data_dir.mkdir(parents=True, exist_ok=True)
        (self.data_dir / "taxonomies.json").write_text(json_text(save_taxonomies(self.ctx)))

    def persist_part(self, part_id: str) -> None:
        if self.data_dir is None:
            return
        parts_dir = self.data_dir / "parts"
        parts_dir.mkdir(parents=True, exist_ok=True)
        path = parts_dir / f"{part_id}.json"
        if part_id in self.catalog.parts:
            path.write_text(save_part(self.catalog.parts[part_id]))
        elif path.exists():
            path.unlink()

    def persist_job(self, job: Job) -> None:
        if self.data_dir is None:
            return
        job_dir = self.data_dir / "jobs" / job.job_id
        job_dir.mkdir(parents=True, exist_ok=True)
        (job_dir / "job.json").write_text(json_text(job.to_json()))
        if job.state == "done":
            (job_dir / "results.json").write_text(
                json_text([result_entry_to_json(r) for r in job.results])
            )
            for i, r in enumerate(job.results):
                (job_dir / f"program-{i}.json").write_text(json_text(program_to_json(r.program)))
                (job_dir / f"bom-{i}.json").write_text(json_text(bom_to_json(r.bom)))


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse({"error": message}, status_code=status)


def _run_job(state: AppState, job: Job) -> None:
    with state.lock:
        job.state = "running"
        job.started_at = _now()
    try:
        ctx, catalog = job.snapshot
        results = synthesize(ctx, catalog, job.request)
    except Exception as exc:  # noqa: BLE001 - job failures become job state
        with state.lock:
            job.state = "failed"
            job.error = str(exc)
            job.finished_at = _now()
            state.persist_job(job)
    else:
        # persist before the new state becomes observable, so a client that
        # polls "done" finds every artifact already on disk
        with state.lock:
            job.results = results
            job.state = "done"
            job.finished_at = _now()
            state.persist_job(job)


def create_app(data_dir: Path | str | None = None, workers: int | None = None) -> FastAPI:
    state = AppState(Path(data_dir) if data_dir is not None else None, workers)
    app = FastAPI(title="asmsynth", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.asm = state

    async def read_body(request: HttpRequest) -> Any:
        try:
            return json.loads(await request.body())
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise SchemaViolation(f"body is not valid JSON: {exc}") from exc

    @app.exception_handler(AsmSynthError)
    async def on_domain_error(_request: HttpRequest, exc: AsmSynthError) -> JSONResponse:
        return _error(400, str(exc))

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/taxonomies/{hierarchy}")
    def get_taxonomy(hierarchy: str) -> Any:
        if hierarchy not in HIERARCHIES:
            return _error(404, f"unknown hierarchy {hierarchy!r}")
        return taxonomy_to_json(state.ctx.taxonomy(hierarchy))

    @app.put("/taxonomies/{hierarchy}")
    async def put_taxonomy(hierarchy: str, request: HttpRequest) -> Any:
        if hierarchy not in HIERARCHIES:
            return _error(404, f"unknown hierarchy {hierarchy!r}")
        doc = await read_body(request)
        if isinstance(doc, dict) and doc.get("hierarchy") != hierarchy:
            return _error(400, "document hierarchy does not match the path")
        try:
            tax = taxonomy_from_json(doc)
        except SchemaViolation as exc:
            return _error(400, str(exc))
        except AsmSynthError as exc:
            return _error(409, str(exc))
        with state.lock:
            by_h = {h: state.ctx.taxonomy(h) for h in HIERARCHIES}
            by_h[hierarchy] = tax
            new_ctx = load_taxonomies([taxonomy_to_json(t) for t in by_h.values()])
            try:
                new_catalog = with_context(state.catalog, new_ctx)
            except AsmSynthError as exc:
                return _error(409, f"catalog would become invalid: {exc}")
            state.ctx = new_ctx
            state.catalog = new_catalog
            state.persist_taxonomies()
        return taxonomy_to_json(tax)

    @app.get("/parts")
    def list_parts() -> Any:
        return [part_to_json(p) for p in state.catalog.parts.values()]

    @app.get("/parts/{part_id}")
    def get_part(part_id: str) -> Any:
        part = state.catalog.parts.get(part_id)
        if part is None:
            return _error(404, f"unknown part {part_id!r}")
        return part_to_json(part)

    @app.put("/parts/{part_id}")
    async def put_part(part_id: str, request: HttpRequest) -> Any:
        doc = await read_body(request)
        try:
            part = part_from_json(doc)
        except SchemaViolation as exc:
            return _error(400, str(exc))
        if part.part_id != part_id:
            return _error(400, "document partId does not match the path")
        with state.lock:
            diagnostics = validate_part(state.ctx, part)
            errors = [d for d in diagnostics if d.severity == "error"]
            clashes = [
                jo.uuid
                for jo in part.joint_origins
                if jo.uuid in state.catalog.jo_index and state.catalog.jo_index[jo.uuid][0] != part_id
            ]
            if clashes:
                return _error(
                    422,
                    f"joint origin uuids {sorted(clashes)} already belong to other parts",
                )
            if errors:
                return JSONResponse(
                    {
                        "error": f"part {part_id!r} failed validation",
                        "diagnostics": [
                            {
                                "severity": d.severity,
                                "partId": d.part_id,
                                "message": d.message,
                                "joUuid": d.jo_uuid,
                            }
                            for d in diagnostics
                        ],
                    },
                    status_code=422,
                )
            parts = dict(state.catalog.parts)
            parts[part_id] = part
            state.catalog = make_catalog(state.ctx, parts.values())
            state.persist_part(part_id)
        return part_to_json(part)

    @app.delete("/parts/{part_id}")
    def delete_part(part_id: str) -> Any:
        with state.lock:
            if part_id not in state.catalog.parts:
                return _error(404, f"unknown part {part_id!r}")
            parts = {pid: p for pid, p in state.catalog.parts.items() if pid != part_id}
            state.catalog = make_catalog(state.ctx, parts.values())
            state.persist_part(part_id)
        return Response(status_code=204)

    @app.post("/requests")
    async def post_request(request: HttpRequest) -> Any:
        doc = await read_body(request)
        with state.lock:
            try:
                req = request_from_json(state.ctx, doc)
            except SchemaViolation as exc:
                return _error(400, str(exc))
            except AsmSynthError as exc:
                return _error(422, str(exc))
            job = Job(job_id=uuidlib.uuid4().hex[:12], request=req)
            job.snapshot = (state.ctx, state.catalog)
            state.jobs[job.job_id] = job
        state.executor.submit(_run_job, state, job)
        return JSONResponse({"jobId": job.job_id, "state": job.state}, status_code=202)

    def _job_or_none(job_id: str) -> Job | None:
        return state.jobs.get(job_id)

    @app.get("/jobs")
    def list_jobs() -> Any:
        with state.lock:
            return [state.jobs[jid].to_json() for jid in state.jobs]

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str) -> Any:
        job = _job_or_none(job_id)
        if job is None:
            return _error(404, f"unknown job {job_id!r}")
        with state.lock:
            return job.to_json()

    def _done_job(job_id: str):
        job = _job_or_none(job_id)
        if job is None:
            return None, _error(404, f"unknown job {job_id!r}")
        if job.state != "done":
            return None, _error(409, f"job {job_id!r} is {job.state}, not done")
        return job, None

    @app.get("/jobs/{job_id}/results")
    def get_results(job_id: str, offset: int = 0, limit: int = 50) -> Any:
        job, err = _done_job(job_id)
        if err is not None:
            return err
        if offset < 0 or limit < 1 or limit > 500:
            return _error(400, "offset must be >= 0 and 1 <= limit <= 500")
        items = []
        for i, r in enumerate(job.results[offset : offset + limit], start=offset):
            items.append(
                {
                    "index": i,
                    "partCount": r.part_count,
                    "totalKnownCost": r.bom.total_known_cost,
                    "costComplete": r.bom.cost_complete,
                    "dof": sum(1 for e in r.tree.edges if e.kind == "revolute"),
                }
            )
        return {"total": len(job.results), "items": items}

    def _result(job_id: str, index: int):
        job, err = _done_job(job_id)
        if err is not None:
            return None, None, err
        if not 0 <= index < len(job.results):
            return None, None, _error(404, f"job {job_id!r} has no result {index}")
        return job, job.results[index], None

    @app.get("/jobs/{job_id}/results/{index}/bom")
    def get_bom(job_id: str, index: int) -> Any:
        _job, result, err = _result(job_id, index)
        if err is not None:
            return err
        return bom_to_json(result.bom)

    @app.get("/jobs/{job_id}/results/{index}/term")
    def get_term(job_id: str, index: int) -> Any:
        _job, result, err = _result(job_id, index)
        if err is not None:
            return err
        return result_entry_to_json(result)

    @app.get("/jobs/{job_id}/results/{index}/program")
    def get_program(job_id: str, index: int) -> Any:
        _job, result, err = _result(job_id, index)
        if err is not None:
            return err
        return program_to_json(result.program)

    @app.get("/jobs/{job_id}/results/{index}/scene")
    def get_scene(job_id: str, index: int, angles: str = "") -> Any:
        job, result, err = _result(job_id, index)
        if err is not None:
            return err
        n_rev = sum(1 for j in result.program.joints if j.kind == "revolute")
        if angles.strip():
            try:
                values = [float(x) for x in angles.split(",")]
            except ValueError:
                return _error(400, f"angles must be comma-separated numbers, got {angles!r}")
        else:
            values = [0.0] * n_rev
        _ctx, catalog = job.snapshot
        try:
            posed = forward_kinematics(catalog, result.tree, result.program, values)
        except AngleCountMismatch as exc:
            return _error(400, str(exc))
        return Response(content=export_scene(posed), media_type="application/json")

    return app


def serve(data_dir: Path | str | None, port: int, host: str = "127.0.0.1", workers: int | None = None) -> None:
    import uvicorn

    uvicorn.run(create_app(data_dir, workers), host=host, port=port, log_level="warning")
