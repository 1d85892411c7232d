"""HTTP API over the engine: model upload, evaluation, composition, aggregation,
trajectory synthesis.

Every endpoint is a pure function of the stored immutable model and the request
body, so repeated identical requests return identical bodies.  Error responses
carry `{error, detail, path}`.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .. import synthesis
from ..cli import run_aggregation
from ..errors import MorphshopError
from ..model import ModelError, ParseError, UnknownIdError, ValidationError, parse_model
from ..synthesis import ExplosionError, excellence
from ..trajectory import parse_stage_catalog, synthesize_trajectory
from .schemas import (
    ErrorBody,
    EvaluateRequest,
    EvaluateResponse,
    ModelCreated,
    SolutionOut,
    TrajectoryOut,
    TrajectoryRequest,
    ViolationOut,
)
from .store import ModelStore, StoredModel


def _error(status: int, error: str, detail: str, path: str | None = None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content=ErrorBody(error=error, detail=detail, path=path).model_dump(),
    )


def _max_solutions() -> int:
    value = os.environ.get("MORPHSHOP_MAX_SOLUTIONS")
    return int(value) if value else synthesis.DEFAULT_MAX_SOLUTIONS


def create_app(store_dir: str | None = None, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="morphshop", version="0.1.0")
    store = ModelStore(store_dir=store_dir)
    app.state.store = store

    @app.exception_handler(RequestValidationError)
    async def on_bad_request(request: Request, exc: RequestValidationError) -> JSONResponse:
        return _error(400, "bad-request", str(exc), path=str(request.url.path))

    @app.exception_handler(MorphshopError)
    async def on_engine_error(request: Request, exc: MorphshopError) -> JSONResponse:
        status = 409 if isinstance(exc, ExplosionError) else 400
        return _error(status, type(exc).__name__, str(exc), path=str(request.url.path))

    def _get_model(model_id: str) -> StoredModel | None:
        return store.get(model_id)

    @app.post("/models", status_code=201, response_model=ModelCreated)
    async def upload_model(document: dict):
        try:
            model = parse_model(document)
        except ValidationError as exc:
            return _error(400, "validation-error", exc.message, path=exc.path)
        except (ParseError, ModelError) as exc:
            return _error(400, "parse-error", str(exc))
        return ModelCreated(modelId=store.add(model))

    @app.post("/models/{model_id}/evaluate", response_model=EvaluateResponse)
    async def evaluate(model_id: str, request: EvaluateRequest):
        entry = _get_model(model_id)
        if entry is None:
            return _error(404, "unknown-model", f"no model with id {model_id!r}")
        model = entry.model
        selection = request.selection
        for comp_id, da_id in selection.items():
            try:
                da = model.alternative(da_id)
                model.component(comp_id)
            except UnknownIdError as exc:
                return _error(400, "unknown-id", str(exc))
            if da.component_id != comp_id:
                return _error(
                    400,
                    "unknown-id",
                    f"{da_id!r} does not belong to component {comp_id!r}",
                )
        component_ids = {c.id for c in model.components}
        is_full = set(selection) == component_ids
        vector = excellence(model, selection)
        violations = [
            v
            for v in model.validate_selection(selection)
            if is_full or v.kind == "incompatible-pair"
        ]
        best = None
        if not is_full:
            completion = synthesis.best_completion(
                model, selection, max_solutions=_max_solutions()
            )
            if completion is not None:
                best = SolutionOut(**completion.to_dict())
        return EvaluateResponse(
            violations=[ViolationOut(**v.to_dict()) for v in violations],
            w=vector.w,
            n=list(vector.n),
            bestCompletion=best,
        )

    @app.get("/models/{model_id}/pareto", response_model=list[SolutionOut])
    async def pareto(model_id: str, node: str | None = None):
        entry = _get_model(model_id)
        if entry is None:
            return _error(404, "unknown-model", f"no model with id {model_id!r}")
        try:
            solutions = entry.pareto(node, _max_solutions())
        except UnknownIdError as exc:
            return _error(404, "unknown-node", str(exc))
        return [SolutionOut(**s.to_dict()) for s in solutions]

    @app.post("/models/{model_id}/aggregate")
    async def aggregate(model_id: str, document: dict):
        entry = _get_model(model_id)
        if entry is None:
            return _error(404, "unknown-model", f"no model with id {model_id!r}")
        try:
            return run_aggregation(entry.model, document)
        except (ValueError, KeyError, TypeError) as exc:
            return _error(400, "bad-request", str(exc))

    @app.post("/trajectory", response_model=list[TrajectoryOut])
    async def trajectory(request: TrajectoryRequest):
        try:
            catalog = parse_stage_catalog(request.model_dump())
            result = synthesize_trajectory(catalog)
        except ValueError as exc:
            return _error(400, "bad-request", str(exc))
        return [TrajectoryOut(**t.to_dict()) for t in result]

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
