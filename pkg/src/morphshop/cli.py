"""Batch command-line entry point: files in, JSON (or an aligned table) out.

The CLI is a thin wrapper over the engine modules; `serve` starts the HTTP
service.  Exit codes: 0 success, 1 validation/engine failure, 2 usage error.
"""

from __future__ import annotations

import json
import os
import sys
from typing import Any

import click

from . import aggregation, ranking, solvers, synthesis, trajectory
from .errors import MorphshopError
from .model import load_model, parse_model

MAX_SOLUTIONS_ENV = "MORPHSHOP_MAX_SOLUTIONS"


def _max_solutions_default() -> int:
    value = os.environ.get(MAX_SOLUTIONS_ENV)
    return int(value) if value else synthesis.DEFAULT_MAX_SOLUTIONS


def _read(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _emit(payload: Any, output: str | None, fmt: str) -> None:
    if fmt == "table":
        text = _render_table(payload)
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _render_table(payload: Any) -> str:
    if isinstance(payload, list):
        if not payload:
            return "(empty)\n"
        if all(isinstance(row, dict) for row in payload):
            headers = list(dict.fromkeys(key for row in payload for key in row))
            rows = [[_cell(row.get(h)) for h in headers] for row in payload]
            return _align([headers] + rows)
        return "\n".join(_cell(v) for v in payload) + "\n"
    if isinstance(payload, dict):
        return _align([[key, _cell(value)] for key, value in payload.items()])
    return f"{payload}\n"


def _cell(value: Any) -> str:
    if isinstance(value, dict):
        return " ".join(f"{k}={v}" for k, v in sorted(value.items()))
    if isinstance(value, list):
        return " ".join(str(v) for v in value)
    return str(value)


def _align(rows: list[list[str]]) -> str:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip()
        for row in rows
    ) + "\n"


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


format_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "table"]), default="json",
    help="Output rendering.",
)
output_option = click.option(
    "--output", "-o", type=click.Path(dir_okay=False), default=None,
    help="Write the result to a file instead of stdout.",
)


@click.group()
def main() -> None:
    """Configuration engine for modular products."""


@main.command()
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@output_option
@format_option
def validate(input_path: str, output: str | None, fmt: str) -> None:
    """Validate any engine document (model, criteria table, instance, request)."""
    try:
        document = json.loads(_read(input_path))
    except json.JSONDecodeError as exc:
        _fail(f"{input_path}: malformed JSON: {exc}")
        return
    try:
        kind = _validate_document(document)
    except (MorphshopError, ValueError) as exc:
        _fail(f"{input_path}: {exc}")
        return
    _emit({"valid": True, "kind": kind, "violations": []}, output, fmt)


def _validate_document(document: Any) -> str:
    if not isinstance(document, dict):
        raise ValueError("expected a JSON object")
    keys = set(document)
    if "tree" in keys:
        parse_model(document)
        return "model"
    if "criteria" in keys:
        ranking.parse_criteria_table(document)
        return "criteria-table"
    if "groups" in keys:
        solvers.parse_multi_choice(document)
        return "multiple-choice-instance"
    if "items" in keys:
        solvers.parse_knapsack(document)
        return "knapsack-instance"
    if "stages" in keys:
        trajectory.parse_stage_catalog(document)
        return "trajectory-request"
    if "prototypes" in keys:
        _parse_aggregation_request(document)
        return "aggregation-request"
    raise ValueError("unrecognized document type")


@main.command()
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--method", type=click.Choice(["layers", "outrank"]), default="layers")
@click.option("--threshold", type=float, default=0.7, help="Concordance threshold for --method outrank.")
@output_option
@format_option
def rank(input_path: str, method: str, threshold: float, output: str | None, fmt: str) -> None:
    """Partition the items of a criteria table into ordered quality layers."""
    try:
        table = ranking.parse_criteria_table(json.loads(_read(input_path)))
        if method == "layers":
            partition = ranking.dominance_layers(table)
        else:
            partition = ranking.outrank_layers(table, threshold)
    except (MorphshopError, ValueError, json.JSONDecodeError) as exc:
        _fail(str(exc))
        return
    _emit(partition.to_dict(), output, fmt)


@main.command()
@click.argument("model_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--node", "node_id", default=None, help="Tree node to compose (default: root).")
@click.option("--pareto-only/--no-pareto-only", default=True, show_default=True)
@click.option("--max-solutions", type=int, default=None,
              help=f"Candidate cap per node (default {synthesis.DEFAULT_MAX_SOLUTIONS}; "
                   f"env {MAX_SOLUTIONS_ENV} overrides).")
@output_option
@format_option
def compose(model_path: str, node_id: str | None, pareto_only: bool,
            max_solutions: int | None, output: str | None, fmt: str) -> None:
    """Enumerate composite solutions for a model, Pareto-filtered by default."""
    try:
        model = load_model(_read(model_path))
        solutions = synthesis.compose_node(
            model,
            node_id,
            pareto_only=pareto_only,
            max_solutions=max_solutions if max_solutions is not None else _max_solutions_default(),
        )
    except (MorphshopError, ValueError) as exc:
        _fail(str(exc))
        return
    _emit([s.to_dict() for s in solutions], output, fmt)


@main.command()
@click.argument("problem", type=click.Choice(["knapsack", "mckp"]))
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--budget", type=float, default=None, help="Override the instance budget.")
@click.option("--solver", type=click.Choice(["greedy", "exact"]), default="greedy", show_default=True)
@output_option
@format_option
def solve(problem: str, input_path: str, budget: float | None, solver: str,
          output: str | None, fmt: str) -> None:
    """Solve a knapsack or multiple-choice knapsack instance file."""
    try:
        document = json.loads(_read(input_path))
        if budget is not None:
            document["budget"] = budget
        if problem == "knapsack":
            instance = solvers.parse_knapsack(document)
            picked = (solvers.knapsack_greedy if solver == "greedy" else solvers.knapsack_exact)(instance)
        else:
            mc = solvers.parse_multi_choice(document)
            picked = (solvers.multi_choice_greedy if solver == "greedy" else solvers.multi_choice_exact)(mc)
    except (MorphshopError, ValueError, json.JSONDecodeError) as exc:
        _fail(str(exc))
        return
    _emit(picked.to_dict(), output, fmt)


def _parse_aggregation_request(document: dict) -> dict:
    allowed = {
        "prototypes", "lambda", "additionOps", "budget", "strategy", "solver",
        "deletionCandidates", "requiredGain", "daCosts",
    }
    unknown = sorted(set(document) - allowed)
    if unknown:
        raise ValueError(f"unknown field(s) in aggregation request: {', '.join(unknown)}")
    strategy = document.get("strategy")
    if strategy not in ("extend", "compress", "newdesign", "median"):
        raise ValueError("strategy must be one of extend|compress|newdesign|median")
    if not isinstance(document.get("prototypes"), list) or not document["prototypes"]:
        raise ValueError("prototypes must be a non-empty array of selections")
    return document


def run_aggregation(model, document: dict) -> dict:
    """Execute an aggregation request against a model; shared by CLI and service."""
    request = _parse_aggregation_request(document)
    protos = aggregation.PrototypeSet(
        model=model,
        prototypes=tuple({str(c): str(d) for c, d in p.items()} for p in request["prototypes"]),
    )
    strategy = request["strategy"]
    solver = request.get("solver", "greedy")
    if strategy == "median":
        return aggregation.set_median(protos).to_dict()
    if strategy == "extend":
        kernel = aggregation.build_kernel(protos, int(request.get("lambda", 1)))
        ops = [
            aggregation.AdditionOperation(
                id=str(op["id"]),
                component_id=str(op["component"]),
                from_da=str(op["from"]),
                to_da=str(op["to"]),
                cost=float(op["cost"]),
                profit=float(op["profit"]),
            )
            for op in request.get("additionOps", [])
        ]
        return aggregation.extend_kernel(
            kernel, ops, float(request.get("budget", 0)), solver
        ).to_dict()
    superstructure = aggregation.build_superstructure(protos)
    if strategy == "compress":
        candidates = [
            aggregation.DeletionCandidate(
                id=str(c["id"]),
                component_id=str(c["component"]),
                da=str(c["da"]),
                cost=float(c["cost"]),
                profit=float(c["profit"]),
            )
            for c in request.get("deletionCandidates", [])
        ]
        return aggregation.compress_superstructure(
            superstructure, candidates, float(request.get("requiredGain", 0))
        ).to_dict()
    da_costs = {
        str(da): (float(entry["cost"]), float(entry["profit"]))
        for da, entry in request.get("daCosts", {}).items()
    }
    return aggregation.new_design(
        superstructure, da_costs, float(request.get("budget", 0)), solver
    ).to_dict()


@main.command()
@click.argument("request_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--model", "model_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Model file the prototypes refer to.")
@output_option
@format_option
def aggregate(request_path: str, model_path: str, output: str | None, fmt: str) -> None:
    """Run an aggregation request (extend, compress, newdesign or median)."""
    try:
        model = load_model(_read(model_path))
        result = run_aggregation(model, json.loads(_read(request_path)))
    except (MorphshopError, ValueError, json.JSONDecodeError) as exc:
        _fail(str(exc))
        return
    _emit(result, output, fmt)


@main.command("trajectory")
@click.argument("request_path", type=click.Path(exists=True, dir_okay=False))
@output_option
@format_option
def trajectory_cmd(request_path: str, output: str | None, fmt: str) -> None:
    """Synthesize Pareto-efficient multi-stage trajectories."""
    try:
        catalog = trajectory.parse_stage_catalog(json.loads(_read(request_path)))
        result = trajectory.synthesize_trajectory(catalog)
    except (MorphshopError, ValueError, json.JSONDecodeError) as exc:
        _fail(str(exc))
        return
    _emit([t.to_dict() for t in result], output, fmt)


@main.command()
@click.option("--port", type=int, default=8080, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--store-dir", type=click.Path(file_okay=False), default=None,
              help="Directory for persisting uploaded models across restarts.")
@click.option("--ui-dir", type=click.Path(file_okay=False, exists=True), default=None,
              help="Static configurator bundle to serve under /ui.")
def serve(port: int, host: str, store_dir: str | None, ui_dir: str | None) -> None:
    """Start the HTTP service."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(store_dir=store_dir, ui_dir=ui_dir), host=host, port=port)


if __name__ == "__main__":
    main()
