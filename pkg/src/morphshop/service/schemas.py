"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class ModelCreated(BaseModel):
    modelId: str


class ViolationOut(BaseModel):
    kind: str
    message: str
    componentId: str | None = None
    alternatives: list[str] = Field(default_factory=list)


class SolutionOut(BaseModel):
    selection: dict[str, str]
    w: int
    n: list[int]


class EvaluateRequest(BaseModel):
    selection: dict[str, str] = Field(default_factory=dict)


class EvaluateResponse(BaseModel):
    violations: list[ViolationOut]
    w: int
    n: list[int]
    bestCompletion: SolutionOut | None = None


class TrajectorySolutionIn(BaseModel):
    id: str
    selection: dict[str, str]
    priority: int = 1


class TrajectoryStageIn(BaseModel):
    id: str
    solutions: list[TrajectorySolutionIn]


class TrajectoryRequest(BaseModel):
    components: list[str]
    stages: list[TrajectoryStageIn]


class TrajectoryOut(BaseModel):
    picks: list[str]
    w: int
    n: list[int]
    totalXi: int


class ErrorBody(BaseModel):
    error: str
    detail: str
    path: str | None = None
