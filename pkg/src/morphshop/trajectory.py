"""Multi-stage trajectory synthesis: one solution per time stage.

Consecutive stages are linked by a derived compatibility xi = m - delta, where
delta counts the components whose chosen DA changes between the two solutions
and m is the component count.  A trajectory picks one solution per stage and is
scored like a composite system: w is the minimum xi over consecutive stage
pairs (a chain, not all pairs), n is the priority histogram of the picked
solutions.  The Pareto-nondominated trajectories are returned, ordered by
(w desc, n desc, total xi desc, picks).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Any, Mapping

from .errors import MorphshopError


class TrajectoryError(MorphshopError):
    pass


class ComponentMismatchError(TrajectoryError):
    """Two selections do not cover the same component set."""


class EmptyStageError(TrajectoryError):
    """A stage offers no solutions."""


class TooFewStagesError(TrajectoryError):
    """A trajectory needs at least two stages."""


def delta(sel1: Mapping[str, str], sel2: Mapping[str, str]) -> int:
    """Number of components whose chosen DA differs between the two selections."""
    if set(sel1) != set(sel2):
        raise ComponentMismatchError("selections cover different component sets")
    return sum(1 for comp_id, da_id in sel1.items() if sel2[comp_id] != da_id)


def xi(sel1: Mapping[str, str], sel2: Mapping[str, str], m: int) -> int:
    """Derived inter-stage compatibility m - delta, in [0, m]."""
    if m != len(sel1):
        raise ComponentMismatchError(
            f"component count {m} does not match the selections ({len(sel1)} components)"
        )
    return m - delta(sel1, sel2)


@dataclass(frozen=True)
class StageSolution:
    id: str
    selection: Mapping[str, str]
    priority: int = 1


@dataclass(frozen=True)
class Stage:
    id: str
    solutions: tuple[StageSolution, ...]


@dataclass(frozen=True)
class StageCatalog:
    """Ordered stages of candidate solutions over one fixed component set."""

    components: tuple[str, ...]
    stages: tuple[Stage, ...]

    def __post_init__(self) -> None:
        expected = set(self.components)
        for stage in self.stages:
            for solution in stage.solutions:
                if set(solution.selection) != expected:
                    raise ComponentMismatchError(
                        f"solution {solution.id!r} in stage {stage.id!r} does not "
                        "cover the declared components"
                    )
                if solution.priority < 1:
                    raise ValueError(f"solution {solution.id!r}: priority must be >= 1")


@dataclass(frozen=True)
class Trajectory:
    """One solution id per stage with its chain score."""

    picks: tuple[str, ...]
    w: int
    n: tuple[int, ...]
    total_xi: int

    def sort_key(self) -> tuple:
        return (-self.w, tuple(-x for x in self.n), -self.total_xi, self.picks)

    def to_dict(self) -> dict[str, Any]:
        return {"picks": list(self.picks), "w": self.w, "n": list(self.n), "totalXi": self.total_xi}


def synthesize_trajectory(catalog: StageCatalog) -> list[Trajectory]:
    """Pareto-nondominated trajectories over the stage cross product.

    Stages act as the components of a chain-shaped morphological model whose
    DAs are the stage solutions and whose compatibility is xi between
    consecutive stages; combinations with a zero xi link are infeasible and
    dropped.  Dominance compares (w; n) exactly as composite solutions do;
    among equal vectors, higher total xi ranks first, then picks
    lexicographically.
    """
    if len(catalog.stages) < 2:
        raise TooFewStagesError("trajectory synthesis needs at least two stages")
    for stage in catalog.stages:
        if not stage.solutions:
            raise EmptyStageError(f"stage {stage.id!r} offers no solutions")

    m = len(catalog.components)
    k = max(
        (sol.priority for stage in catalog.stages for sol in stage.solutions),
        default=1,
    )
    trajectories: list[Trajectory] = []
    for combo in product(*(stage.solutions for stage in catalog.stages)):
        links = [
            xi(a.selection, b.selection, m) for a, b in zip(combo, combo[1:])
        ]
        w = min(links)
        if w == 0:
            continue
        counts = [0] * k
        for solution in combo:
            counts[solution.priority - 1] += 1
        trajectories.append(
            Trajectory(
                picks=tuple(solution.id for solution in combo),
                w=w,
                n=tuple(counts),
                total_xi=sum(links),
            )
        )

    nondominated = [
        t
        for t in trajectories
        if not any(_dominates(other, t) for other in trajectories)
    ]
    return sorted(nondominated, key=Trajectory.sort_key)


def _dominates(first: Trajectory, second: Trajectory) -> bool:
    if (first.w, first.n) == (second.w, second.n):
        return False
    if first.w < second.w:
        return False
    prefix_a = prefix_b = 0
    for a, b in zip(first.n, second.n):
        prefix_a += a
        prefix_b += b
        if prefix_a < prefix_b:
            return False
    return True


# --- document parsing ----------------------------------------------------------


def parse_stage_catalog(document: Any) -> StageCatalog:
    """Build a StageCatalog from a decoded `{components, stages}` JSON document."""
    if not isinstance(document, dict):
        raise ValueError("trajectory document must be a JSON object")
    unknown = sorted(set(document) - {"components", "stages"})
    if unknown:
        raise ValueError(f"unknown field(s) in trajectory document: {', '.join(unknown)}")
    components = tuple(str(c) for c in document.get("components", []))
    stages = []
    for stage in document.get("stages", []):
        solutions = tuple(
            StageSolution(
                id=str(sol["id"]),
                selection={str(c): str(d) for c, d in sol["selection"].items()},
                priority=int(sol.get("priority", 1)),
            )
            for sol in stage.get("solutions", [])
        )
        stages.append(Stage(id=str(stage["id"]), solutions=solutions))
    return StageCatalog(components=components, stages=tuple(stages))


def load_stage_catalog(source: str | bytes) -> StageCatalog:
    return parse_stage_catalog(json.loads(source))
