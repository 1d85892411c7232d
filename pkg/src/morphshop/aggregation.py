"""Aggregation of several selected modular products into one recommendation.

Given a handful of prototype configurations over one model, four strategies
are available:

* extension  - build a kernel from the DAs that recur across prototypes, then
  buy upgrades for it under a budget (plain knapsack over addition operations);
* compression - build the per-component union of prototype DAs (the
  superstructure) and delete elements until a required resource gain is met,
  losing as little profit as possible (min-cover knapsack);
* new design - treat the superstructure as a design space and pick one DA per
  component under a budget (multiple-choice knapsack);
* set median - return the prototype closest to all others under the
  component-wise mismatch distance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .errors import MorphshopError
from .model import MorphModel
from .solvers import (
    Group,
    KnapsackInstance,
    KnapsackItem,
    MultiChoiceInstance,
    Selection,
    knapsack_exact,
    knapsack_greedy,
    knapsack_min_cover,
    multi_choice_exact,
    multi_choice_greedy,
)
from .trajectory import delta


class AggregationError(MorphshopError):
    pass


class ConflictError(AggregationError):
    """Two chosen addition operations target the same component."""


class EmptyComponentError(AggregationError):
    """A compression would delete every alternative of some component."""


@dataclass(frozen=True)
class PrototypeSet:
    """Initial solutions to aggregate; each covers every component of the model."""

    model: MorphModel
    prototypes: tuple[Mapping[str, str], ...]

    def __post_init__(self) -> None:
        if not self.prototypes:
            raise ValueError("at least one prototype is required")
        component_ids = {c.id for c in self.model.components}
        for idx, proto in enumerate(self.prototypes):
            if set(proto) != component_ids:
                raise ValueError(f"prototype {idx} does not cover every component exactly once")
            for comp_id, da_id in proto.items():
                da = self.model.alternative(da_id)
                if da.component_id != comp_id:
                    raise ValueError(
                        f"prototype {idx}: {da_id!r} does not belong to component {comp_id!r}"
                    )


@dataclass(frozen=True)
class KernelResult:
    """Partial selection of DAs recurring in at least lambda prototypes."""

    kernel: Mapping[str, str]
    counts: Mapping[str, int]
    lam: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "kernel": dict(sorted(self.kernel.items())),
            "counts": dict(sorted(self.counts.items())),
            "lambda": self.lam,
        }


@dataclass(frozen=True)
class Superstructure:
    """Per-component union of the DAs used by any prototype."""

    per_component: Mapping[str, frozenset[str]]

    def to_dict(self) -> dict[str, list[str]]:
        return {c: sorted(das) for c, das in sorted(self.per_component.items())}


@dataclass(frozen=True)
class AdditionOperation:
    """Substitute to_da for from_da on one component, at a cost, for a profit."""

    id: str
    component_id: str
    from_da: str
    to_da: str
    cost: float
    profit: float


def build_kernel(protos: PrototypeSet, lam: int) -> KernelResult:
    """Per component, keep the most frequent prototype DA if it occurs >= lam times.

    Ties on the count break by best (lowest) priority, then id; components
    whose best count stays below lambda are left unassigned.  Kernels shrink
    componentwise as lambda grows.
    """
    if lam < 1:
        raise ValueError("lambda must be a positive integer")
    counts: dict[str, int] = {}
    for proto in protos.prototypes:
        for da_id in proto.values():
            counts[da_id] = counts.get(da_id, 0) + 1
    kernel: dict[str, str] = {}
    for comp in protos.model.components:
        candidates = [a for a in comp.alternatives if counts.get(a.id, 0) >= lam]
        if not candidates:
            continue
        best = min(candidates, key=lambda a: (-counts[a.id], a.priority, a.id))
        kernel[comp.id] = best.id
    return KernelResult(kernel=kernel, counts=counts, lam=lam)


def build_superstructure(protos: PrototypeSet) -> Superstructure:
    per_component: dict[str, frozenset[str]] = {}
    for comp in protos.model.components:
        per_component[comp.id] = frozenset(proto[comp.id] for proto in protos.prototypes)
    return Superstructure(per_component=per_component)


@dataclass(frozen=True)
class ExtensionResult:
    kernel: KernelResult
    chosen_operations: tuple[str, ...]
    selection: Mapping[str, str]
    total_cost: float
    total_profit: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "strategy": "extend",
            "kernel": self.kernel.to_dict()["kernel"],
            "counts": self.kernel.to_dict()["counts"],
            "chosenOperations": list(self.chosen_operations),
            "selection": dict(sorted(self.selection.items())),
            "totalCost": self.total_cost,
            "totalProfit": self.total_profit,
        }


def extend_kernel(
    kernel: KernelResult,
    ops: Sequence[AdditionOperation],
    budget: float,
    solver: str = "greedy",
) -> ExtensionResult:
    """Pick addition operations under the budget and apply them to the kernel.

    Each operation substitutes its target DA for the kernel's DA on one
    component; the operation set is chosen by the knapsack solver named by
    `solver`.  Raises ConflictError if two chosen operations touch the same
    component.
    """
    for op in ops:
        held = kernel.kernel.get(op.component_id)
        if held is None:
            raise ValueError(
                f"operation {op.id!r} touches component {op.component_id!r} "
                "which the kernel leaves unassigned"
            )
        if held != op.from_da:
            raise ValueError(
                f"operation {op.id!r} substitutes from {op.from_da!r} but the "
                f"kernel holds {held!r}"
            )
    instance = KnapsackInstance(
        items=tuple(KnapsackItem(id=op.id, cost=op.cost, profit=op.profit) for op in ops),
        budget=budget,
    )
    picked = _knapsack(instance, solver)
    by_id = {op.id: op for op in ops}
    chosen = [by_id[op_id] for op_id in picked.chosen]
    touched: dict[str, str] = {}
    for op in chosen:
        if op.component_id in touched:
            raise ConflictError(
                f"operations {touched[op.component_id]!r} and {op.id!r} both "
                f"target component {op.component_id!r}"
            )
        touched[op.component_id] = op.id
    selection = dict(kernel.kernel)
    for op in chosen:
        selection[op.component_id] = op.to_da
    return ExtensionResult(
        kernel=kernel,
        chosen_operations=picked.chosen,
        selection=selection,
        total_cost=picked.total_cost,
        total_profit=picked.total_profit,
    )


@dataclass(frozen=True)
class DeletionCandidate:
    """Superstructure member proposed for deletion: cost = resource gained, profit = value lost."""

    id: str
    component_id: str
    da: str
    cost: float
    profit: float


@dataclass(frozen=True)
class CompressionResult:
    superstructure: Superstructure
    compressed: Superstructure
    deleted: tuple[str, ...]
    gain: float
    profit_lost: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "strategy": "compress",
            "superstructure": self.superstructure.to_dict(),
            "remaining": self.compressed.to_dict(),
            "deleted": list(self.deleted),
            "gain": self.gain,
            "profitLost": self.profit_lost,
        }


def compress_superstructure(
    superstructure: Superstructure,
    candidates: Sequence[DeletionCandidate],
    required_gain: float,
) -> CompressionResult:
    """Delete candidates reaching required_gain with minimal profit lost.

    Raises EmptyComponentError if the chosen deletions would empty a component.
    """
    for cand in candidates:
        members = superstructure.per_component.get(cand.component_id, frozenset())
        if cand.da not in members:
            raise ValueError(
                f"candidate {cand.id!r}: {cand.da!r} is not in the superstructure "
                f"of component {cand.component_id!r}"
            )
    picked = knapsack_min_cover(
        [KnapsackItem(id=c.id, cost=c.cost, profit=c.profit) for c in candidates],
        required_gain,
    )
    by_id = {c.id: c for c in candidates}
    removals: dict[str, set[str]] = {}
    for cand_id in picked.chosen:
        cand = by_id[cand_id]
        removals.setdefault(cand.component_id, set()).add(cand.da)
    compressed: dict[str, frozenset[str]] = {}
    for comp_id, das in superstructure.per_component.items():
        kept = das - removals.get(comp_id, set())
        if not kept:
            raise EmptyComponentError(
                f"deleting {sorted(removals[comp_id])} would empty component {comp_id!r}"
            )
        compressed[comp_id] = frozenset(kept)
    return CompressionResult(
        superstructure=superstructure,
        compressed=Superstructure(per_component=compressed),
        deleted=picked.chosen,
        gain=picked.total_cost,
        profit_lost=picked.total_profit,
    )


@dataclass(frozen=True)
class NewDesignResult:
    selection: Mapping[str, str]
    total_cost: float
    total_profit: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "strategy": "newdesign",
            "selection": dict(sorted(self.selection.items())),
            "totalCost": self.total_cost,
            "totalProfit": self.total_profit,
        }


def new_design(
    superstructure: Superstructure,
    da_costs: Mapping[str, tuple[float, float]],
    budget: float,
    solver: str = "greedy",
) -> NewDesignResult:
    """One DA per component out of the superstructure, under a budget.

    da_costs maps each superstructure DA to its (cost, profit) pair; solving is
    a multiple-choice knapsack with one group per component.
    """
    groups = []
    da_component: dict[str, str] = {}
    for comp_id in sorted(superstructure.per_component):
        items = []
        for da_id in sorted(superstructure.per_component[comp_id]):
            if da_id not in da_costs:
                raise ValueError(f"no cost/profit declared for superstructure DA {da_id!r}")
            cost, profit = da_costs[da_id]
            items.append(KnapsackItem(id=da_id, cost=cost, profit=profit))
            da_component[da_id] = comp_id
        groups.append(Group(id=comp_id, items=tuple(items)))
    instance = MultiChoiceInstance(groups=tuple(groups), budget=budget)
    picked = _multi_choice(instance, solver)
    selection = {da_component[da_id]: da_id for da_id in picked.chosen}
    return NewDesignResult(
        selection=selection,
        total_cost=picked.total_cost,
        total_profit=picked.total_profit,
    )


@dataclass(frozen=True)
class MedianResult:
    """Index of the prototype with the least summed mismatch to all others."""

    index: int
    selection: Mapping[str, str]
    total_distance: int
    distances: tuple[int, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "strategy": "median",
            "index": self.index,
            "selection": dict(sorted(self.selection.items())),
            "totalDistance": self.total_distance,
            "distances": list(self.distances),
        }


def set_median(protos: PrototypeSet) -> MedianResult:
    """The prototype minimizing the summed component-wise mismatch distance.

    Ties resolve to the lowest prototype index.
    """
    totals = [
        sum(delta(proto, other) for other in protos.prototypes)
        for proto in protos.prototypes
    ]
    index = min(range(len(totals)), key=lambda i: (totals[i], i))
    return MedianResult(
        index=index,
        selection=dict(protos.prototypes[index]),
        total_distance=totals[index],
        distances=tuple(totals),
    )


def _knapsack(instance: KnapsackInstance, solver: str) -> Selection:
    if solver == "greedy":
        return knapsack_greedy(instance)
    if solver == "exact":
        return knapsack_exact(instance)
    raise ValueError(f"unknown solver {solver!r}; expected 'greedy' or 'exact'")


def _multi_choice(instance: MultiChoiceInstance, solver: str) -> Selection:
    if solver == "greedy":
        return multi_choice_greedy(instance)
    if solver == "exact":
        return multi_choice_exact(instance)
    raise ValueError(f"unknown solver {solver!r}; expected 'greedy' or 'exact'")
