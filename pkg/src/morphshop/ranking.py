"""Multicriteria ranking into ordered quality layers.

Items evaluated on several criteria are partitioned into layers: layer 1 holds
the Pareto-nondominated items, layer 2 the items that become nondominated once
layer 1 is removed, and so on.  An item's ordinal priority is the index of its
layer (1 = best), which is exactly the priority scale the composition engine
consumes.

Two partition methods are provided: plain dominance peeling, and a
concordance-only outranking variant where item i outranks item j when the
weight share of criteria on which i is at least as good reaches a threshold.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Sequence

import networkx as nx

from .errors import MorphshopError


class RankingError(MorphshopError):
    pass


class EmptyTableError(RankingError):
    """The criteria table holds no items."""


@dataclass(frozen=True)
class Criterion:
    id: str
    direction: str  # "max" or "min"
    weight: float = 1.0


@dataclass(frozen=True)
class CriteriaTable:
    """Items × criteria estimate matrix with per-criterion direction and weight."""

    criteria: tuple[Criterion, ...]
    items: tuple[tuple[str, tuple[float, ...]], ...]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for crit in self.criteria:
            if crit.direction not in ("max", "min"):
                raise ValueError(f"criterion {crit.id!r}: direction must be 'max' or 'min'")
            if crit.weight < 0:
                raise ValueError(f"criterion {crit.id!r}: weight must be nonnegative")
        for item_id, estimates in self.items:
            if item_id in seen:
                raise ValueError(f"duplicate item id {item_id!r}")
            seen.add(item_id)
            if len(estimates) != len(self.criteria):
                raise ValueError(
                    f"item {item_id!r} has {len(estimates)} estimates for {len(self.criteria)} criteria"
                )

    def adjusted(self) -> dict[str, tuple[float, ...]]:
        """Estimates with minimize-criteria negated, so more is better everywhere."""
        signs = [1.0 if c.direction == "max" else -1.0 for c in self.criteria]
        return {
            item_id: tuple(s * z for s, z in zip(signs, estimates))
            for item_id, estimates in self.items
        }


@dataclass(frozen=True)
class LayerPartition:
    """Ordered layers of item ids; priority_of maps each item to its 1-based layer."""

    layers: tuple[tuple[str, ...], ...]
    priority_of: dict[str, int]

    def to_dict(self) -> dict[str, Any]:
        return {
            "layers": [list(layer) for layer in self.layers],
            "priorities": dict(sorted(self.priority_of.items())),
        }


def _partition(layers: list[list[str]]) -> LayerPartition:
    priority_of = {item: k for k, layer in enumerate(layers, start=1) for item in layer}
    return LayerPartition(
        layers=tuple(tuple(sorted(layer)) for layer in layers),
        priority_of=priority_of,
    )


def weakly_dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    return all(x >= y for x, y in zip(a, b))


def strictly_dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    return weakly_dominates(a, b) and any(x > y for x, y in zip(a, b))


def dominance_layers(table: CriteriaTable) -> LayerPartition:
    """Peel Pareto-nondominated items into successive layers.

    Layer k holds the items nondominated once layers < k are removed; items in
    one layer are mutually nondominated.  Only the order of estimates matters,
    so any strictly monotone per-criterion rescaling leaves the result
    unchanged.
    """
    if not table.items:
        raise EmptyTableError("cannot rank an empty criteria table")
    adjusted = table.adjusted()
    remaining = [item_id for item_id, _ in table.items]
    layers: list[list[str]] = []
    while remaining:
        nondominated = [
            i
            for i in remaining
            if not any(strictly_dominates(adjusted[j], adjusted[i]) for j in remaining if j != i)
        ]
        layers.append(nondominated)
        remaining = [i for i in remaining if i not in set(nondominated)]
    return _partition(layers)


def outrank_layers(table: CriteriaTable, concordance_threshold: float = 0.7) -> LayerPartition:
    """Layer items by concordance-only outranking.

    Item i outranks item j when the weight fraction of criteria on which i is
    at least as good as j (ties count) reaches the threshold.  Cycles in the
    outranking digraph are condensed into single layers; layers are then peeled
    as the source nodes of the condensation.  With threshold 1.0 and equal
    weights the edge relation equals weak dominance and the partition matches
    dominance_layers.
    """
    if not table.items:
        raise EmptyTableError("cannot rank an empty criteria table")
    if not 0.5 < concordance_threshold <= 1.0:
        raise ValueError("concordance threshold must lie in (0.5, 1]")
    total_weight = sum(c.weight for c in table.criteria)
    if total_weight <= 0:
        raise ValueError("criterion weights must sum to a positive value")

    adjusted = table.adjusted()
    weights = [c.weight for c in table.criteria]
    ids = [item_id for item_id, _ in table.items]

    graph = nx.DiGraph()
    graph.add_nodes_from(ids)
    for i in ids:
        for j in ids:
            if i == j:
                continue
            concordant = sum(
                w for w, x, y in zip(weights, adjusted[i], adjusted[j]) if x >= y
            )
            if concordant / total_weight >= concordance_threshold:
                graph.add_edge(i, j)

    condensation = nx.condensation(graph)
    layers: list[list[str]] = []
    while condensation:
        sources = [n for n in condensation.nodes if condensation.in_degree(n) == 0]
        layers.append(
            [item for n in sources for item in condensation.nodes[n]["members"]]
        )
        condensation.remove_nodes_from(sources)
    return _partition(layers)


# --- document parsing ----------------------------------------------------------


def parse_criteria_table(document: Any) -> CriteriaTable:
    """Build a CriteriaTable from a decoded `{criteria, items}` JSON document."""
    if not isinstance(document, dict):
        raise ValueError("criteria table document must be a JSON object")
    unknown = sorted(set(document) - {"criteria", "items"})
    if unknown:
        raise ValueError(f"unknown field(s) in criteria table: {', '.join(unknown)}")
    criteria = tuple(
        Criterion(
            id=str(c["id"]),
            direction=str(c.get("direction", "max")),
            weight=float(c.get("weight", 1.0)),
        )
        for c in document.get("criteria", [])
    )
    items = tuple(
        (str(item["id"]), tuple(float(z) for z in item["estimates"]))
        for item in document.get("items", [])
    )
    return CriteriaTable(criteria=criteria, items=items)


def load_criteria_table(source: str | bytes) -> CriteriaTable:
    return parse_criteria_table(json.loads(source))
