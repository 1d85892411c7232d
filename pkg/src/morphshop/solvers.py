"""Knapsack and multiple-choice knapsack solvers used by the aggregation strategies.

Each problem ships in two variants: the ratio-ordered greedy the worked examples
use, and an exact dynamic program over the integer budget that serves as the
quality reference.  All solvers are pure functions with deterministic
tie-breaking (profit descending, then id lexicographic), so identical inputs
always yield identical selections.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Sequence

from .errors import MorphshopError

DEFAULT_DP_CELL_LIMIT = 10_000_000


class SolverError(MorphshopError):
    pass


class InfeasibleError(SolverError):
    """No selection satisfies the resource constraint."""


class CapacityOverflowError(SolverError):
    """The dynamic-programming table would exceed the configured cell limit."""


@dataclass(frozen=True)
class KnapsackItem:
    id: str
    cost: float
    profit: float

    def __post_init__(self) -> None:
        if self.cost < 0 or self.profit < 0:
            raise ValueError(f"item {self.id!r}: cost and profit must be nonnegative")


@dataclass(frozen=True)
class KnapsackInstance:
    items: tuple[KnapsackItem, ...]
    budget: float

    def __post_init__(self) -> None:
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")
        ids = [item.id for item in self.items]
        if len(ids) != len(set(ids)):
            raise ValueError("item ids must be unique")


@dataclass(frozen=True)
class Group:
    id: str
    items: tuple[KnapsackItem, ...]

    def __post_init__(self) -> None:
        if not self.items:
            raise ValueError(f"group {self.id!r} must hold at least one item")


@dataclass(frozen=True)
class MultiChoiceInstance:
    groups: tuple[Group, ...]
    budget: float

    def __post_init__(self) -> None:
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")
        ids = [item.id for group in self.groups for item in group.items]
        if len(ids) != len(set(ids)):
            raise ValueError("item ids must be unique across groups")
        group_ids = [group.id for group in self.groups]
        if len(group_ids) != len(set(group_ids)):
            raise ValueError("group ids must be unique")


@dataclass(frozen=True)
class Selection:
    """Chosen item ids (sorted) with their cost and profit totals."""

    chosen: tuple[str, ...]
    total_cost: float
    total_profit: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "chosen": list(self.chosen),
            "totalCost": self.total_cost,
            "totalProfit": self.total_profit,
        }


def _selection(items: Sequence[KnapsackItem]) -> Selection:
    return Selection(
        chosen=tuple(sorted(item.id for item in items)),
        total_cost=sum(item.cost for item in items),
        total_profit=sum(item.profit for item in items),
    )


def _ratio_order(items: Sequence[KnapsackItem]) -> list[KnapsackItem]:
    def key(item: KnapsackItem) -> tuple:
        ratio = item.profit / item.cost if item.cost > 0 else float("inf")
        return (-ratio, -item.profit, item.id)

    return sorted(items, key=key)


def knapsack_greedy(inst: KnapsackInstance) -> Selection:
    """Scan items by nonincreasing profit/cost ratio, taking whatever still fits.

    Zero-cost items sort first (infinite ratio) and are always taken.  The
    result is feasible by construction.
    """
    remaining = inst.budget
    taken = []
    for item in _ratio_order(inst.items):
        if item.cost <= remaining:
            taken.append(item)
            remaining -= item.cost
    return _selection(taken)


def _as_int_cost(item: KnapsackItem) -> int:
    if float(item.cost) != int(item.cost):
        raise ValueError(f"item {item.id!r}: exact solvers need integral costs (scale first)")
    return int(item.cost)


def _check_table(n_items: int, budget: int, cell_limit: int) -> None:
    if (n_items + 1) * (budget + 1) > cell_limit:
        raise CapacityOverflowError(
            f"DP table of {(n_items + 1) * (budget + 1)} cells exceeds the limit of {cell_limit}"
        )


def knapsack_exact(
    inst: KnapsackInstance, *, dp_cell_limit: int = DEFAULT_DP_CELL_LIMIT
) -> Selection:
    """Maximize profit under the budget by dynamic programming.

    Among optimal selections, returns the lexicographically smallest sorted
    chosen-id set: the reconstruction walks items in id order, stops as soon as
    the empty continuation is optimal, and otherwise includes the earliest item
    that preserves the optimum.
    """
    items = sorted(inst.items, key=lambda item: item.id)
    budget = int(inst.budget)
    costs = [_as_int_cost(item) for item in items]
    _check_table(len(items), budget, dp_cell_limit)

    # best[k][b] = max profit achievable with items[k:] under budget b
    best = [[0.0] * (budget + 1) for _ in range(len(items) + 1)]
    for k in range(len(items) - 1, -1, -1):
        cost, profit = costs[k], items[k].profit
        row, nxt = best[k], best[k + 1]
        for b in range(budget + 1):
            row[b] = nxt[b]
            if cost <= b:
                row[b] = max(row[b], profit + nxt[b - cost])

    taken = []
    b = budget
    needed = best[0][budget]
    for k, item in enumerate(items):
        if needed <= 0:
            break
        if costs[k] <= b and item.profit + best[k + 1][b - costs[k]] == needed:
            taken.append(item)
            b -= costs[k]
            needed -= item.profit
    return _selection(taken)


def knapsack_min_cover(
    items: Sequence[KnapsackItem],
    required_gain: float,
    *,
    dp_cell_limit: int = DEFAULT_DP_CELL_LIMIT,
) -> Selection:
    """Cheapest subset whose costs sum to at least required_gain.

    Here cost plays the role of the resource freed by taking an item and
    profit the value lost; the exact dynamic program minimizes total profit
    subject to total cost >= required_gain.  Ties resolve to the
    lexicographically smallest chosen-id set.
    """
    pool = sorted(items, key=lambda item: item.id)
    gains = [_as_int_cost(item) for item in pool]
    if required_gain <= 0:
        return _selection([])
    goal = int(required_gain) if float(required_gain) == int(required_gain) else int(required_gain) + 1
    if sum(gains) < goal:
        raise InfeasibleError(
            f"total available gain {sum(gains)} is below the required {goal}"
        )
    _check_table(len(pool), goal, dp_cell_limit)

    infinity = float("inf")
    # best[k][g] = min profit lost using pool[k:] to reach gain >= g
    best = [[infinity] * (goal + 1) for _ in range(len(pool) + 1)]
    for row in best:
        row[0] = 0.0
    for k in range(len(pool) - 1, -1, -1):
        gain, loss = gains[k], pool[k].profit
        row, nxt = best[k], best[k + 1]
        for g in range(goal + 1):
            row[g] = min(nxt[g], loss + nxt[max(0, g - gain)])

    taken = []
    g = goal
    for k, item in enumerate(pool):
        if g <= 0:
            break
        if item.profit + best[k + 1][max(0, g - gains[k])] == best[k][g]:
            taken.append(item)
            g = max(0, g - gains[k])
    return _selection(taken)


def multi_choice_greedy(inst: MultiChoiceInstance) -> Selection:
    """Greedy for the one-item-per-group problem.

    Start from each group's cheapest item (ties: higher profit, then id), then
    repeatedly apply the in-group swap with the best profit-increment to
    cost-increment ratio that still fits the budget, until none does.
    """
    def init_key(item: KnapsackItem) -> tuple:
        return (item.cost, -item.profit, item.id)

    current = {group.id: min(group.items, key=init_key) for group in inst.groups}
    spent = sum(item.cost for item in current.values())
    if spent > inst.budget:
        raise InfeasibleError(
            f"cheapest choices cost {spent}, above the budget {inst.budget}"
        )

    groups_by_id = {group.id: group for group in inst.groups}
    while True:
        headroom = inst.budget - spent
        best_upgrade = None
        best_key = None
        for group_id in sorted(groups_by_id):
            held = current[group_id]
            for item in groups_by_id[group_id].items:
                d_cost = item.cost - held.cost
                d_profit = item.profit - held.profit
                if d_cost <= 0 or d_profit <= 0 or d_cost > headroom:
                    continue
                key = (-(d_profit / d_cost), -d_profit, group_id, item.id)
                if best_key is None or key < best_key:
                    best_key = key
                    best_upgrade = (group_id, item, d_cost)
        if best_upgrade is None:
            break
        group_id, item, d_cost = best_upgrade
        current[group_id] = item
        spent += d_cost
    return _selection(list(current.values()))


def multi_choice_exact(
    inst: MultiChoiceInstance, *, dp_cell_limit: int = DEFAULT_DP_CELL_LIMIT
) -> Selection:
    """Optimal one-item-per-group selection under the budget, by group DP.

    Groups are processed in sorted id order; reconstruction picks the smallest
    item id that preserves the optimum in each group, making the result
    deterministic and independent of input order.
    """
    groups = sorted(inst.groups, key=lambda group: group.id)
    budget = int(inst.budget)
    for group in groups:
        for item in group.items:
            _as_int_cost(item)
    _check_table(len(groups), budget, dp_cell_limit)

    unreachable = float("-inf")
    # best[k][b] = max profit choosing one item from each of groups[k:] within b
    best = [[unreachable] * (budget + 1) for _ in range(len(groups) + 1)]
    best[len(groups)] = [0.0] * (budget + 1)
    for k in range(len(groups) - 1, -1, -1):
        row, nxt = best[k], best[k + 1]
        for b in range(budget + 1):
            value = unreachable
            for item in groups[k].items:
                cost = int(item.cost)
                if cost <= b and nxt[b - cost] != unreachable:
                    value = max(value, item.profit + nxt[b - cost])
            row[b] = value

    if best[0][budget] == unreachable:
        raise InfeasibleError("no feasible one-item-per-group selection fits the budget")

    taken = []
    b = budget
    for k, group in enumerate(groups):
        needed = best[k][b]
        for item in sorted(group.items, key=lambda item: item.id):
            cost = int(item.cost)
            if cost <= b and best[k + 1][b - cost] != unreachable and (
                item.profit + best[k + 1][b - cost] == needed
            ):
                taken.append(item)
                b -= cost
                break
    return _selection(taken)


# --- document parsing ----------------------------------------------------------


def parse_knapsack(document: Any) -> KnapsackInstance:
    if not isinstance(document, dict) or "items" not in document:
        raise ValueError("knapsack document must be an object with 'items'")
    unknown = sorted(set(document) - {"budget", "items"})
    if unknown:
        raise ValueError(f"unknown field(s) in knapsack document: {', '.join(unknown)}")
    return KnapsackInstance(
        items=tuple(
            KnapsackItem(id=str(i["id"]), cost=float(i["cost"]), profit=float(i["profit"]))
            for i in document["items"]
        ),
        budget=float(document.get("budget", 0)),
    )


def parse_multi_choice(document: Any) -> MultiChoiceInstance:
    if not isinstance(document, dict) or "groups" not in document:
        raise ValueError("multiple-choice document must be an object with 'groups'")
    unknown = sorted(set(document) - {"budget", "groups"})
    if unknown:
        raise ValueError(f"unknown field(s) in multiple-choice document: {', '.join(unknown)}")
    return MultiChoiceInstance(
        groups=tuple(
            Group(
                id=str(g["id"]),
                items=tuple(
                    KnapsackItem(
                        id=str(i["id"]), cost=float(i["cost"]), profit=float(i["profit"])
                    )
                    for i in g["items"]
                ),
            )
            for g in document["groups"]
        ),
        budget=float(document.get("budget", 0)),
    )


def load_knapsack(source: str | bytes) -> KnapsackInstance:
    return parse_knapsack(json.loads(source))


def load_multi_choice(source: str | bytes) -> MultiChoiceInstance:
    return parse_multi_choice(json.loads(source))
