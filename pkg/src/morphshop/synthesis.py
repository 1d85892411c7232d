"""Combinatorial composition of design alternatives over a morphological model.

A composite solution picks one DA per component.  Its quality is the excellence
vector (w; n): w is the minimum pairwise compatibility across the chosen DAs of
different components, and n is the histogram of chosen-DA priorities
(n_r = how many chosen DAs have priority r).

One excellence vector dominates another when it is at least as good in w and
its priority histogram is first-order (prefix-sum) at least as good, with the
pair not identical.  Composition enumerates the cross product bottom-up over
the model tree, prunes combinations containing an incompatible pair (w = 0),
and keeps the solutions whose vectors nobody dominates; all solutions attaining
an equal nondominated vector are kept.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate
from typing import Any, Mapping, Sequence

from .errors import MorphshopError
from .model import Component, MorphModel, TreeNode, UnknownIdError

DEFAULT_MAX_SOLUTIONS = 1_000_000


class SynthesisError(MorphshopError):
    pass


class IncompleteSelectionError(SynthesisError):
    """The selection does not cover the targeted component set."""


class ScaleMismatchError(SynthesisError):
    """Two excellence vectors were compared over different priority scales."""


class ExplosionError(SynthesisError):
    """The cross product at some node exceeds the candidate cap."""

    def __init__(self, node_id: str, cap: int):
        super().__init__(
            f"candidate count at node {node_id!r} exceeds the cap of {cap}; "
            "prune the model or raise max_solutions"
        )
        self.node_id = node_id
        self.cap = cap


@dataclass(frozen=True)
class ExcellenceVector:
    """System quality point (w; n_1..n_k); sum(n) equals the number of parts."""

    w: int
    n: tuple[int, ...]

    def to_dict(self) -> dict[str, Any]:
        return {"w": self.w, "n": list(self.n)}


@dataclass(frozen=True)
class CompositeSolution:
    """One DA per component under node_id, plus the excellence of that choice."""

    selection: Mapping[str, str]
    excellence: ExcellenceVector
    node_id: str

    def sort_key(self) -> tuple:
        return (
            -self.excellence.w,
            tuple(-x for x in self.excellence.n),
            tuple(self.selection[c] for c in sorted(self.selection)),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "selection": dict(sorted(self.selection.items())),
            "w": self.excellence.w,
            "n": list(self.excellence.n),
        }


def excellence(
    model: MorphModel,
    selection: Mapping[str, str],
    components: Sequence[str] | None = None,
) -> ExcellenceVector:
    """Excellence vector of a selection over the targeted component set.

    With components given, the selection must cover exactly those; otherwise
    the selection's own keys are the target.  w is the model's compatibility
    scale maximum when fewer than two components are involved.
    """
    target = tuple(components) if components is not None else tuple(sorted(selection))
    missing = [c for c in target if c not in selection]
    if missing:
        raise IncompleteSelectionError(
            f"selection misses component(s): {', '.join(sorted(missing))}"
        )
    das = []
    for comp_id in target:
        da = model.alternative(selection[comp_id])
        if da.component_id != comp_id:
            raise IncompleteSelectionError(
                f"{da.id!r} does not belong to component {comp_id!r}"
            )
        das.append(da)
    w = model.compat_scale_max
    for i, da_a in enumerate(das):
        for da_b in das[i + 1 :]:
            w = min(w, model.compatibility.lookup(da_a.id, da_b.id))
    counts = [0] * model.priority_scale_max
    for da in das:
        counts[da.priority - 1] += 1
    return ExcellenceVector(w=w, n=tuple(counts))


def dominates(first: ExcellenceVector, second: ExcellenceVector) -> bool:
    """Strict partial order: better-or-equal w and prefix-sum dominance of n."""
    if len(first.n) != len(second.n):
        raise ScaleMismatchError(
            f"priority scales differ: {len(first.n)} vs {len(second.n)}"
        )
    if first == second:
        return False
    if first.w < second.w:
        return False
    return all(
        p >= q for p, q in zip(accumulate(first.n), accumulate(second.n))
    )


def pareto_filter(solutions: list[CompositeSolution]) -> list[CompositeSolution]:
    """Keep the solutions whose vector no other candidate dominates (ties all kept)."""
    vectors = {s.excellence for s in solutions}
    nondominated = {
        v for v in vectors if not any(dominates(u, v) for u in vectors if u != v)
    }
    return [s for s in solutions if s.excellence in nondominated]


def compose_node(
    model: MorphModel,
    node_id: str | None = None,
    *,
    pareto_only: bool = True,
    max_solutions: int = DEFAULT_MAX_SOLUTIONS,
) -> list[CompositeSolution]:
    """Compose solutions for the subtree at node_id (the root by default).

    A leaf node yields its DAs as singleton solutions, unfiltered.  An internal
    node crosses its children's results, drops every combination containing a
    zero-compatibility pair, and with pareto_only keeps exactly the
    nondominated excellence vectors.  Results come in deterministic order:
    w descending, n lexicographically descending, then selection ids.

    Raises ExplosionError when the materialized candidates at any node would
    exceed max_solutions.
    """
    node = model.node(node_id) if node_id is not None else model.root
    solutions = _compose(model, node, pareto_only, max_solutions)
    return sorted(solutions, key=CompositeSolution.sort_key)


def best_completion(
    model: MorphModel,
    partial: Mapping[str, str],
    *,
    max_solutions: int = DEFAULT_MAX_SOLUTIONS,
) -> CompositeSolution | None:
    """Highest-ranked Pareto solution extending a partial selection verbatim.

    Composition runs on the model restricted to the partial picks, so the
    result is the best feasible finish of those picks; None when no feasible
    completion exists (e.g. the picks already contain an incompatible pair).
    """
    fixed = dict(partial)
    restricted = MorphModel(
        root=model.root,
        components=tuple(
            comp
            if comp.id not in fixed
            else Component(
                id=comp.id,
                label=comp.label,
                alternatives=tuple(a for a in comp.alternatives if a.id == fixed[comp.id]),
            )
            for comp in model.components
        ),
        compatibility=model.compatibility,
        priority_scale_max=model.priority_scale_max,
    )
    for comp in restricted.components:
        if not comp.alternatives:
            raise UnknownIdError(
                f"{fixed[comp.id]!r} does not belong to component {comp.id!r}"
            )
    solutions = compose_node(restricted, max_solutions=max_solutions)
    return solutions[0] if solutions else None


def _leaf_solutions(model: MorphModel, node: TreeNode, comp: Component) -> list[CompositeSolution]:
    l = model.compat_scale_max
    k = model.priority_scale_max
    out = []
    for da in comp.alternatives:
        counts = [0] * k
        counts[da.priority - 1] += 1
        out.append(
            CompositeSolution(
                selection={comp.id: da.id},
                excellence=ExcellenceVector(w=l, n=tuple(counts)),
                node_id=node.id,
            )
        )
    return out


def _compose(
    model: MorphModel, node: TreeNode, pareto_only: bool, max_solutions: int
) -> list[CompositeSolution]:
    if node.is_leaf:
        return _leaf_solutions(model, node, model.component(node.component_id))

    child_results = [
        _compose(model, child, pareto_only, max_solutions) for child in node.children
    ]
    combined: list[CompositeSolution] | None = None
    for child_solutions in child_results:
        if combined is None:
            combined = [
                CompositeSolution(
                    selection=dict(s.selection), excellence=s.excellence, node_id=node.id
                )
                for s in child_solutions
            ]
            continue
        if len(combined) * len(child_solutions) > max_solutions:
            raise ExplosionError(node.id, max_solutions)
        merged: list[CompositeSolution] = []
        for left in combined:
            for right in child_solutions:
                w = min(left.excellence.w, right.excellence.w)
                for da_a in left.selection.values():
                    if w == 0:
                        break
                    for da_b in right.selection.values():
                        value = model.compatibility.lookup(da_a, da_b)
                        if value < w:
                            w = value
                            if w == 0:
                                break
                if w == 0:
                    continue
                merged.append(
                    CompositeSolution(
                        selection={**left.selection, **right.selection},
                        excellence=ExcellenceVector(
                            w=w,
                            n=tuple(
                                a + b
                                for a, b in zip(left.excellence.n, right.excellence.n)
                            ),
                        ),
                        node_id=node.id,
                    )
                )
        combined = merged
    assert combined is not None  # internal nodes always have children
    if pareto_only:
        combined = pareto_filter(combined)
    return combined
