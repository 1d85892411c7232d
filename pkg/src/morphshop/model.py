"""Morphological product model: tree of components, design alternatives, compatibility.

A product is a rooted tree whose leaves are components; each component offers a
set of design alternatives (DAs) carrying an ordinal priority (1 = best).  A
symmetric compatibility relation scores pairs of DAs from different components
on an ordinal scale [0..l], 0 meaning the pair cannot coexist.  Pairs without a
stored estimate fall back to the model's default (normally l, i.e. fully
compatible).

Models are loaded from a JSON document, validated once, and immutable
afterwards; any number of threads may read a loaded model concurrently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterator, Mapping

from .errors import MorphshopError


class ModelError(MorphshopError):
    pass


class ParseError(ModelError):
    """The document is not valid JSON or not a JSON object."""


class ValidationError(ModelError):
    """The document violates the model schema or a model invariant."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class UnknownIdError(ModelError):
    """A lookup referenced an id the model does not define."""


class SameComponentError(ModelError):
    """Compatibility was requested for two DAs of the same component."""


@dataclass(frozen=True)
class DesignAlternative:
    id: str
    label: str
    priority: int
    component_id: str


@dataclass(frozen=True)
class Component:
    id: str
    label: str
    alternatives: tuple[DesignAlternative, ...]


@dataclass(frozen=True)
class TreeNode:
    """Internal node (children non-empty) or leaf (component_id set); never both."""

    id: str
    label: str
    children: tuple["TreeNode", ...] = ()
    component_id: str | None = None

    @property
    def is_leaf(self) -> bool:
        return self.component_id is not None


@dataclass(frozen=True)
class CompatibilityRelation:
    """Symmetric partial map over unordered DA-id pairs, with a default value.

    Keys are frozensets of two DA ids from different components.  Stored values
    and the default lie in [0, scale_max]; 0 means incompatible.
    """

    entries: Mapping[frozenset, int]
    default_value: int
    scale_max: int

    def lookup(self, a: str, b: str) -> int:
        return self.entries.get(frozenset((a, b)), self.default_value)


@dataclass(frozen=True)
class Violation:
    """One reason a selection is not a feasible full configuration."""

    kind: str
    message: str
    component_id: str | None = None
    alternatives: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "message": self.message,
            "componentId": self.component_id,
            "alternatives": list(self.alternatives),
        }


@dataclass(frozen=True)
class MorphModel:
    root: TreeNode
    components: tuple[Component, ...]
    compatibility: CompatibilityRelation
    priority_scale_max: int

    @cached_property
    def _components_by_id(self) -> dict[str, Component]:
        return {c.id: c for c in self.components}

    @cached_property
    def _alternatives_by_id(self) -> dict[str, DesignAlternative]:
        return {a.id: a for c in self.components for a in c.alternatives}

    @cached_property
    def _nodes_by_id(self) -> dict[str, TreeNode]:
        return {n.id: n for n in self.iter_nodes()}

    @property
    def compat_scale_max(self) -> int:
        return self.compatibility.scale_max

    def iter_nodes(self) -> Iterator[TreeNode]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(node.children)

    def node(self, node_id: str) -> TreeNode:
        try:
            return self._nodes_by_id[node_id]
        except KeyError:
            raise UnknownIdError(f"unknown tree node: {node_id!r}") from None

    def component(self, component_id: str) -> Component:
        try:
            return self._components_by_id[component_id]
        except KeyError:
            raise UnknownIdError(f"unknown component: {component_id!r}") from None

    def alternative(self, da_id: str) -> DesignAlternative:
        try:
            return self._alternatives_by_id[da_id]
        except KeyError:
            raise UnknownIdError(f"unknown design alternative: {da_id!r}") from None

    def leaf_components_under(self, node_id: str) -> tuple[str, ...]:
        """Component ids of all leaves in the subtree rooted at node_id, in tree order."""
        found: list[str] = []

        def walk(node: TreeNode) -> None:
            if node.is_leaf:
                found.append(node.component_id)  # type: ignore[arg-type]
            for child in node.children:
                walk(child)

        walk(self.node(node_id))
        return tuple(found)

    def compat(self, a: str, b: str) -> int:
        """Symmetric compatibility estimate for two DAs of different components."""
        da_a = self.alternative(a)
        da_b = self.alternative(b)
        if da_a.component_id == da_b.component_id:
            raise SameComponentError(
                f"{a!r} and {b!r} both belong to component {da_a.component_id!r}"
            )
        return self.compatibility.lookup(a, b)

    def validate_selection(self, selection: Mapping[str, str]) -> list[Violation]:
        """Check a component→DA mapping for full-configuration feasibility.

        Returns one violation per failure: component missing from the
        selection, unknown component or alternative id, alternative picked for
        the wrong component, and each cross-component pair with compatibility
        0.  An empty list means the selection is a feasible configuration
        (equivalently, its excellence has w > 0).
        """
        violations: list[Violation] = []
        resolved: list[DesignAlternative] = []
        for comp_id, da_id in sorted(selection.items()):
            if comp_id not in self._components_by_id:
                violations.append(
                    Violation(
                        kind="unknown-component",
                        message=f"selection names unknown component {comp_id!r}",
                        component_id=comp_id,
                    )
                )
                continue
            da = self._alternatives_by_id.get(da_id)
            if da is None:
                violations.append(
                    Violation(
                        kind="unknown-alternative",
                        message=f"selection names unknown alternative {da_id!r}",
                        component_id=comp_id,
                    )
                )
            elif da.component_id != comp_id:
                violations.append(
                    Violation(
                        kind="wrong-component",
                        message=f"{da_id!r} belongs to component {da.component_id!r}, not {comp_id!r}",
                        component_id=comp_id,
                        alternatives=(da_id,),
                    )
                )
            else:
                resolved.append(da)
        for comp in self.components:
            if comp.id not in selection:
                violations.append(
                    Violation(
                        kind="missing-component",
                        message=f"no alternative selected for component {comp.id!r}",
                        component_id=comp.id,
                    )
                )
        for i, da_a in enumerate(resolved):
            for da_b in resolved[i + 1 :]:
                if self.compatibility.lookup(da_a.id, da_b.id) == 0:
                    pair = tuple(sorted((da_a.id, da_b.id)))
                    violations.append(
                        Violation(
                            kind="incompatible-pair",
                            message=f"{pair[0]!r} and {pair[1]!r} are incompatible",
                            alternatives=pair,
                        )
                    )
        return violations


# --- document parsing ---------------------------------------------------------

_MODEL_KEYS = {
    "priorityScaleMax",
    "compatScaleMax",
    "defaultCompat",
    "tree",
    "components",
    "compatibility",
}


def _require(condition: bool, path: str, message: str) -> None:
    if not condition:
        raise ValidationError(path, message)


def _expect_object(value: Any, path: str) -> dict:
    _require(isinstance(value, dict), path, f"expected an object, got {type(value).__name__}")
    return value


def _expect_str(value: Any, path: str) -> str:
    _require(isinstance(value, str) and value != "", path, "expected a non-empty string")
    return value


def _expect_int(value: Any, path: str) -> int:
    _require(isinstance(value, int) and not isinstance(value, bool), path, "expected an integer")
    return value


def _reject_unknown(obj: dict, allowed: set[str], path: str) -> None:
    unknown = sorted(set(obj) - allowed)
    _require(not unknown, path, f"unknown field(s): {', '.join(unknown)}")


def _parse_tree(obj: Any, path: str, seen_node_ids: set[str]) -> TreeNode:
    node = _expect_object(obj, path)
    node_id = _expect_str(node.get("id"), f"{path}.id")
    _require(node_id not in seen_node_ids, f"{path}.id", f"duplicate tree node id {node_id!r}")
    seen_node_ids.add(node_id)
    label = _expect_str(node.get("label", node_id), f"{path}.label")
    has_children = "children" in node
    has_component = "component" in node
    _require(
        has_children != has_component,
        path,
        "node must carry exactly one of 'children' or 'component'",
    )
    if has_component:
        _reject_unknown(node, {"id", "label", "component"}, path)
        comp_id = _expect_str(node["component"], f"{path}.component")
        return TreeNode(id=node_id, label=label, component_id=comp_id)
    _reject_unknown(node, {"id", "label", "children"}, path)
    children = node["children"]
    _require(isinstance(children, list) and children, f"{path}.children", "expected a non-empty array")
    parsed = tuple(
        _parse_tree(child, f"{path}.children[{i}]", seen_node_ids)
        for i, child in enumerate(children)
    )
    return TreeNode(id=node_id, label=label, children=parsed)


def parse_model(document: Any) -> MorphModel:
    """Build and validate a MorphModel from an already-decoded JSON document."""
    doc = _expect_object(document, "$")
    _reject_unknown(doc, _MODEL_KEYS, "$")
    for key in ("tree", "components"):
        _require(key in doc, "$", f"missing required field {key!r}")

    k = _expect_int(doc.get("priorityScaleMax", 3), "$.priorityScaleMax")
    l = _expect_int(doc.get("compatScaleMax", 3), "$.compatScaleMax")
    _require(k >= 1, "$.priorityScaleMax", "must be >= 1")
    _require(l >= 1, "$.compatScaleMax", "must be >= 1")
    default_compat = _expect_int(doc.get("defaultCompat", l), "$.defaultCompat")
    _require(0 <= default_compat <= l, "$.defaultCompat", f"must lie in [0, {l}]")

    comps_doc = doc["components"]
    _require(isinstance(comps_doc, list) and comps_doc, "$.components", "expected a non-empty array")
    components: list[Component] = []
    da_ids: set[str] = set()
    comp_ids: set[str] = set()
    for i, comp_obj in enumerate(comps_doc):
        cpath = f"$.components[{i}]"
        comp = _expect_object(comp_obj, cpath)
        _reject_unknown(comp, {"id", "label", "alternatives"}, cpath)
        comp_id = _expect_str(comp.get("id"), f"{cpath}.id")
        _require(comp_id not in comp_ids, f"{cpath}.id", f"duplicate component id {comp_id!r}")
        comp_ids.add(comp_id)
        label = _expect_str(comp.get("label", comp_id), f"{cpath}.label")
        alts_doc = comp.get("alternatives")
        _require(
            isinstance(alts_doc, list) and alts_doc,
            f"{cpath}.alternatives",
            "expected a non-empty array",
        )
        alternatives = []
        for j, alt_obj in enumerate(alts_doc):
            apath = f"{cpath}.alternatives[{j}]"
            alt = _expect_object(alt_obj, apath)
            _reject_unknown(alt, {"id", "label", "priority"}, apath)
            da_id = _expect_str(alt.get("id"), f"{apath}.id")
            _require(da_id not in da_ids, f"{apath}.id", f"duplicate alternative id {da_id!r}")
            da_ids.add(da_id)
            priority = _expect_int(alt.get("priority"), f"{apath}.priority")
            _require(1 <= priority <= k, f"{apath}.priority", f"must lie in [1, {k}]")
            alternatives.append(
                DesignAlternative(
                    id=da_id,
                    label=_expect_str(alt.get("label", da_id), f"{apath}.label"),
                    priority=priority,
                    component_id=comp_id,
                )
            )
        components.append(Component(id=comp_id, label=label, alternatives=tuple(alternatives)))

    seen_node_ids: set[str] = set()
    root = _parse_tree(doc["tree"], "$.tree", seen_node_ids)

    leaf_refs: dict[str, str] = {}
    for node in _iter_tree(root):
        if node.is_leaf:
            comp_id = node.component_id or ""
            _require(
                comp_id in comp_ids,
                f"$.tree(node {node.id!r})",
                f"leaf references unknown component {comp_id!r}",
            )
            _require(
                comp_id not in leaf_refs,
                f"$.tree(node {node.id!r})",
                f"component {comp_id!r} is referenced by more than one leaf",
            )
            leaf_refs[comp_id] = node.id
    unreferenced = sorted(comp_ids - set(leaf_refs))
    _require(
        not unreferenced,
        "$.tree",
        f"component(s) not referenced by any leaf: {', '.join(unreferenced)}",
    )

    da_component = {a.id: a.component_id for c in components for a in c.alternatives}
    entries: dict[frozenset, int] = {}
    compat_doc = doc.get("compatibility", [])
    _require(isinstance(compat_doc, list), "$.compatibility", "expected an array")
    for i, entry_obj in enumerate(compat_doc):
        epath = f"$.compatibility[{i}]"
        entry = _expect_object(entry_obj, epath)
        _reject_unknown(entry, {"a", "b", "value"}, epath)
        a = _expect_str(entry.get("a"), f"{epath}.a")
        b = _expect_str(entry.get("b"), f"{epath}.b")
        value = _expect_int(entry.get("value"), f"{epath}.value")
        for da_id in (a, b):
            _require(da_id in da_component, epath, f"unknown alternative {da_id!r}")
        _require(
            da_component[a] != da_component[b],
            epath,
            f"{a!r} and {b!r} belong to the same component {da_component[a]!r}",
        )
        _require(0 <= value <= l, f"{epath}.value", f"must lie in [0, {l}]")
        key = frozenset((a, b))
        _require(key not in entries, epath, f"duplicate compatibility pair {{{a!r}, {b!r}}}")
        entries[key] = value

    return MorphModel(
        root=root,
        components=tuple(components),
        compatibility=CompatibilityRelation(
            entries=entries, default_value=default_compat, scale_max=l
        ),
        priority_scale_max=k,
    )


def _iter_tree(root: TreeNode) -> Iterator[TreeNode]:
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(node.children)


def load_model(source: str | bytes) -> MorphModel:
    """Parse a model document from JSON text or bytes."""
    try:
        document = json.loads(source)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"malformed model document: {exc}") from exc
    return parse_model(document)


def load_model_file(path: str) -> MorphModel:
    with open(path, "rb") as fh:
        return load_model(fh.read())


def _tree_to_dict(node: TreeNode) -> dict[str, Any]:
    if node.is_leaf:
        return {"id": node.id, "label": node.label, "component": node.component_id}
    return {
        "id": node.id,
        "label": node.label,
        "children": [_tree_to_dict(child) for child in node.children],
    }


def save_model(model: MorphModel) -> dict[str, Any]:
    """Serialize a model back to its document form; load_model inverts this exactly."""
    pairs = sorted(tuple(sorted(key)) for key in model.compatibility.entries)
    return {
        "priorityScaleMax": model.priority_scale_max,
        "compatScaleMax": model.compatibility.scale_max,
        "defaultCompat": model.compatibility.default_value,
        "tree": _tree_to_dict(model.root),
        "components": [
            {
                "id": comp.id,
                "label": comp.label,
                "alternatives": [
                    {"id": a.id, "label": a.label, "priority": a.priority}
                    for a in comp.alternatives
                ],
            }
            for comp in model.components
        ],
        "compatibility": [
            {"a": a, "b": b, "value": model.compatibility.entries[frozenset((a, b))]}
            for a, b in pairs
        ],
    }
