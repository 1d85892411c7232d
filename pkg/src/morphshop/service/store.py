"""Append-only store of uploaded models with per-model Pareto caches.

Models are immutable snapshots: uploading twice yields two distinct ids.  With
a store directory configured, each upload is persisted as <modelId>.json and
reloaded on startup.  Pareto sets are computed once per (model, node) under a
per-model lock, so concurrent identical requests share one computation.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from ..model import MorphModel, parse_model, save_model
from ..synthesis import CompositeSolution, compose_node


@dataclass
class StoredModel:
    model_id: str
    model: MorphModel
    _lock: threading.Lock = field(default_factory=threading.Lock)
    _pareto: dict[str, list[CompositeSolution]] = field(default_factory=dict)

    def pareto(self, node_id: str | None, max_solutions: int) -> list[CompositeSolution]:
        key = node_id if node_id is not None else self.model.root.id
        with self._lock:
            if key not in self._pareto:
                self._pareto[key] = compose_node(
                    self.model, node_id, max_solutions=max_solutions
                )
            return self._pareto[key]


class ModelStore:
    def __init__(self, store_dir: str | None = None):
        self._models: dict[str, StoredModel] = {}
        self._lock = threading.Lock()
        self._dir = Path(store_dir) if store_dir else None
        if self._dir:
            self._dir.mkdir(parents=True, exist_ok=True)
            for path in sorted(self._dir.glob("*.json")):
                model = parse_model(json.loads(path.read_text(encoding="utf-8")))
                self._models[path.stem] = StoredModel(model_id=path.stem, model=model)

    def add(self, model: MorphModel) -> str:
        model_id = uuid.uuid4().hex
        entry = StoredModel(model_id=model_id, model=model)
        with self._lock:
            self._models[model_id] = entry
        if self._dir:
            path = self._dir / f"{model_id}.json"
            path.write_text(
                json.dumps(save_model(model), indent=2) + "\n", encoding="utf-8"
            )
        return model_id

    def get(self, model_id: str) -> StoredModel | None:
        with self._lock:
            return self._models.get(model_id)
