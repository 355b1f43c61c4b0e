"""JSON artifact store: one file per artifact plus an ``_index.json`` listing them by kind."""
from __future__ import annotations

import json
import logging
import re
from pathlib import Path
from typing import Dict, List

logger = logging.getLogger(__name__)

INDEX_NAME = "_index.json"
KINDS = ("code", "embedding", "region", "partition", "certificate", "contours", "report")
_SAFE_NAME = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_.-]*$")


class ArtifactStore:
    def __init__(self, root):
        self.root = Path(root)
        self.paths: Dict[str, Dict[str, str]] = {}
        self._ensure_index_exists()
        self._load_paths()

    @property
    def index_path(self) -> Path:
        return self.root / INDEX_NAME

    def _ensure_index_exists(self) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        if not self.index_path.exists():
            logger.info(f"Creating artifact index at {self.index_path}")
            self._write_index({})

    def _load_paths(self) -> None:
        try:
            data = json.loads(self.index_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            error_msg = f"artifact index {self.index_path} is not valid JSON: {e}"
            logger.error(error_msg)
            raise ValueError(error_msg) from None
        if not isinstance(data, dict) or not isinstance(data.get("paths", {}), dict):
            raise ValueError(f"artifact index {self.index_path} has an unexpected layout")
        self.paths = data.get("paths", {})

    def _write_index(self, paths: Dict[str, Dict[str, str]]) -> None:
        index = {"kinds": {kind: sorted(names) for kind, names in sorted(paths.items())}, "paths": paths}
        self.index_path.write_text(json.dumps(index, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    @staticmethod
    def _check(kind: str, name: str) -> None:
        if kind not in KINDS:
            raise ValueError(f"unknown artifact kind {kind!r}; expected one of {', '.join(KINDS)}")
        if not _SAFE_NAME.match(name):
            raise ValueError(f"artifact name {name!r} must be alphanumeric with . _ -")

    def save(self, kind: str, name: str, payload: Dict) -> Path:
        self._check(kind, name)
        path = self.root / f"{kind}.{name}.json"
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        self.paths.setdefault(kind, {})[name] = path.name
        self._write_index(self.paths)
        logger.info(f"Saved {kind} artifact {name!r} to {path}")
        return path

    def load(self, kind: str, name: str) -> Dict:
        self._check(kind, name)
        filename = self.paths.get(kind, {}).get(name)
        if filename is None:
            raise ValueError(f"no {kind} artifact named {name!r} in {self.root}")
        return json.loads((self.root / filename).read_text(encoding="utf-8"))

    def list(self, kind: str) -> List[str]:
        if kind not in KINDS:
            raise ValueError(f"unknown artifact kind {kind!r}")
        return sorted(self.paths.get(kind, {}))
