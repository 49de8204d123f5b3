"""Bundled example files (algebras, models, rules, proofs)."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path


def data_path(name: str) -> Path:
    """Filesystem path of a bundled file, e.g. ``data_path("model_box_l3.json")``."""
    return Path(str(resources.files("mvmodal") / "data" / name))


def load_json(name: str):
    return json.loads(data_path(name).read_text(encoding="utf-8"))


def names() -> list[str]:
    return sorted(p.name for p in Path(str(resources.files("mvmodal") / "data")).iterdir()
                  if p.suffix in (".json", ".txt"))
