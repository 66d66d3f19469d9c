"""Shipped canonical configurations (one per reference figure)."""

from __future__ import annotations

import json
from importlib import resources


def recipe_names() -> list[str]:
    root = resources.files(__package__) / "recipes"
    return sorted(p.name[:-5] for p in root.iterdir()
                  if p.name.endswith(".json"))


def load_recipe(name: str) -> dict:
    path = resources.files(__package__) / "recipes" / f"{name}.json"
    if not path.is_file():
        raise KeyError(f"unknown recipe '{name}'; "
                       f"available: {recipe_names()}")
    return json.loads(path.read_text())
