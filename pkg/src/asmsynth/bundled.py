"""Access to the bundled toy robot-arm data directory."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def toyarm_dir() -> Path:
    """Directory of the bundled toy arm workspace (taxonomies.json, parts/)."""
    root = resources.files("asmsynth").joinpath("data", "toyarm")
    return Path(str(root))
