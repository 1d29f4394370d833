from __future__ import annotations

from pathlib import Path

OUTPUT_DIR = Path.cwd() / "qaoactl-out"


def ensure_parent(path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
