"""Access to the synthetic datasets bundled with the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

BUNDLED = ("absences", "engines")


def bundled_dataset_path(name: str) -> Path:
    """Filesystem path of a bundled dataset (`absences` or `engines`)."""
    if name not in BUNDLED:
        raise KeyError(f"no bundled dataset '{name}'; have {BUNDLED}")
    return Path(str(resources.files("vizcheck") / "data" / f"{name}.csv"))


def bundled_datasets() -> dict[str, Path]:
    return {name: bundled_dataset_path(name) for name in BUNDLED}
