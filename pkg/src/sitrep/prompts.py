"""Prompt templates are data: UTF-8 text files with named placeholders.

Built-in templates live in the package's prompts/ directory; a config may
point any of them at an external file instead. Templates are hashed into
the report provenance so a report records exactly what it was asked with.
"""

from __future__ import annotations

import hashlib
from importlib import resources
from pathlib import Path

TEMPLATE_NAMES = ("headline", "questions", "summary")


def load_template(name: str, path: str | Path | None = None) -> str:
    """Load a built-in template by name, or the file at `path` if given."""
    if path is not None:
        return Path(path).read_text(encoding="utf-8")
    if name not in TEMPLATE_NAMES:
        raise ValueError(f"unknown template: {name}")
    return resources.files("sitrep").joinpath(f"prompts/{name}.txt").read_text(encoding="utf-8")


def template_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]
