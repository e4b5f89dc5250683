"""Bundled example models, addressable as ``examples:<name>``."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

from .model import Model
from .parser import parse

EXAMPLES = {
    "bell": "bell.quml",
    "ghz3": "ghz3.quml",
    "grover2": "grover2.quml",
    "fulladder4": "fulladder4.quml",
    "teleport-cnot-dynamic": "teleport-cnot-dynamic.quml",
    "shor15": "shor15.quml",
}
PREFIX = "examples:"


class UnknownExample(KeyError):
    pass


def example_names() -> list[str]:
    return list(EXAMPLES)


def example_text(name: str) -> str:
    if name not in EXAMPLES:
        raise UnknownExample(name)
    return resources.files("quanuml").joinpath("models", EXAMPLES[name]).read_text("utf-8")


@lru_cache(maxsize=None)
def load_example(name: str) -> Model:
    return parse(example_text(name), PREFIX + name)


def read_source(location: str) -> tuple[str, str]:
    """Return ``(text, display_name)`` for a path or an ``examples:`` URI."""
    if location.startswith(PREFIX):
        name = location[len(PREFIX):]
        return example_text(name), location
    return Path(location).read_text("utf-8"), location


def export_examples(directory: str | Path) -> list[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, filename in EXAMPLES.items():
        target = out / filename
        target.write_text(example_text(name), "utf-8")
        written.append(target)
    return written
