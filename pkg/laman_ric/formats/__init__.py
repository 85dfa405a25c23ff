"""Graph dataset formats."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from ..errors import ConfigError
from .base import GraphFormat, GraphRecord
from .jsonl import JsonlFormat
from .parquet import ParquetFormat


# Registry of formats
_formats: dict[str, GraphFormat] = {
    "jsonl": JsonlFormat(),
    "parquet": ParquetFormat(),
}


def get_format(name: str) -> GraphFormat:
    """Get a format by name."""
    fmt = _formats.get(name)
    if fmt is None:
        raise ConfigError(f"No graph format named: {name}")
    return fmt


def register_format(name: str, fmt: GraphFormat) -> None:
    """Register a custom format."""
    _formats[name] = fmt


def format_for_path(path: str | Path) -> GraphFormat:
    """Pick a format from the file suffix; unknown suffixes read as JSON Lines."""
    suffix = Path(path).suffix.lower()
    for fmt in _formats.values():
        if suffix in fmt.suffixes:
            return fmt
    return _formats["jsonl"]


def _resolve(path: str | Path, format: str | None) -> GraphFormat:
    return get_format(format) if format else format_for_path(path)


def read_graphs(path: str | Path, format: str | None = None) -> list[GraphRecord]:
    """Read a dataset; format defaults to one inferred from the suffix."""
    return _resolve(path, format).read(Path(path))


def write_graphs(
    path: str | Path,
    records: Iterable[GraphRecord],
    format: str | None = None,
) -> None:
    _resolve(path, format).write(Path(path), records)


__all__ = [
    "get_format",
    "register_format",
    "format_for_path",
    "read_graphs",
    "write_graphs",
    "GraphFormat",
    "GraphRecord",
    "JsonlFormat",
    "ParquetFormat",
]
