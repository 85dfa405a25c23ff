"""JSON Lines graph files: one `{"id", "n", "edges"}` object per line."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable

from ..errors import InputFormatError
from ..graph import from_record
from .base import RESERVED_KEYS, GraphFormat, GraphRecord


def dumps_record(record: dict[str, Any]) -> str:
    return json.dumps(record, sort_keys=True, ensure_ascii=False)


class JsonlFormat(GraphFormat):
    """Canonical format used by every CLI subcommand."""

    suffixes = (".jsonl", ".json")

    def read(self, path: Path) -> list[GraphRecord]:
        records = []
        with open(path, "r", encoding="utf-8") as f:
            for lineno, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    data = json.loads(line)
                except json.JSONDecodeError as e:
                    raise InputFormatError(f"{path}:{lineno}: invalid JSON: {e}") from e
                if not isinstance(data, dict):
                    raise InputFormatError(f"{path}:{lineno}: expected an object")
                try:
                    graph = from_record(data)
                except InputFormatError as e:
                    raise InputFormatError(f"{path}:{lineno}: {e}") from e
                graph_id = data.get("id")
                records.append(GraphRecord(
                    graph=graph,
                    id=None if graph_id is None else str(graph_id),
                    extra={k: v for k, v in data.items() if k not in RESERVED_KEYS},
                ))
        return records

    def write(self, path: Path, records: Iterable[GraphRecord]) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for record in records:
                f.write(dumps_record(record.to_dict()) + "\n")
