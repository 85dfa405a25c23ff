"""Parquet graph datasets via pyarrow."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable

from ..errors import InputFormatError
from ..graph import from_record
from .base import RESERVED_KEYS, GraphFormat, GraphRecord

try:
    import pyarrow as pa
    import pyarrow.parquet as pq
    HAS_PYARROW = True
except ImportError:
    HAS_PYARROW = False


def _require_pyarrow() -> None:
    if not HAS_PYARROW:
        raise ImportError("pyarrow required for parquet: pip install pyarrow")


def _extra_json(row: dict[str, Any]) -> str:
    return json.dumps({k: v for k, v in row.items() if k not in RESERVED_KEYS}, sort_keys=True)


class ParquetFormat(GraphFormat):
    """
    Columns: id (string), n (int64), edges (list<list<int64>>), extra (JSON string).
    """

    suffixes = (".parquet",)

    def read(self, path: Path) -> list[GraphRecord]:
        _require_pyarrow()
        try:
            table = pq.read_table(path)
        except pa.ArrowInvalid as e:
            raise InputFormatError(f"{path}: not a readable parquet file: {e}") from e
        columns = table.to_pydict()
        if "n" not in columns or "edges" not in columns:
            raise InputFormatError(f"{path}: parquet dataset needs 'n' and 'edges' columns")

        count = table.num_rows
        ids = columns.get("id", [None] * count)
        extras = columns.get("extra", [None] * count)
        records = []
        for i in range(count):
            data: dict[str, Any] = {"n": columns["n"][i], "edges": columns["edges"][i]}
            try:
                graph = from_record(data)
                extra = json.loads(extras[i]) if extras[i] else {}
            except (InputFormatError, json.JSONDecodeError) as e:
                raise InputFormatError(f"{path}: row {i}: {e}") from e
            records.append(GraphRecord(graph=graph, id=ids[i], extra=extra))
        return records

    def write(self, path: Path, records: Iterable[GraphRecord]) -> None:
        _require_pyarrow()
        rows = [r.to_dict() for r in records]
        table = pa.table({
            "id": pa.array([row.get("id") for row in rows], type=pa.string()),
            "n": pa.array([row["n"] for row in rows], type=pa.int64()),
            "edges": pa.array(
                [row["edges"] for row in rows], type=pa.list_(pa.list_(pa.int64()))
            ),
            "extra": pa.array([_extra_json(row) for row in rows], type=pa.string()),
        })
        pq.write_table(table, path)
