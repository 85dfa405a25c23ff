"""Unit tests for dataset formats."""

from __future__ import annotations

import pytest

from laman_ric.errors import ConfigError, InputFormatError
from laman_ric.formats import (
    GraphRecord,
    JsonlFormat,
    format_for_path,
    get_format,
    read_graphs,
    register_format,
    write_graphs,
)
from laman_ric.formats.jsonl import dumps_record
from laman_ric.graph import Graph


class TestJsonl:
    """Tests for the JSON Lines format."""

    def test_round_trip_keeps_ids_and_extra(self, tmp_path, k3, fan4):
        path = tmp_path / "d.jsonl"
        write_graphs(path, [
            GraphRecord(graph=k3, id="a", extra={"p": 0.25}),
            GraphRecord(graph=fan4),
        ])
        records = read_graphs(path)
        assert [r.graph for r in records] == [k3, fan4]
        assert records[0].id == "a"
        assert records[0].extra == {"p": 0.25}
        assert records[1].id is None

    def test_writes_canonical_lines(self, tmp_path):
        path = tmp_path / "d.jsonl"
        write_graphs(path, [GraphRecord(graph=Graph([4, 9], [(9, 4)]), id="x")])
        assert path.read_bytes() == b'{"edges": [[0, 1]], "id": "x", "n": 2}\n'

    def test_dumps_sorted(self):
        assert dumps_record({"n": 1, "edges": []}) == '{"edges": [], "n": 1}'

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "d.jsonl"
        path.write_text('{"n": 2, "edges": [[0, 1]]}\n\n', encoding="utf-8")
        assert len(read_graphs(path)) == 1

    @pytest.mark.parametrize(
        "content",
        ["not json\n", "[1, 2]\n", '{"n": 2}\n', '{"n": 2, "edges": [[0, 2]]}\n'],
    )
    def test_malformed(self, tmp_path, content):
        path = tmp_path / "bad.jsonl"
        path.write_text(content, encoding="utf-8")
        with pytest.raises(InputFormatError) as exc:
            read_graphs(path)
        assert ":1:" in str(exc.value)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            read_graphs(tmp_path / "absent.jsonl")


class TestParquet:
    """Tests for the parquet format."""

    def test_round_trip(self, tmp_path, laman_graph):
        pytest.importorskip("pyarrow")
        graphs = [laman_graph(n, seed=n) for n in (3, 6, 9)]
        path = tmp_path / "d.parquet"
        write_graphs(path, [
            GraphRecord(graph=g, id=f"g{i}", extra={"p": 0.5}) for i, g in enumerate(graphs)
        ])
        records = read_graphs(path)
        assert [r.graph for r in records] == [g.relabeled() for g in graphs]
        assert [r.id for r in records] == ["g0", "g1", "g2"]
        assert all(r.extra == {"p": 0.5} for r in records)

    def test_not_parquet(self, tmp_path):
        pytest.importorskip("pyarrow")
        path = tmp_path / "bad.parquet"
        path.write_text("nope", encoding="utf-8")
        with pytest.raises(InputFormatError):
            read_graphs(path)


class TestRegistry:
    """Tests for format lookup."""

    def test_by_suffix(self):
        assert format_for_path("x.parquet") is get_format("parquet")
        assert format_for_path("x.jsonl") is get_format("jsonl")
        assert format_for_path("x.txt") is get_format("jsonl")

    def test_unknown_name(self):
        with pytest.raises(ConfigError):
            get_format("csv")

    def test_register(self, tmp_path, k3):
        register_format("lines", JsonlFormat())
        path = tmp_path / "d.any"
        write_graphs(path, [GraphRecord(graph=k3)], format="lines")
        assert read_graphs(path, format="lines")[0].graph == k3
