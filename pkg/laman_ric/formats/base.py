"""Base interface for graph dataset formats."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

from ..graph import Graph, to_record

# Keys owned by the record itself; anything else is pass-through
RESERVED_KEYS = frozenset({"id", "n", "edges"})


@dataclass
class GraphRecord:
    """
    One graph in a dataset file.
    """

    graph: Graph
    """The graph, with whatever ids it had when read or generated."""

    id: str | None = None
    """Optional identifier, preserved across reads and writes."""

    extra: dict[str, Any] = field(default_factory=dict)
    """Pass-through keys such as `p` or `moves`."""

    def to_dict(self) -> dict[str, Any]:
        return to_record(self.graph, self.id, **self.extra)


class GraphFormat(ABC):
    """
    Base class for dataset formats.

    Writers emit the canonical relabeled form and must be byte-deterministic.
    """

    suffixes: tuple[str, ...] = ()

    @abstractmethod
    def read(self, path: Path) -> list[GraphRecord]:
        """
        Read every record from path.

        Raises:
            InputFormatError: malformed content
            OSError: unreadable file
        """
        ...

    @abstractmethod
    def write(self, path: Path, records: Iterable[GraphRecord]) -> None:
        ...
