"""Henneberg insertions and their inverse deletions: enumeration, application, inversion."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, ClassVar, Union

from .errors import IllegalMove, InputFormatError, NotLaman, ReceiptMismatch
from .graph import Edge, Graph
from .rigidity import PebbleGame, is_laman

DEFAULT_SIZE_MIN = 3
DEFAULT_SIZE_MAX = 100


@dataclass(frozen=True)
class InsertI:
    """Henneberg type I: new node joined to u and v."""
    u: int
    v: int
    # Id to give the created node; set only on inverses of deletions
    reuse_id: int | None = field(default=None, compare=False)
    kind: ClassVar[str] = "I"

    def __post_init__(self) -> None:
        if self.u > self.v:
            u, v = self.v, self.u
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)

    def to_dict(self) -> dict[str, Any]:
        return _with_reuse({"type": self.kind, "u": self.u, "v": self.v}, self.reuse_id)


@dataclass(frozen=True)
class InsertII:
    """Henneberg type II: drop edge (u, v), add a node joined to u, v and w."""
    u: int
    v: int
    w: int
    reuse_id: int | None = field(default=None, compare=False)
    kind: ClassVar[str] = "II"

    def __post_init__(self) -> None:
        if self.u > self.v:
            u, v = self.v, self.u
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)

    def to_dict(self) -> dict[str, Any]:
        return _with_reuse(
            {"type": self.kind, "edge": [self.u, self.v], "w": self.w}, self.reuse_id
        )


@dataclass(frozen=True)
class DeleteI:
    """Inverse of type I: remove a degree-2 node."""
    v: int
    kind: ClassVar[str] = "DI"

    def to_dict(self) -> dict[str, Any]:
        return {"type": self.kind, "v": self.v}


@dataclass(frozen=True)
class DeleteII:
    """Inverse of type II: remove a degree-3 node and join two of its neighbours."""
    v: int
    a: int
    b: int
    kind: ClassVar[str] = "DII"

    def __post_init__(self) -> None:
        if self.a > self.b:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    def to_dict(self) -> dict[str, Any]:
        return {"type": self.kind, "v": self.v, "new_edge": [self.a, self.b]}


Move = Union[InsertI, InsertII, DeleteI, DeleteII]

MOVE_KINDS: tuple[str, ...] = ("I", "II", "DI", "DII")


@dataclass(frozen=True)
class MoveReceipt:
    """What `apply` did, enough to rebuild the pre-move graph exactly."""
    applied: Move
    created_node: int | None = None
    removed_node_edges: tuple[Edge, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "move": self.applied.to_dict(),
            "created_node": self.created_node,
            "removed_edges": [list(e) for e in self.removed_node_edges],
        }


def _with_reuse(data: dict[str, Any], reuse_id: int | None) -> dict[str, Any]:
    if reuse_id is not None:
        data["reuse_id"] = reuse_id
    return data


def move_from_dict(data: dict[str, Any]) -> Move:
    """Parse the `{"type": ...}` form written by `Move.to_dict`."""
    try:
        kind = data["type"]
        reuse = data.get("reuse_id")
        if kind == "I":
            return InsertI(int(data["u"]), int(data["v"]), reuse_id=reuse)
        if kind == "II":
            u, v = data["edge"]
            return InsertII(int(u), int(v), int(data["w"]), reuse_id=reuse)
        if kind == "DI":
            return DeleteI(int(data["v"]))
        if kind == "DII":
            a, b = data["new_edge"]
            return DeleteII(int(data["v"]), int(a), int(b))
    except (KeyError, TypeError, ValueError) as e:
        raise InputFormatError(f"Invalid move record {data!r}: {e}") from e
    raise InputFormatError(f"Unknown move type {data.get('type')!r}")


# -- enumeration ------------------------------------------------------------


def enumerate_legal(
    g: Graph,
    size_min: int = DEFAULT_SIZE_MIN,
    size_max: int = DEFAULT_SIZE_MAX,
) -> list[Move]:
    """
    Every legal move on a Laman graph, grouped by kind in MOVE_KINDS order.

    Insertions are masked once n reaches size_max, deletions once n
    reaches size_min.

    Raises:
        NotLaman
    """
    if g.n < 2 or not is_laman(g):
        raise NotLaman(f"Move enumeration needs a Laman graph, got {g!r}")

    moves: list[Move] = []
    if g.n < size_max:
        moves.extend(InsertI(u, v) for u, v in combinations(g.nodes, 2))
        for u, v in g.edges:
            moves.extend(InsertII(u, v, w) for w in g.nodes if w != u and w != v)
    if g.n > size_min:
        moves.extend(DeleteI(v) for v in g.nodes if g.degree(v) == 2)
        for v in g.nodes:
            if g.degree(v) != 3:
                continue
            rest, _ = g.remove_node(v)
            game = PebbleGame.from_graph(rest)
            for a, b in combinations(sorted(g.neighbors(v)), 2):
                if not rest.has_edge(a, b) and game.can_add(a, b):
                    moves.append(DeleteII(v, a, b))
    return moves


def group_by_kind(moves: list[Move]) -> dict[str, list[Move]]:
    groups: dict[str, list[Move]] = {kind: [] for kind in MOVE_KINDS}
    for m in moves:
        groups[m.kind].append(m)
    return groups


# -- application ------------------------------------------------------------


def _fresh_id(g: Graph, reuse_id: int | None) -> int:
    if reuse_id is None:
        return g.next_node_id()
    if reuse_id in g:
        raise IllegalMove(f"Cannot reuse id {reuse_id}: node exists", reason="id in use")
    return reuse_id


def _require_node(g: Graph, v: int) -> None:
    if v not in g:
        raise IllegalMove(f"Unknown node {v}", reason="unknown node")


def apply(g: Graph, m: Move) -> tuple[Graph, MoveReceipt]:
    """
    Apply a move and return the new graph with its receipt.

    Raises:
        IllegalMove: with `reason` naming the violated precondition
    """
    if isinstance(m, InsertI):
        _require_node(g, m.u)
        _require_node(g, m.v)
        if m.u == m.v:
            raise IllegalMove(f"{m} joins a node to itself", reason="self-loop")
        x = _fresh_id(g, m.reuse_id)
        return g.add_node(x, (m.u, m.v)), MoveReceipt(m, created_node=x)

    if isinstance(m, InsertII):
        for node in (m.u, m.v, m.w):
            _require_node(g, node)
        if not g.has_edge(m.u, m.v):
            raise IllegalMove(f"{m}: edge ({m.u}, {m.v}) missing", reason="missing edge")
        if m.w in (m.u, m.v):
            raise IllegalMove(f"{m}: third node is an endpoint", reason="third node on edge")
        x = _fresh_id(g, m.reuse_id)
        out = g.remove_edge(m.u, m.v).add_node(x, (m.u, m.v, m.w))
        return out, MoveReceipt(m, created_node=x, removed_node_edges=((m.u, m.v),))

    if isinstance(m, DeleteI):
        _require_node(g, m.v)
        if g.degree(m.v) != 2:
            raise IllegalMove(
                f"{m}: node has degree {g.degree(m.v)}, expected 2", reason="degree mismatch"
            )
        out, removed = g.remove_node(m.v)
        return out, MoveReceipt(m, removed_node_edges=removed)

    if isinstance(m, DeleteII):
        _require_node(g, m.v)
        if g.degree(m.v) != 3:
            raise IllegalMove(
                f"{m}: node has degree {g.degree(m.v)}, expected 3", reason="degree mismatch"
            )
        nbrs = g.neighbors(m.v)
        if m.a not in nbrs or m.b not in nbrs or m.a == m.b:
            raise IllegalMove(f"{m}: new edge must join two neighbours", reason="not neighbours")
        if g.has_edge(m.a, m.b):
            raise IllegalMove(f"{m}: edge ({m.a}, {m.b}) exists", reason="edge exists")
        rest, removed = g.remove_node(m.v)
        if not PebbleGame.from_graph(rest).can_add(m.a, m.b):
            raise IllegalMove(
                f"{m}: edge ({m.a}, {m.b}) violates sparsity", reason="edge-add violates sparsity"
            )
        return rest.add_edge(m.a, m.b), MoveReceipt(m, removed_node_edges=removed)

    raise IllegalMove(f"Unknown move {m!r}", reason="unknown move")


def inverse(m: Move, r: MoveReceipt) -> Move:
    """
    The move undoing `m`, carrying the ids needed for an exact round-trip.

    Raises:
        ReceiptMismatch
    """
    if r.applied != m or getattr(r.applied, "reuse_id", None) != getattr(m, "reuse_id", None):
        raise ReceiptMismatch(f"Receipt is for {r.applied}, not {m}")

    if isinstance(m, InsertI):
        if r.created_node is None:
            raise ReceiptMismatch("Insert receipt lacks the created node")
        return DeleteI(r.created_node)

    if isinstance(m, InsertII):
        if r.created_node is None:
            raise ReceiptMismatch("Insert receipt lacks the created node")
        return DeleteII(r.created_node, m.u, m.v)

    removed = r.removed_node_edges
    others = sorted(u if v == m.v else v for u, v in removed)

    if isinstance(m, DeleteI):
        if len(others) != 2:
            raise ReceiptMismatch(f"DeleteI receipt lists {len(others)} edges, expected 2")
        return InsertI(others[0], others[1], reuse_id=m.v)

    if len(others) != 3 or m.a not in others or m.b not in others:
        raise ReceiptMismatch(f"DeleteII receipt {removed} does not match {m}")
    (w,) = [u for u in others if u != m.a and u != m.b]
    return InsertII(m.a, m.b, w, reuse_id=m.v)
