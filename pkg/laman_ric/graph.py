"""Canonical graph representation, mutation primitives, fingerprinting and record codec."""

from __future__ import annotations

from itertools import combinations
from typing import Any, Iterable, Iterator, Mapping

import networkx as nx

from .errors import (
    DuplicateEdge,
    EdgeExists,
    EndpointOutOfRange,
    GraphError,
    InputFormatError,
    SelfLoop,
    UnknownNode,
)

Edge = tuple[int, int]

# Fingerprint of the graph with no nodes
EMPTY_FINGERPRINT = 0

DEFAULT_WL_ROUNDS = 3


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """
    Undirected simple graph with stable, non-negative node ids.

    Values are immutable: every mutation primitive returns a new Graph.
    Iteration over nodes and edges is sorted.

    Usage:
        g = Graph([0, 1, 2], [(0, 1), (1, 2), (0, 2)])
        h = g.add_node(3, [0, 1])
        h, removed = h.remove_node(3)
    """

    __slots__ = ("_nodes", "_edges", "_adj", "_sorted_edges")

    def __init__(self, nodes: Iterable[int] = (), edges: Iterable[Edge] = ()):
        node_set: set[int] = set()
        for v in nodes:
            if not isinstance(v, int) or v < 0:
                raise GraphError(f"Node ids must be non-negative integers, got {v!r}")
            node_set.add(v)

        adj: dict[int, set[int]] = {v: set() for v in node_set}
        edge_set: set[Edge] = set()
        for u, v in edges:
            if u == v:
                raise SelfLoop(f"Self-loop on node {u}")
            if u not in adj or v not in adj:
                missing = u if u not in adj else v
                raise UnknownNode(f"Edge ({u}, {v}) references unknown node {missing}")
            e = _edge(u, v)
            if e in edge_set:
                raise DuplicateEdge(f"Duplicate edge {e}")
            edge_set.add(e)
            adj[u].add(v)
            adj[v].add(u)

        self._nodes = tuple(sorted(node_set))
        self._edges = frozenset(edge_set)
        self._adj = {v: frozenset(nbrs) for v, nbrs in adj.items()}
        self._sorted_edges: tuple[Edge, ...] | None = None

    @classmethod
    def _trusted(
        cls,
        nodes: tuple[int, ...],
        edges: frozenset[Edge],
        adj: dict[int, frozenset[int]],
    ) -> Graph:
        """Build without validation; callers guarantee the invariants."""
        g = cls.__new__(cls)
        g._nodes = nodes
        g._edges = edges
        g._adj = adj
        g._sorted_edges = None
        return g

    # -- queries ----------------------------------------------------------

    @property
    def nodes(self) -> tuple[int, ...]:
        return self._nodes

    @property
    def edges(self) -> tuple[Edge, ...]:
        if self._sorted_edges is None:
            self._sorted_edges = tuple(sorted(self._edges))
        return self._sorted_edges

    @property
    def n(self) -> int:
        return len(self._nodes)

    @property
    def m(self) -> int:
        return len(self._edges)

    def has_node(self, v: int) -> bool:
        return v in self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return _edge(u, v) in self._edges

    def neighbors(self, v: int) -> frozenset[int]:
        try:
            return self._adj[v]
        except KeyError:
            raise UnknownNode(f"Unknown node {v}") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def next_node_id(self) -> int:
        """Fresh id for an inserted node: max id + 1 (0 for the empty graph)."""
        return self._nodes[-1] + 1 if self._nodes else 0

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __iter__(self) -> Iterator[int]:
        return iter(self._nodes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._nodes == other._nodes and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._nodes, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, edges={list(self.edges)})"

    # -- mutation primitives ----------------------------------------------

    def add_node(self, node: int, neighbors: Iterable[int]) -> Graph:
        """Return a copy with `node` added and joined to `neighbors`."""
        if node < 0:
            raise GraphError(f"Node ids must be non-negative, got {node}")
        if node in self._adj:
            raise GraphError(f"Node {node} already present")
        nbrs = frozenset(neighbors)
        for u in nbrs:
            if u not in self._adj:
                raise UnknownNode(f"Unknown node {u}")
        adj = dict(self._adj)
        for u in nbrs:
            adj[u] = adj[u] | {node}
        adj[node] = nbrs
        edges = self._edges | {_edge(u, node) for u in nbrs}
        return Graph._trusted(tuple(sorted(adj)), edges, adj)

    def remove_node(self, v: int) -> tuple[Graph, tuple[Edge, ...]]:
        """Return a copy without `v` plus the sorted edges that were removed."""
        nbrs = self.neighbors(v)
        removed = tuple(sorted(_edge(u, v) for u in nbrs))
        adj = dict(self._adj)
        del adj[v]
        for u in nbrs:
            adj[u] = adj[u] - {v}
        edges = self._edges.difference(removed)
        nodes = tuple(x for x in self._nodes if x != v)
        return Graph._trusted(nodes, edges, adj), removed

    def add_edge(self, u: int, v: int) -> Graph:
        if u == v:
            raise SelfLoop(f"Self-loop on node {u}")
        self.neighbors(u)
        self.neighbors(v)
        e = _edge(u, v)
        if e in self._edges:
            raise EdgeExists(f"Edge {e} already present")
        adj = dict(self._adj)
        adj[u] = adj[u] | {v}
        adj[v] = adj[v] | {u}
        return Graph._trusted(self._nodes, self._edges | {e}, adj)

    def remove_edge(self, u: int, v: int) -> Graph:
        e = _edge(u, v)
        if e not in self._edges:
            raise GraphError(f"Edge {e} not present")
        adj = dict(self._adj)
        adj[u] = adj[u] - {v}
        adj[v] = adj[v] - {u}
        return Graph._trusted(self._nodes, self._edges - {e}, adj)

    # -- conversions ------------------------------------------------------

    def relabeled(self) -> Graph:
        """Compact node ids to 0..n-1 preserving sorted order."""
        index = {v: i for i, v in enumerate(self._nodes)}
        if all(i == v for v, i in index.items()):
            return self
        return Graph(range(self.n), ((index[u], index[v]) for u, v in self.edges))

    def to_networkx(self) -> nx.Graph:
        nxg = nx.Graph()
        nxg.add_nodes_from(self._nodes)
        nxg.add_edges_from(self.edges)
        return nxg

    @classmethod
    def from_networkx(cls, nxg: nx.Graph) -> Graph:
        return cls(nxg.nodes, nxg.edges)


def from_edge_list(n: int, edges: Iterable[Edge]) -> Graph:
    """
    Build a graph on nodes 0..n-1.

    Raises:
        SelfLoop, DuplicateEdge, EndpointOutOfRange
    """
    if n < 0:
        raise GraphError(f"Node count must be non-negative, got {n}")
    pairs = []
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise EndpointOutOfRange(f"Edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        pairs.append((u, v))
    return Graph(range(n), pairs)


def complete_graph(k: int) -> Graph:
    return from_edge_list(k, combinations(range(k), 2))


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    keep = frozenset(s)
    for v in keep:
        if v not in g:
            raise UnknownNode(f"Unknown node {v}")
    if len(keep) == g.n:
        return g
    adj = {v: g.neighbors(v) & keep for v in keep}
    edges = frozenset(e for e in g.edges if e[0] in keep and e[1] in keep)
    return Graph._trusted(tuple(sorted(keep)), edges, adj)


def wl_fingerprint(g: Graph, rounds: int = DEFAULT_WL_ROUNDS) -> int:
    """
    Relabel-invariant 64-bit digest from Weisfeiler-Lehman refinement.

    Initial labels are node degrees; each round hashes a node's label with
    the sorted multiset of neighbour labels, via networkx with an 8-byte digest. The
    digest of the final label histogram is returned as an unsigned int.
    Equal digests do not imply isomorphism. The empty graph maps to
    EMPTY_FINGERPRINT.
    """
    if g.n == 0:
        return EMPTY_FINGERPRINT
    digest = nx.weisfeiler_lehman_graph_hash(g.to_networkx(), iterations=rounds, digest_size=8)
    return int(digest, 16)


# -- JSON record codec ------------------------------------------------------


def to_record(g: Graph, graph_id: str | None = None, **extra: Any) -> dict[str, Any]:
    """Canonical `{"id", "n", "edges"}` record with ids compacted to 0..n-1."""
    canon = g.relabeled()
    record: dict[str, Any] = {}
    if graph_id is not None:
        record["id"] = graph_id
    record["n"] = canon.n
    record["edges"] = [[u, v] for u, v in canon.edges]
    record.update(extra)
    return record


def from_record(data: Mapping[str, Any]) -> Graph:
    """
    Parse a graph record.

    Raises:
        InputFormatError: missing keys, wrong types or invalid edges
    """
    try:
        n = data["n"]
        raw_edges = data["edges"]
    except (KeyError, TypeError) as e:
        raise InputFormatError(f"Graph record needs 'n' and 'edges': {e}") from e
    if not isinstance(n, int) or isinstance(n, bool):
        raise InputFormatError(f"'n' must be an integer, got {n!r}")
    if not isinstance(raw_edges, list):
        raise InputFormatError("'edges' must be a list of pairs")
    pairs = []
    for item in raw_edges:
        if (
            not isinstance(item, (list, tuple))
            or len(item) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in item)
        ):
            raise InputFormatError(f"Invalid edge entry {item!r}")
        pairs.append((int(item[0]), int(item[1])))
    try:
        return from_edge_list(n, pairs)
    except GraphError as e:
        raise InputFormatError(f"Invalid graph record: {e}") from e
