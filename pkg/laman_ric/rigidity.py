"""Laman validity via the (2,3)-pebble game, brute-force oracles and degree of decomposability."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import EdgeExists, NotSparse, SelfLoop, TooLarge, TooSmall, UnknownNode
from .graph import Graph

logger = logging.getLogger(__name__)

PEBBLES_PER_NODE = 2
# Pebbles gathered on an edge's endpoints before it is accepted (l + 1 for l = 3)
PEBBLES_TO_ACCEPT = 4

BRUTE_FORCE_MAX_N = 16
# Hard memory guard for the subset tables (2**n entries)
SUBSET_TABLE_MAX_N = 22

DOD_CONVENTION = "induced-subgraphs>=3-nodes,all"

_POP8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)


class PebbleGame:
    """
    Working state of the (2,3)-pebble game.

    Every node starts with two pebbles. An accepted edge is oriented out of
    the node whose pebble covers it, so `sum(pebbles) + accepted == 2n`
    holds after every operation. Pebble searches are depth-first along
    current orientations, visiting neighbours in ascending id order.

    Usage:
        game = PebbleGame.from_graph(g)       # raises NotSparse
        game.can_add(u, v)                    # independence query
        game.add_edge(u, v)                   # accept if independent
    """

    def __init__(self, nodes: Iterable[int]):
        self.pebbles: dict[int, int] = {v: PEBBLES_PER_NODE for v in nodes}
        self.out: dict[int, set[int]] = {v: set() for v in self.pebbles}
        self.accepted = 0

    @classmethod
    def from_graph(cls, g: Graph) -> PebbleGame:
        game = cls(g.nodes)
        for u, v in g.edges:
            if not game.add_edge(u, v):
                raise NotSparse(f"Edge ({u}, {v}) violates (2,3)-sparsity")
        return game

    def can_add(self, u: int, v: int) -> bool:
        """
        True iff edge (u, v) is independent of the accepted edges.

        Pebbles may be rearranged, which leaves the state valid for the
        same accepted edge set.
        """
        return self._gather(u, v)

    def add_edge(self, u: int, v: int) -> bool:
        """Accept (u, v) if four pebbles can be gathered on its endpoints."""
        if not self._gather(u, v):
            return False
        self.pebbles[u] -= 1
        self.out[u].add(v)
        self.accepted += 1
        assert self.conserved(), "pebble conservation violated"
        return True

    def conserved(self) -> bool:
        return (
            sum(self.pebbles.values()) + self.accepted == PEBBLES_PER_NODE * len(self.pebbles)
            and all(0 <= p <= PEBBLES_PER_NODE for p in self.pebbles.values())
        )

    def _gather(self, u: int, v: int) -> bool:
        while self.pebbles[u] < PEBBLES_PER_NODE:
            if not self._draw_pebble(u, frozen=v):
                return False
        while self.pebbles[v] < PEBBLES_PER_NODE:
            if not self._draw_pebble(v, frozen=u):
                return False
        return True

    def _draw_pebble(self, root: int, frozen: int) -> bool:
        """Move one free pebble to `root` by reversing a directed path."""
        parent: dict[int, int] = {}
        seen = {root}
        stack = [(root, iter(sorted(self.out[root])))]
        found: int | None = None
        while stack and found is None:
            x, children = stack[-1]
            for y in children:
                if y in seen:
                    continue
                seen.add(y)
                parent[y] = x
                if y != frozen and self.pebbles[y] > 0:
                    found = y
                else:
                    stack.append((y, iter(sorted(self.out[y]))))
                break
            else:
                stack.pop()

        if found is None:
            return False

        node = found
        while node != root:
            prev = parent[node]
            self.out[prev].remove(node)
            self.out[node].add(prev)
            node = prev
        self.pebbles[found] -= 1
        self.pebbles[root] += 1
        return True


@dataclass(frozen=True)
class DodResult:
    """Degree of decomposability: g well-constrained induced subgraphs over n nodes."""
    g: int
    n: int
    dod: float
    min_size: int = 3
    convention: str = DOD_CONVENTION


def is_laman(g: Graph) -> bool:
    """
    Both Laman conditions via the pebble game.

    Raises:
        TooSmall: fewer than 2 nodes
    """
    if g.n < 2:
        raise TooSmall(f"Laman check needs at least 2 nodes, got {g.n}")
    target = 2 * g.n - 3
    if g.m != target:
        return False
    game = PebbleGame(g.nodes)
    for u, v in g.edges:
        if not game.add_edge(u, v):
            return False
    return game.accepted == target


def is_sparse(g: Graph) -> bool:
    """(2,3)-sparsity alone: every k-node induced subgraph has at most 2k-3 edges."""
    game = PebbleGame(g.nodes)
    return all(game.add_edge(u, v) for u, v in g.edges)


def can_add_edge(g: Graph, u: int, v: int) -> bool:
    """
    Whether adding (u, v) keeps g (2,3)-sparse.

    Raises:
        SelfLoop, UnknownNode, EdgeExists, NotSparse
    """
    if u == v:
        raise SelfLoop(f"Self-loop on node {u}")
    for x in (u, v):
        if x not in g:
            raise UnknownNode(f"Unknown node {x}")
    if g.has_edge(u, v):
        raise EdgeExists(f"Edge ({u}, {v}) already present")
    return PebbleGame.from_graph(g).can_add(u, v)


# -- subset tables ----------------------------------------------------------


def _popcount(x: np.ndarray) -> np.ndarray:
    total = np.zeros_like(x)
    shifted = x.copy()
    while np.any(shifted):
        total += _POP8[shifted & 0xFF]
        shifted >>= 8
    return total


def subset_edge_counts(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """
    Edge count and node count of the induced subgraph for every node subset.

    Subsets are bitmasks over the sorted node list. Returns (edges, sizes),
    both of length 2**n.
    """
    n = g.n
    if n > SUBSET_TABLE_MAX_N:
        raise TooLarge(f"Subset tables limited to {SUBSET_TABLE_MAX_N} nodes, got {n}")
    index = {v: i for i, v in enumerate(g.nodes)}
    counts = np.zeros(1 << n, dtype=np.int64)
    for i, v in enumerate(g.nodes):
        lower = 0
        for u in g.neighbors(v):
            if index[u] < i:
                lower |= 1 << index[u]
        lo = 1 << i
        prefix = np.arange(lo, dtype=np.int64)
        counts[lo:2 * lo] = counts[:lo] + _popcount(prefix & lower)
    sizes = _popcount(np.arange(1 << n, dtype=np.int64))
    return counts, sizes


def _laman_subsets(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Boolean table of subsets whose induced subgraph is Laman, plus sizes."""
    counts, sizes = subset_edge_counts(g)
    bound = 2 * sizes - 3
    bad = (sizes >= 2) & (counts > bound)
    # Close upward: a subset is bad if any of its subsets is
    for i in range(g.n):
        view = bad.reshape(-1, 2, 1 << i)
        view[:, 1, :] |= view[:, 0, :]
    laman = (sizes >= 2) & (counts == bound) & ~bad
    return laman, sizes


def brute_force_is_laman(g: Graph) -> bool:
    """
    Independent oracle: check both Laman conditions over all node subsets.

    Raises:
        TooSmall: fewer than 2 nodes
        TooLarge: more than 16 nodes
    """
    if g.n < 2:
        raise TooSmall(f"Laman check needs at least 2 nodes, got {g.n}")
    if g.n > BRUTE_FORCE_MAX_N:
        raise TooLarge(f"Brute-force check limited to {BRUTE_FORCE_MAX_N} nodes, got {g.n}")
    laman, _ = _laman_subsets(g)
    return bool(laman[-1])


def count_well_constrained_subgraphs(
    g: Graph,
    min_size: int = 3,
    max_n: int = BRUTE_FORCE_MAX_N,
) -> DodResult:
    """
    Count node subsets of size >= min_size whose induced subgraph is Laman.

    Raises:
        TooSmall: empty graph
        TooLarge: more than max_n nodes
    """
    if g.n == 0:
        raise TooSmall("Degree of decomposability is undefined for the empty graph")
    if g.n > max_n:
        raise TooLarge(f"Exact DoD limited to {max_n} nodes, got {g.n}")
    laman, sizes = _laman_subsets(g)
    count = int(np.count_nonzero(laman & (sizes >= min_size)))
    return DodResult(g=count, n=g.n, dod=count / g.n, min_size=min_size)
