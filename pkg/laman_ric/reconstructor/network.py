"""
Message passing, graph readout and per-category action heads, with manual backprop.

Forward:
    H0 = fourier(degree)
    H_{t+1} = tanh(H_t W_self + (A H_t) W_nbr + b)            for t < T
    Z = tanh(tanh(H_T R1 + c1) R2 + c2)
    g = [mean(Z) ; max(Z)]
    logit(action) = tanh([slot sums ; g] W1 + b1) . w2 + b2

Each head's first layer is applied block-wise: node embeddings are projected
once per slot and gathered by index, so scoring is linear in the action count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy.special import logsumexp, softmax

from ..errors import NotLaman, ShapeMismatch
from ..graph import Graph
from ..moves import Move, enumerate_legal
from ..rigidity import is_laman
from .params import HEAD_FOR_KIND, HEAD_SLOTS, ModelParams


@dataclass(frozen=True)
class Stop:
    """The stop token: end reconstruction at the current graph."""
    kind: str = "STOP"

    def to_dict(self) -> dict[str, str]:
        return {"type": self.kind}


STOP = Stop()

Action = Union[Stop, Move]


def featurize(g: Graph, fourier_freqs: Sequence[float]) -> np.ndarray:
    """Per node, [sin(w d), cos(w d)] for each frequency w, where d is the degree."""
    degrees = np.array([g.degree(v) for v in g.nodes], dtype=np.float64)
    angles = degrees[:, None] * np.asarray(fourier_freqs, dtype=np.float64)[None, :]
    out = np.empty((g.n, 2 * len(fourier_freqs)))
    out[:, 0::2] = np.sin(angles)
    out[:, 1::2] = np.cos(angles)
    return out


def adjacency(g: Graph) -> np.ndarray:
    index = {v: i for i, v in enumerate(g.nodes)}
    a = np.zeros((g.n, g.n))
    for u, v in g.edges:
        a[index[u], index[v]] = 1.0
        a[index[v], index[u]] = 1.0
    return a


@dataclass
class HeadInput:
    """Node-index arrays for one head: slots[s] lists the index arrays summed into slot s."""
    name: str
    slots: list[list[np.ndarray]]
    count: int


# Move fields per kind, and which of them are summed into each slot
MOVE_FIELDS: dict[str, tuple[str, ...]] = {
    "I": ("u", "v"),
    "II": ("u", "v", "w"),
    "DI": ("v",),
    "DII": ("v", "a", "b"),
}
SLOT_COLUMNS: dict[str, list[list[int]]] = {
    "I": [[0, 1]],
    "II": [[0, 1], [2]],
    "DI": [[0]],
    "DII": [[0], [1, 2]],
}


def head_inputs(g: Graph, moves: Sequence[Move]) -> dict[str, HeadInput]:
    """Group moves by head, in enumeration order, as node row indices."""
    index = {v: i for i, v in enumerate(g.nodes)}
    rows: dict[str, list[tuple[int, ...]]] = {kind: [] for kind in MOVE_FIELDS}
    for m in moves:
        rows[m.kind].append(tuple(index[getattr(m, f)] for f in MOVE_FIELDS[m.kind]))

    inputs = {"stop": HeadInput("stop", [], 1)}
    for kind, kind_rows in rows.items():
        arr = np.asarray(kind_rows, dtype=np.int64).reshape(len(kind_rows), len(MOVE_FIELDS[kind]))
        slots = [[arr[:, c] for c in cols] for cols in SLOT_COLUMNS[kind]]
        head = HEAD_FOR_KIND[kind]
        assert len(slots) == HEAD_SLOTS[head]
        inputs[head] = HeadInput(head, slots, len(kind_rows))
    return inputs


@dataclass
class HeadCache:
    inp: HeadInput
    hidden: np.ndarray
    logits: np.ndarray


@dataclass
class ForwardCache:
    """Intermediates kept for the backward pass."""
    adj: np.ndarray
    layers: list[np.ndarray]
    z1: np.ndarray
    z2: np.ndarray
    graph_emb: np.ndarray
    heads: dict[str, HeadCache] = field(default_factory=dict)

    @property
    def node_emb(self) -> np.ndarray:
        return self.layers[-1]


def _embed(g: Graph, params: ModelParams) -> ForwardCache:
    hyper = params.hyper
    x = featurize(g, hyper.fourier_freqs)
    if x.shape[1] != params["mp.0.w_self"].shape[0]:
        raise ShapeMismatch(
            f"Feature width {x.shape[1]} does not match first-layer input "
            f"{params['mp.0.w_self'].shape[0]}"
        )
    adj = adjacency(g)
    layers = [x]
    for t in range(hyper.rounds):
        h = layers[-1]
        layers.append(np.tanh(
            h @ params[f"mp.{t}.w_self"] + (adj @ h) @ params[f"mp.{t}.w_nbr"] + params[f"mp.{t}.b"]
        ))
    z1 = np.tanh(layers[-1] @ params["readout.w1"] + params["readout.b1"])
    z2 = np.tanh(z1 @ params["readout.w2"] + params["readout.b2"])
    graph_emb = np.concatenate([z2.mean(axis=0), z2.max(axis=0)])
    return ForwardCache(adj, layers, z1, z2, graph_emb)


def message_pass(g: Graph, params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """
    Node embeddings (rows in sorted node order) and the graph embedding.

    Raises:
        ShapeMismatch
    """
    if g.n == 0:
        raise ShapeMismatch("Cannot embed the empty graph")
    cache = _embed(g, params)
    return cache.node_emb, cache.graph_emb


def _head_forward(params: ModelParams, cache: ForwardCache, inp: HeadInput) -> HeadCache:
    h = params.hyper.hidden
    w1 = params[f"head.{inp.name}.w1"]
    n_slots = len(inp.slots)
    graph_part = cache.graph_emb @ w1[n_slots * h:] + params[f"head.{inp.name}.b1"]
    pre = np.tile(graph_part, (inp.count, 1))
    for s, idx_list in enumerate(inp.slots):
        proj = cache.node_emb @ w1[s * h:(s + 1) * h]
        for idx in idx_list:
            pre += proj[idx]
    hidden = np.tanh(pre)
    logits = hidden @ params[f"head.{inp.name}.w2"] + params[f"head.{inp.name}.b2"][0]
    return HeadCache(inp, hidden, logits)


def forward(
    params: ModelParams, g: Graph, moves: Sequence[Move]
) -> tuple[np.ndarray, ForwardCache]:
    """
    Logits for [STOP] + moves, in that order.

    `moves` must be grouped by kind in enumeration order (I, II, DI, DII).
    """
    if g.n == 0:
        raise ShapeMismatch("Cannot embed the empty graph")
    cache = _embed(g, params)
    parts = []
    for name, inp in head_inputs(g, moves).items():
        if inp.count == 0:
            continue
        head = _head_forward(params, cache, inp)
        cache.heads[name] = head
        parts.append(head.logits)
    return np.concatenate(parts), cache


def backward(
    params: ModelParams, cache: ForwardCache, dlogits: np.ndarray
) -> dict[str, np.ndarray]:
    """Gradient of sum(dlogits * logits) with respect to every parameter."""
    hyper = params.hyper
    h = hyper.hidden
    grads = params.zeros_like()
    d_node = np.zeros_like(cache.node_emb)
    d_graph = np.zeros_like(cache.graph_emb)

    offset = 0
    for name, head in cache.heads.items():
        dl = dlogits[offset:offset + head.inp.count]
        offset += head.inp.count
        w1 = params[f"head.{name}.w1"]
        n_slots = len(head.inp.slots)

        grads[f"head.{name}.w2"] += head.hidden.T @ dl
        grads[f"head.{name}.b2"] += dl.sum()
        d_pre = np.outer(dl, params[f"head.{name}.w2"]) * (1.0 - head.hidden**2)
        d_pre_sum = d_pre.sum(axis=0)
        grads[f"head.{name}.b1"] += d_pre_sum
        grads[f"head.{name}.w1"][n_slots * h:] += np.outer(cache.graph_emb, d_pre_sum)
        d_graph += w1[n_slots * h:] @ d_pre_sum
        for s, idx_list in enumerate(head.inp.slots):
            d_proj = np.zeros_like(cache.node_emb)
            for idx in idx_list:
                np.add.at(d_proj, idx, d_pre)
            grads[f"head.{name}.w1"][s * h:(s + 1) * h] += cache.node_emb.T @ d_proj
            d_node += d_proj @ w1[s * h:(s + 1) * h].T

    # Readout: mean pool spreads evenly, max pool routes to the first argmax
    n = cache.z2.shape[0]
    d_z2 = np.tile(d_graph[:h] / n, (n, 1))
    d_z2[cache.z2.argmax(axis=0), np.arange(h)] += d_graph[h:]
    d_s2 = d_z2 * (1.0 - cache.z2**2)
    grads["readout.w2"] += cache.z1.T @ d_s2
    grads["readout.b2"] += d_s2.sum(axis=0)
    d_s1 = (d_s2 @ params["readout.w2"].T) * (1.0 - cache.z1**2)
    grads["readout.w1"] += cache.node_emb.T @ d_s1
    grads["readout.b1"] += d_s1.sum(axis=0)
    d_node += d_s1 @ params["readout.w1"].T

    for t in reversed(range(hyper.rounds)):
        h_in, h_out = cache.layers[t], cache.layers[t + 1]
        d_s = d_node * (1.0 - h_out**2)
        agg = cache.adj @ h_in
        grads[f"mp.{t}.w_self"] += h_in.T @ d_s
        grads[f"mp.{t}.w_nbr"] += agg.T @ d_s
        grads[f"mp.{t}.b"] += d_s.sum(axis=0)
        d_node = d_s @ params[f"mp.{t}.w_self"].T + cache.adj.T @ (d_s @ params[f"mp.{t}.w_nbr"].T)
    return grads


@dataclass
class ActionDistribution:
    """Categorical distribution over STOP and the legal moves of one graph."""
    actions: list[Action]
    logits: np.ndarray
    probabilities: np.ndarray

    def index(self, action: Action) -> int:
        return self.actions.index(action)

    def log_prob(self, action: Action) -> float:
        i = self.index(action)
        return float(self.logits[i] - logsumexp(self.logits))


def legal_actions(g: Graph, size_min: int, size_max: int) -> list[Action]:
    actions: list[Action] = [STOP]
    actions.extend(enumerate_legal(g, size_min, size_max))
    return actions


def score_actions(
    g: Graph,
    params: ModelParams,
    size_min: int = 3,
    size_max: int = 100,
) -> ActionDistribution:
    """
    Model distribution over STOP plus every legal move, one softmax across categories.

    Raises:
        NotLaman, ShapeMismatch
    """
    if g.n < 2 or not is_laman(g):
        raise NotLaman(f"Action scoring needs a Laman graph, got {g!r}")
    actions = legal_actions(g, size_min, size_max)
    logits, _ = forward(params, g, actions[1:])  # type: ignore[arg-type]
    return ActionDistribution(actions, logits, softmax(logits))
