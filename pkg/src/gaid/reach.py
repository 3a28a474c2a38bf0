"""Linear-time reachability primitives.

Ancestral sets, amenability, walk-status-aware adjustment verification and
d-connection over definite-status walks. All operations are pure functions
of ``(graph, t, z)``: scratch buffers are per call, the graph is shared
read-only, and every search expands each (arrival edge, node, walk status)
record at most once.
"""

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable

import numpy as np

from . import _kernels as k
from .graph import Graph, GraphKind, NodeSet

__all__ = [
    "ArrivalEdge",
    "WalkStatus",
    "AdjustmentVerdict",
    "descendants",
    "ancestors",
    "possible_descendants",
    "proper_ancestors",
    "non_amenable",
    "verify_adjustment",
    "d_connected",
]


class ArrivalEdge(IntEnum):
    """How a walk stepped onto the current node."""

    VIA_DIRECTED_IN = k.ARR_DIR_IN
    VIA_DIRECTED_OUT = k.ARR_DIR_OUT
    VIA_UNDIRECTED = k.ARR_UND
    INIT = 3


class WalkStatus(IntEnum):
    """Quinary status carried forward along a walk (plus the seed state)."""

    PD_TO_OPEN = k.ST_PD_TO_OPEN
    PD_TO_BLOCKED = k.ST_PD_TO_BLOCKED
    PD_UNDIR_OPEN = k.ST_PD_UN_OPEN
    PD_UNDIR_BLOCKED = k.ST_PD_UN_BLOCKED
    NON_CAUSAL = k.ST_NONCAUSAL
    INIT = 5


@dataclass(frozen=True)
class AdjustmentVerdict:
    """Result of one verification pass for a treatment set and candidate Z.

    ``nam`` holds the targets for which the graph is not amenable, ``nva``
    the targets for which Z is not a valid adjustment set (a superset of
    ``nam`` and of Z itself). ``expansions`` counts search-record pops,
    bounded by the number of distinct (arrival, node, status) records.
    """

    nam: NodeSet
    nva: NodeSet
    expansions: int


def _node_mask(g: Graph, nodes, allow_empty: bool = False) -> np.ndarray:
    if isinstance(nodes, NodeSet):
        if nodes.p != g.p:
            raise ValueError(f"node set over {nodes.p} nodes used with a graph of {g.p}")
        mask = nodes.mask()
    else:
        mask = np.zeros(g.p, dtype=np.bool_)
        for v in nodes:
            if not 0 <= v < g.p:
                raise ValueError(f"invalid node id {v} for a graph with p={g.p}")
            mask[v] = True
    if not allow_empty and not mask.any():
        raise ValueError("node set must be nonempty")
    return mask


def _seed_array(mask: np.ndarray) -> np.ndarray:
    return np.flatnonzero(mask).astype(np.int32)


def descendants(g: Graph, t: Iterable[int] | NodeSet) -> NodeSet:
    """Nodes reachable from t along directed edges, t included."""
    mask = _node_mask(g, t)
    out = np.zeros(g.p, dtype=np.bool_)
    pa_ptr, pa_idx, ch_ptr, ch_idx, _, _ = g.csr()
    k.reach(ch_ptr, ch_idx, _seed_array(mask), out, np.empty(g.p + 1, np.int64))
    return NodeSet.from_mask(out, copy=False)


def ancestors(g: Graph, t: Iterable[int] | NodeSet) -> NodeSet:
    """Nodes with a directed path into t, t included."""
    mask = _node_mask(g, t)
    out = np.zeros(g.p, dtype=np.bool_)
    pa_ptr, pa_idx, *_ = g.csr()
    k.reach(pa_ptr, pa_idx, _seed_array(mask), out, np.empty(g.p + 1, np.int64))
    return NodeSet.from_mask(out, copy=False)


def possible_descendants(g: Graph, t: Iterable[int] | NodeSet) -> NodeSet:
    """Nodes reachable from t along possibly directed walks (directed or
    undirected steps, never against an arrow), t included."""
    mask = _node_mask(g, t, allow_empty=True)
    out = np.zeros(g.p, dtype=np.bool_)
    _, _, ch_ptr, ch_idx, un_ptr, un_idx = g.csr()
    k.reach2(ch_ptr, ch_idx, un_ptr, un_idx, _seed_array(mask), out, np.empty(g.p + 1, np.int64))
    return NodeSet.from_mask(out, copy=False)


def proper_ancestors(g: Graph, y: int, avoid: Iterable[int] | NodeSet = ()) -> NodeSet:
    """Nodes with a directed path to y that avoids ``avoid`` entirely,
    y included. y itself must not be in ``avoid``."""
    if not 0 <= y < g.p:
        raise ValueError(f"invalid node id {y} for a graph with p={g.p}")
    avoid_mask = _node_mask(g, avoid, allow_empty=True)
    if avoid_mask[y]:
        raise ValueError(f"target {y} is in the avoid set")
    out = np.zeros(g.p, dtype=np.bool_)
    pa_ptr, pa_idx, *_ = g.csr()
    k.reach_avoiding(pa_ptr, pa_idx, y, avoid_mask, out, np.empty(g.p + 1, np.int64))
    return NodeSet.from_mask(out, copy=False)


def non_amenable(g: Graph, t: Iterable[int] | NodeSet) -> NodeSet:
    """Targets reachable from t by a proper possibly directed walk starting
    with an undirected edge; empty for DAGs without any traversal."""
    mask = _node_mask(g, t)
    out = np.zeros(g.p, dtype=np.bool_)
    if g.kind is GraphKind.DAG:
        return NodeSet.from_mask(out, copy=False)
    _, _, ch_ptr, ch_idx, un_ptr, un_idx = g.csr()
    k.non_amenable(ch_ptr, ch_idx, un_ptr, un_idx, _seed_array(mask), mask, out, np.empty(g.p + 1, np.int64))
    return NodeSet.from_mask(out, copy=False)


def verify_adjustment(g: Graph, t: Iterable[int] | NodeSet, z: Iterable[int] | NodeSet) -> AdjustmentVerdict:
    """One reachability pass deciding, for every target Y at once, whether
    the graph is amenable for (t, Y) and whether z is a valid adjustment
    set for (t, Y). t and z must be disjoint."""
    t_mask = _node_mask(g, t)
    z_mask = _node_mask(g, z, allow_empty=True)
    if (t_mask & z_mask).any():
        v = int(np.flatnonzero(t_mask & z_mask)[0])
        raise ValueError(f"treatment and adjustment sets overlap at node {v}")
    nam = np.zeros(g.p, dtype=np.bool_)
    nva = z_mask.copy()
    visited = np.zeros(k.N_ARRIVALS * k.N_STATUSES * g.p, dtype=np.bool_)
    stack = np.empty(k.N_ARRIVALS * k.N_STATUSES * g.p + 1, dtype=np.int64)
    expansions = k.verify_adjustment(
        *g.csr(), _seed_array(t_mask), t_mask, z_mask, nam, nva, visited, stack
    )
    return AdjustmentVerdict(
        nam=NodeSet.from_mask(nam, copy=False),
        nva=NodeSet.from_mask(nva, copy=False),
        expansions=int(expansions),
    )


def d_connected(g: Graph, t: Iterable[int] | NodeSet, z: Iterable[int] | NodeSet = ()) -> NodeSet:
    """All targets d-connected to t given z, via definite-status walks with
    local continuation rules. t and z must be disjoint."""
    t_mask = _node_mask(g, t)
    z_mask = _node_mask(g, z, allow_empty=True)
    if (t_mask & z_mask).any():
        v = int(np.flatnonzero(t_mask & z_mask)[0])
        raise ValueError(f"treatment and conditioning sets overlap at node {v}")
    reached = np.zeros(g.p, dtype=np.bool_)
    visited = np.zeros(k.N_ARRIVALS * g.p, dtype=np.bool_)
    stack = np.empty(k.N_ARRIVALS * g.p + 1, dtype=np.int64)
    k.d_connected(*g.csr(), _seed_array(t_mask), t_mask, z_mask, reached, visited, stack)
    return NodeSet.from_mask(reached, copy=False)
