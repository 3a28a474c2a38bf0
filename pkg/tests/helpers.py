"""Shared graph builders for the test suite."""

import numpy as np

from gaid import Graph, GraphKind, cpdag_of_dag
from gaid.simbench import GenConfig, gen_random_dag


def chain_dag(p: int) -> Graph:
    return Graph.from_edges(p, [(i, i + 1) for i in range(p - 1)], kind=GraphKind.DAG)


def reversed_chain_dag(p: int) -> Graph:
    return Graph.from_edges(p, [(i + 1, i) for i in range(p - 1)], kind=GraphKind.DAG)


def full_dag(p: int) -> Graph:
    return Graph.from_edges(p, [(i, j) for i in range(p) for j in range(i + 1, p)], kind=GraphKind.DAG)


def empty_graph(p: int, kind=GraphKind.DAG) -> Graph:
    return Graph.from_edges(p, kind=kind)


def full_undirected_cpdag(p: int) -> Graph:
    und = [(i, j) for i in range(p) for j in range(i + 1, p)]
    return Graph.from_edges(p, undirected=und, kind=GraphKind.CPDAG)


def undirected_path_cpdag(order) -> Graph:
    order = list(order)
    und = [(order[i], order[i + 1]) for i in range(len(order) - 1)]
    return Graph.from_edges(len(order), undirected=und, kind=GraphKind.CPDAG)


def reference_cpdag() -> Graph:
    """Four-node CPDAG with two non-adjacent sources 0 and 3, both pointing
    at 1 and 2, plus the undirected edge 1 -- 2."""
    return Graph.from_edges(
        4, directed=[(0, 1), (0, 2), (3, 1), (3, 2)], undirected=[(1, 2)], kind=GraphKind.CPDAG
    )


def backdoor_triple() -> Graph:
    """0 -> 1, 0 -> 2, 1 -> 2: node 0 confounds the 1 -> 2 effect."""
    return Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)], kind=GraphKind.DAG)


def random_dag(rng: np.random.Generator, p: int | None = None, prob: float | None = None) -> Graph:
    if p is None:
        p = int(rng.integers(2, 9))
    if prob is None:
        prob = float(rng.uniform(0.1, 0.8))
    return gen_random_dag(GenConfig(p, prob, int(rng.integers(1 << 62))))


def random_cpdag(rng: np.random.Generator, p: int | None = None, prob: float | None = None) -> Graph:
    if p is None:
        p = int(rng.integers(2, 7))
    if prob is None:
        prob = float(rng.uniform(0.1, 0.8))
    return cpdag_of_dag(random_dag(rng, p, prob))


def topological_order(g: Graph, rng: np.random.Generator | None = None) -> list[int]:
    """One (optionally randomized) linear extension of a DAG."""
    indeg = {v: len(g.parents(v)) for v in range(g.p)}
    ready = sorted(v for v, d in indeg.items() if d == 0)
    order = []
    while ready:
        i = int(rng.integers(len(ready))) if rng is not None else 0
        v = ready.pop(i)
        order.append(v)
        for w in g.children(v):
            indeg[int(w)] -= 1
            if indeg[int(w)] == 0:
                ready.append(int(w))
        ready.sort()
    return order


def random_super_dag(g: Graph, rng: np.random.Generator, add_prob: float = 0.3) -> Graph:
    """g plus random extra edges compatible with one of its topological orders."""
    order = topological_order(g, rng)
    pos = {v: i for i, v in enumerate(order)}
    existing = set(g.directed_edges())
    edges = list(existing)
    for u in range(g.p):
        for v in range(g.p):
            if u != v and pos[u] < pos[v] and (u, v) not in existing and rng.random() < add_prob:
                edges.append((u, v))
    return Graph.from_edges(g.p, edges, kind=GraphKind.DAG)
