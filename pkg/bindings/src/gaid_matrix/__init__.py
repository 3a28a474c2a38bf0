"""Matrix front end for the gaid causal graph distances.

Exposes the five distances on p x p integer adjacency matrices for
notebook use: cell (i, j) = 1 means i -> j (mirror cell 0), 2 means i -- j
(mirror cell 2). Inputs may be dense (numpy arrays or nested sequences,
read without copying where possible and never mutated) or sparse
``(p, [(row, col, value), ...])`` triplet lists. Heavy computation runs in
compiled kernels that release the interpreter lock.
"""

from typing import Iterable, Mapping

import numpy as np

from gaid import Graph, PairFilter, PartialOrder, Strategy
from gaid import aid as _aid
from gaid import order_aid as _order_aid
from gaid import shd as _shd

__version__ = "0.1.0"

__all__ = ["parent_aid", "ancestor_aid", "oset_aid", "shd", "order_aid", "__version__"]


def _graph_from_triplets(p: int, triplets: Iterable[tuple[int, int, int]], kind) -> Graph:
    """Apply the adjacency-matrix cell coding to sparse (row, col, value)
    entries without materializing the dense matrix."""
    entries: dict[tuple[int, int], int] = {}
    for row, col, value in triplets:
        row, col, value = int(row), int(col), int(value)
        if not (0 <= row < p and 0 <= col < p):
            raise ValueError(f"triplet index ({row},{col}) out of range 0..{p - 1}")
        if value not in (0, 1, 2):
            raise ValueError(f"illegal cell value {value} at ({row},{col}); cells must be 0, 1 or 2")
        if row == col and value != 0:
            raise ValueError(f"nonzero diagonal at node {row} (self-loop)")
        if entries.setdefault((row, col), value) != value:
            raise ValueError(f"conflicting triplet values at ({row},{col})")
    directed, undirected = [], []
    pairs = {(min(i, j), max(i, j)) for (i, j), v in entries.items() if v != 0}
    for i, j in sorted(pairs):
        x = entries.get((i, j), 0)
        y = entries.get((j, i), 0)
        if x == 1 and y == 0:
            directed.append((i, j))
        elif x == 0 and y == 1:
            directed.append((j, i))
        elif x == 2 and y == 2:
            undirected.append((i, j))
        else:
            raise ValueError(
                f"inconsistent cells ({i},{j})={x} and ({j},{i})={y}: "
                "1 requires the mirror cell 0, 2 requires the mirror cell 2"
            )
    return Graph.from_edges(p, directed, undirected, kind)


def _as_graph(matrix, kind) -> Graph:
    if isinstance(matrix, Graph):
        return matrix
    if isinstance(matrix, tuple) and len(matrix) == 2 and np.isscalar(matrix[0]):
        return _graph_from_triplets(int(matrix[0]), matrix[1], kind)
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"adjacency matrix must be square, got shape {a.shape}")
    return Graph.from_amat(a, kind)


def _as_order(order, p: int) -> PartialOrder:
    if isinstance(order, PartialOrder):
        return order
    items = list(order)
    if items and isinstance(items[0], (tuple, list)):
        return PartialOrder(p, frozenset((int(a), int(b)) for a, b in items))
    return PartialOrder.total(int(v) for v in items)


def _result(res) -> dict:
    return {"count": res.count, "normalized": res.normalized}


def _filter(options: Mapping) -> PairFilter | None:
    treatments = options.get("treatments")
    targets = options.get("targets")
    if treatments is None and targets is None:
        return None
    return PairFilter(treatments=treatments, targets=targets)


def _aid_call(strategy: Strategy, true_matrix, guess_matrix, options: Mapping) -> dict:
    kind = options.get("kind")
    g_true = _as_graph(true_matrix, kind)
    g_guess = _as_graph(guess_matrix, kind)
    res = _aid(g_true, g_guess, strategy, filter=_filter(options), threads=options.get("threads"))
    return _result(res)


def parent_aid(true_matrix, guess_matrix, **options) -> dict:
    """Parent-adjustment identification distance; see the package docstring
    for the matrix coding. Options: kind, threads, treatments, targets."""
    return _aid_call(Strategy.PARENT, true_matrix, guess_matrix, options)


def ancestor_aid(true_matrix, guess_matrix, **options) -> dict:
    """Ancestor-adjustment identification distance."""
    return _aid_call(Strategy.ANCESTOR, true_matrix, guess_matrix, options)


def oset_aid(true_matrix, guess_matrix, **options) -> dict:
    """Optimal-adjustment-set identification distance."""
    return _aid_call(Strategy.OSET, true_matrix, guess_matrix, options)


def shd(true_matrix, guess_matrix, **options) -> dict:
    """Structural Hamming distance over node pairs."""
    kind = options.get("kind")
    return _result(_shd(_as_graph(true_matrix, kind), _as_graph(guess_matrix, kind)))


def order_aid(true_matrix, guess_order, **options) -> dict:
    """Ancestor distance from a true DAG to a guessed causal order.

    ``guess_order`` is a permutation of 0..p-1 (first node earliest) or an
    iterable of (a, b) precedence pairs.
    """
    g_true = _as_graph(true_matrix, options.get("kind", "dag"))
    order = _as_order(guess_order, g_true.p)
    return _result(_order_aid(g_true, order, threads=options.get("threads")))
