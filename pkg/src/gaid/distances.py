"""Adjustment identification distances, SHD, and the DAG-to-order distance.

The generic engine derives per-treatment claims on the guess graph and
counts, on the true graph, the non-identifiability claims where the effect
is identifiable, the zero-effect claims landing on possible descendants,
and the adjustment claims whose set is not valid. Treatments fan out across
worker threads; the result is an exact integer reduction, so it is
independent of thread count and iteration order.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels as k
from .graph import Graph, GraphKind, PartialOrder, ValidationError, order_to_dag
from .strategies import Strategy

__all__ = ["DistanceResult", "PairFilter", "aid", "shd", "order_aid", "Strategy"]

_STRATEGY_CODE = {Strategy.PARENT: k.STRAT_PARENT, Strategy.ANCESTOR: k.STRAT_ANCESTOR}


@dataclass(frozen=True)
class DistanceResult:
    """Number of wrong claims plus the queried pair total.

    ``normalized`` is count / pair_total (0 when there are no pairs).
    """

    count: int
    pair_total: int

    @property
    def normalized(self) -> float:
        if self.pair_total == 0:
            return 0.0
        return self.count / self.pair_total


@dataclass(frozen=True)
class PairFilter:
    """Restrict counting to specific treatments and/or targets.

    The queried pair set is (treatments x targets) minus the diagonal;
    either side defaults to all nodes. Must be nonempty when given.
    """

    treatments: tuple | None = None
    targets: tuple | None = None

    def __post_init__(self):
        for name in ("treatments", "targets"):
            val = getattr(self, name)
            if val is None:
                continue
            val = tuple(sorted({int(v) for v in val}))
            if not val:
                raise ValueError(f"{name} filter must be nonempty when provided")
            object.__setattr__(self, name, val)

    def resolve(self, p: int) -> tuple[np.ndarray, np.ndarray, int]:
        """(treatment ids, target mask, pair total) for a p-node graph."""
        for name in ("treatments", "targets"):
            val = getattr(self, name)
            if val and (val[0] < 0 or val[-1] >= p):
                raise ValueError(f"{name} filter id out of range 0..{p - 1}")
        ts = np.array(self.treatments if self.treatments is not None else range(p), dtype=np.int32)
        y_mask = np.zeros(p, dtype=np.bool_)
        y_mask[list(self.targets) if self.targets is not None else slice(None)] = True
        overlap = int(y_mask[ts].sum())
        return ts, y_mask, ts.size * int(y_mask.sum()) - overlap


_ALL_PAIRS = PairFilter()


def _worker_count(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("GAID_THREADS", "1"))
    if threads < 1:
        raise ValueError("threads must be >= 1")
    return threads


def aid(
    g_true: Graph,
    g_guess: Graph,
    strategy: Strategy | str,
    filter: PairFilter | None = None,
    threads: int | None = None,
) -> DistanceResult:
    """Adjustment identification distance from g_true to g_guess.

    Counts the (treatment, target) pairs whose claim, derived from g_guess
    by the given strategy, is wrong in g_true. Any DAG/CPDAG mix is
    accepted. Asymmetric in its arguments by construction.
    """
    strategy = Strategy(strategy)
    if g_true.p != g_guess.p:
        raise ValidationError("NodeCountMismatch", f"graphs have {g_true.p} and {g_guess.p} nodes")
    pair_filter = filter if filter is not None else _ALL_PAIRS
    treatments, y_mask, pair_total = pair_filter.resolve(g_true.p)
    workers = _worker_count(threads)
    if g_true.p < 2 or pair_total == 0:
        return DistanceResult(0, pair_total)

    true_args = (*g_true.csr(), g_true.has_undirected)
    guess_args = (*g_guess.csr(), g_guess.has_undirected)
    if strategy is Strategy.OSET:
        def run(chunk: np.ndarray) -> int:
            return int(k.aid_oset_kernel(*true_args, *guess_args, chunk, y_mask))
    else:
        code = _STRATEGY_CODE[strategy]

        def run(chunk: np.ndarray) -> int:
            return int(k.aid_local_kernel(code, *true_args, *guess_args, chunk, y_mask))

    chunks = [c for c in np.array_split(treatments, workers) if c.size]
    if len(chunks) <= 1:
        count = run(treatments)
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            count = sum(pool.map(run, chunks))
    return DistanceResult(count, pair_total)


def shd(g_a: Graph, g_b: Graph) -> DistanceResult:
    """Structural Hamming distance: node pairs whose edge differs in
    presence, orientation, or type; one count per unordered pair."""
    if g_a.p != g_b.p:
        raise ValidationError("NodeCountMismatch", f"graphs have {g_a.p} and {g_b.p} nodes")
    p = g_a.p

    def edge_codes(g: Graph) -> dict[int, int]:
        codes = {}
        for i, j in g.directed_edges():
            lo, hi = (i, j) if i < j else (j, i)
            codes[lo * p + hi] = 1 if i < j else 2
        for i, j in g.undirected_edges():
            codes[i * p + j] = 3
        return codes

    ca, cb = edge_codes(g_a), edge_codes(g_b)
    count = sum(1 for key, code in ca.items() if cb.get(key) != code)
    count += sum(1 for key in cb if key not in ca)
    return DistanceResult(count, p * (p - 1) // 2)


def order_aid(g_true: Graph, order_guess: PartialOrder, threads: int | None = None) -> DistanceResult:
    """Distance from a true DAG to a guessed causal order: the ancestor
    distance to the transitively closed DAG of the order."""
    if g_true.kind is not GraphKind.DAG:
        raise ValidationError("KindMismatch", "order distance requires a DAG as the true graph")
    if g_true.p != order_guess.p:
        raise ValidationError("NodeCountMismatch", f"graph has {g_true.p} nodes, order has {order_guess.p}")
    return aid(g_true, order_to_dag(order_guess), Strategy.ANCESTOR, threads=threads)
