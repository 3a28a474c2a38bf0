import pytest

from gaid import (
    Graph,
    GraphKind,
    Strategy,
    aid,
    d_connected,
    descendants,
    non_amenable,
    order_aid,
    possible_descendants,
    proper_ancestors,
    shd,
    verify_adjustment,
)
from gaid.graph import PartialOrder


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger JIT compilation of every kernel once, so timed acceptance
    criteria measure the algorithms rather than compilation."""
    dag = Graph.from_edges(3, [(0, 1), (1, 2)], kind=GraphKind.DAG)
    cpdag = Graph.from_edges(3, directed=[(0, 1)], undirected=[(1, 2)], kind=GraphKind.CPDAG)
    for g in (dag, cpdag):
        descendants(g, [0])
        possible_descendants(g, [0])
        proper_ancestors(g, 2, [0])
        non_amenable(g, [0])
        verify_adjustment(g, [0], [])
        d_connected(g, [0], [])
        for strategy in Strategy:
            aid(g, g, strategy)
    shd(dag, cpdag)
    order_aid(dag, PartialOrder.total([0, 1, 2]))
