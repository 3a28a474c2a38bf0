"""Reachability primitives against hand-derived cases and the oracle."""

import numpy as np
import pytest

from gaid import (
    Graph,
    GraphKind,
    ancestors,
    d_connected,
    descendants,
    non_amenable,
    possible_descendants,
    proper_ancestors,
    verify_adjustment,
)
from gaid._kernels import (
    ST_NONCAUSAL,
    ST_PD_TO_BLOCKED,
    ST_PD_TO_OPEN,
    ST_PD_UN_BLOCKED,
    ST_PD_UN_OPEN,
    _next_status,
)
from gaid.oracle import naive_amenable, naive_d_separated, naive_valid_adjustment
from helpers import (
    backdoor_triple,
    chain_dag,
    full_dag,
    random_cpdag,
    random_dag,
    reference_cpdag,
    undirected_path_cpdag,
)


# -- ancestral sets ----------------------------------------------------------


def test_descendants_chain():
    g = chain_dag(3)
    assert descendants(g, [0]) == {0, 1, 2}
    assert descendants(g, [2]) == {2}


def test_descendants_reference_cpdag_follow_directed_edges_only():
    assert descendants(reference_cpdag(), [3]) == {3, 1, 2}


def test_ancestors():
    g = chain_dag(3)
    assert ancestors(g, [2]) == {0, 1, 2}
    assert ancestors(Graph.from_edges(3, kind=GraphKind.DAG), [1]) == {1}
    assert ancestors(full_dag(4), [2]) == {0, 1, 2}


def test_possible_descendants():
    path = undirected_path_cpdag([0, 1, 2])
    assert possible_descendants(path, [0]) == {0, 1, 2}
    collider = Graph.from_edges(3, [(0, 1), (2, 1)], kind=GraphKind.DAG)
    assert possible_descendants(collider, [0]) == {0, 1}
    assert possible_descendants(reference_cpdag(), [1]) == {1, 2}


def test_possible_descendants_contains_descendants():
    rng = np.random.default_rng(5)
    for _ in range(50):
        g = random_cpdag(rng)
        t = [int(rng.integers(g.p))]
        de = set(descendants(g, t))
        pde = set(possible_descendants(g, t))
        assert de <= pde
    for _ in range(25):
        g = random_dag(rng)
        t = [int(rng.integers(g.p))]
        assert descendants(g, t) == possible_descendants(g, t)


def test_proper_ancestors():
    g = chain_dag(3)
    assert proper_ancestors(g, 2, [1]) == {2}
    assert proper_ancestors(g, 2) == {0, 1, 2}
    g2 = Graph.from_edges(3, [(0, 2), (0, 1), (1, 2)], kind=GraphKind.DAG)
    assert proper_ancestors(g2, 2, [1]) == {0, 2}


def test_reach_input_checks():
    g = chain_dag(3)
    with pytest.raises(ValueError):
        descendants(g, [])
    with pytest.raises(ValueError):
        descendants(g, [7])
    with pytest.raises(ValueError):
        proper_ancestors(g, 2, [2])


# -- amenability -------------------------------------------------------------


def test_non_amenable_empty_for_dags():
    rng = np.random.default_rng(1)
    for _ in range(20):
        g = random_dag(rng)
        assert len(non_amenable(g, [int(rng.integers(g.p))])) == 0


def test_non_amenable_reference_cpdag():
    assert non_amenable(reference_cpdag(), [1]) == {2}


def test_non_amenable_walks_through_undirected_chain():
    assert non_amenable(undirected_path_cpdag([0, 1, 2]), [0]) == {1, 2}


# -- adjustment verification --------------------------------------------------


def test_verify_adjustment_single_edge():
    verdict = verify_adjustment(Graph.from_edges(2, [(0, 1)], kind=GraphKind.DAG), [0], [])
    assert len(verdict.nam) == 0 and len(verdict.nva) == 0


def test_verify_adjustment_full_dag_needs_all_predecessors():
    # In the complete DAG over 0..3, only {0, 1} validly adjusts for t=2.
    verdict = verify_adjustment(full_dag(4), [2], [1])
    assert 3 in verdict.nva
    verdict = verify_adjustment(full_dag(4), [2], [0, 1])
    assert 3 not in verdict.nva


def test_verify_adjustment_backdoor():
    g = backdoor_triple()
    verdict = verify_adjustment(g, [1], [0])
    assert verdict.nva == {0} and len(verdict.nam) == 0
    verdict = verify_adjustment(g, [1], [])
    assert 2 in verdict.nva


def test_verify_adjustment_rejects_overlap():
    with pytest.raises(ValueError):
        verify_adjustment(chain_dag(3), [0], [0])


def test_verify_adjustment_verdict_invariants_random():
    rng = np.random.default_rng(9)
    for _ in range(80):
        g = random_cpdag(rng) if rng.random() < 0.5 else random_dag(rng)
        t = int(rng.integers(g.p))
        z = [v for v in range(g.p) if v != t and rng.random() < 0.3]
        verdict = verify_adjustment(g, [t], z)
        nam, nva = set(verdict.nam), set(verdict.nva)
        assert nam <= nva
        assert set(z) <= nva
        assert t not in nam and t not in nva
        if g.kind is GraphKind.DAG:
            assert not nam
        assert verdict.expansions <= 24 * (g.p + g.m)


def test_status_machine_never_reopens_blocked_walks():
    blocked = {ST_PD_TO_BLOCKED, ST_PD_UN_BLOCKED}
    open_ = {ST_PD_TO_OPEN, ST_PD_UN_OPEN}
    for status in range(5):
        for move in range(3):
            for flag in (False, True):
                nxt = _next_status(status, move, flag)
                if status in blocked:
                    assert nxt in (status, -1)
                if status == ST_NONCAUSAL:
                    assert nxt in (ST_NONCAUSAL, -1)
                if nxt in open_:
                    assert nxt == status  # open is only ever carried forward


# -- d-connection --------------------------------------------------------------


def test_d_connected_collider():
    g = Graph.from_edges(3, [(0, 1), (2, 1)], kind=GraphKind.DAG)
    assert d_connected(g, [0]) == {1}
    assert d_connected(g, [0], [1]) == {1, 2}


def test_d_connected_undirected_path_blocked_by_middle():
    assert d_connected(undirected_path_cpdag([0, 1, 2]), [0], [1]) == {1}


def test_d_connected_rejects_overlap():
    with pytest.raises(ValueError):
        d_connected(chain_dag(3), [0], [0])


# -- oracle agreement -----------------------------------------------------------


def _random_z(rng, p, t):
    return {v for v in range(p) if v != t and rng.random() < 0.35}


@pytest.mark.slow
def test_primitives_match_oracle_on_random_graphs():
    rng = np.random.default_rng(77)
    for i in range(120):
        g = random_cpdag(rng) if i % 3 == 0 else random_dag(rng)
        for _ in range(2):
            t = int(rng.integers(g.p))
            for z in ({int(w) for w in g.parents(t)}, _random_z(rng, g.p, t)):
                verdict = verify_adjustment(g, [t], z)
                for y in range(g.p):
                    if y == t:
                        continue
                    assert (y in verdict.nam) == (not naive_amenable(g, t, y))
                    expected_nva = y in z or not naive_valid_adjustment(g, t, y, z)
                    assert (y in verdict.nva) == expected_nva, (g, t, y, sorted(z))
                reached = d_connected(g, [t], z)
                for y in range(g.p):
                    if y == t or y in z:
                        continue
                    assert (y in reached) == (not naive_d_separated(g, t, y, z)), (g, t, y, sorted(z))
                nam = non_amenable(g, [t])
                for y in range(g.p):
                    if y != t:
                        assert (y in nam) == (not naive_amenable(g, t, y))
