"""Random generation determinism, perturbations, and harness reports."""

import json

import numpy as np
import pytest

from gaid import Strategy, aid, shd
from gaid.simbench import (
    EmptyGraphError,
    GenConfig,
    gen_random_dag,
    remove_random_edge,
    run_comparison,
    run_complexity_bench,
)
from helpers import chain_dag


def test_generator_deterministic():
    cfg = GenConfig(12, "dense", seed=99)
    assert gen_random_dag(cfg) == gen_random_dag(cfg)


def test_generator_single_node():
    g = gen_random_dag(GenConfig(1, "sparse", seed=0))
    assert g.p == 1 and g.m == 0


def test_generator_seed_changes_graph():
    assert gen_random_dag(GenConfig(10, "dense", 0)) != gen_random_dag(GenConfig(10, "dense", 1))


def test_sparse_probability_clamped():
    assert GenConfig(10, "sparse").edge_probability() == 1.0
    assert GenConfig(41, "sparse").edge_probability() == pytest.approx(0.5)
    with pytest.raises(ValueError):
        GenConfig(5, 1.5).edge_probability()
    with pytest.raises(ValueError):
        GenConfig(5, "bogus").edge_probability()


def test_sparse_mean_edge_count_near_ten_p():
    ms = [gen_random_dag(GenConfig(41, "sparse", s)).m for s in range(200)]
    assert abs(np.mean(ms) - 410) <= 0.05 * 410


@pytest.mark.slow
def test_sparse_mean_degree_statistic_for_larger_graphs():
    ms = [gen_random_dag(GenConfig(101, "sparse", s)).m for s in range(200)]
    mean_degree = 2 * np.mean(ms) / 101
    assert abs(mean_degree - 20) <= 0.05 * 20


def test_remove_random_edge_properties():
    g = gen_random_dag(GenConfig(12, "dense", 3))
    out = remove_random_edge(g, seed=5)
    assert out.m == g.m - 1
    assert shd(g, out).count == 1
    assert remove_random_edge(g, seed=5) == out  # same seed, same edge
    single = chain_dag(2)
    assert remove_random_edge(single, 0).m == 0
    with pytest.raises(EmptyGraphError):
        remove_random_edge(remove_random_edge(single, 0), 0)


def test_edge_removal_reverse_direction_is_super_dag_zero():
    for i in range(25):
        g = gen_random_dag(GenConfig(12, "dense", 100 + i))
        if g.m == 0:
            continue
        guess = remove_random_edge(g, i)
        for strategy in Strategy:
            assert aid(guess, g, strategy).count == 0


def test_complexity_bench_single_size_has_unit_projections():
    report = run_complexity_bench([8], "dense", Strategy.PARENT, reps=2, seed=1)
    (row,) = report.rows
    assert row["rel_proj_p2"] == row["rel_proj_p3"] == row["rel_proj_p4"] == 1.0
    assert report.config["prng"] == "pcg64"


def test_complexity_bench_rejects_unsorted_sizes():
    with pytest.raises(ValueError):
        run_complexity_bench([16, 8], "sparse", Strategy.PARENT)


def test_bench_report_serialization_schema():
    report = run_complexity_bench([4, 8], "dense", Strategy.ANCESTOR, reps=1, seed=2)
    csv_text = report.to_csv()
    header, *rows = csv_text.strip().splitlines()
    assert header == "p,m_mean,seconds_mean,rel_proj_p2,rel_proj_p3,rel_proj_p4"
    assert len(rows) == 2
    payload = json.loads(json.dumps(report.to_json()))
    assert set(payload) == {"config", "rows"}
    assert payload["config"]["strategy"] == "ancestor"


def test_comparison_edge_removal_shd_identically_one():
    report = run_comparison(10, "dense", "edge-removal", n_pairs=20, seed=3)
    assert all(row["shd"] == 1 for row in report.rows)


def test_comparison_deterministic_single_row():
    a = run_comparison(8, "dense", "independent", n_pairs=1, seed=4)
    b = run_comparison(8, "dense", "independent", n_pairs=1, seed=4)
    assert a.rows == b.rows


def test_comparison_report_schema():
    report = run_comparison(6, "dense", "independent", n_pairs=5, seed=6)
    lines = report.to_csv().strip().splitlines()
    assert lines[0] == "pair,parent,ancestor,oset,shd"
    assert len(lines) == 6
    payload = report.to_json()
    assert set(payload) == {"config", "rows", "correlations", "means"}
    assert len(payload["correlations"]) == 4
    assert payload["config"]["pair_set"] == "t<y"


def test_comparison_rejects_bad_mode():
    with pytest.raises(ValueError):
        run_comparison(6, "dense", "both", n_pairs=1)
