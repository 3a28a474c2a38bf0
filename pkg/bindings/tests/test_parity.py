"""Bit-exact parity between the matrix front end and the CLI."""

import contextlib
import io
import json
import subprocess
import sys

import numpy as np
import pytest

import gaid_matrix as gm
from gaid import GraphKind, cpdag_of_dag, serialize_graph
from gaid.cli import main as cli_main
from gaid.simbench import GenConfig, gen_random_dag

DISTANCES = ("parent", "ancestor", "oset", "shd")


def _corpus():
    """50 seeded graph pairs: random DAG and CPDAG pairs plus the
    complete-vs-chain reference pair."""
    rng = np.random.default_rng(2024)
    pairs = []
    full5 = np.zeros((5, 5), dtype=np.int64)
    for i in range(5):
        full5[i, i + 1 :] = 1
    chain5 = np.zeros((5, 5), dtype=np.int64)
    for i in range(4):
        chain5[i, i + 1] = 1
    pairs.append((full5, chain5))
    while len(pairs) < 50:
        p = int(rng.integers(3, 13))
        prob = float(rng.uniform(0.15, 0.7))
        a = gen_random_dag(GenConfig(p, prob, int(rng.integers(1 << 62))))
        b = gen_random_dag(GenConfig(p, prob, int(rng.integers(1 << 62))))
        if len(pairs) % 3 == 0:
            a, b = cpdag_of_dag(a), cpdag_of_dag(b)
        pairs.append((a.to_amat().astype(np.int64), b.to_amat().astype(np.int64)))
    return pairs


def _matrix_to_file(tmp_path, name, matrix):
    path = tmp_path / name
    rows = "\n".join(",".join(str(int(c)) for c in row) for row in matrix)
    path.write_text(rows + "\n")
    return str(path)


def _cli_json(argv) -> dict:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main(argv)
    assert code == 0, buf.getvalue()
    return json.loads(buf.getvalue())


def test_cli_parity_on_50_pair_corpus(tmp_path):
    binding_fn = {
        "parent": gm.parent_aid,
        "ancestor": gm.ancestor_aid,
        "oset": gm.oset_aid,
        "shd": gm.shd,
    }
    rng = np.random.default_rng(99)
    for idx, (true_m, guess_m) in enumerate(_corpus()):
        true_f = _matrix_to_file(tmp_path, f"t{idx}.csv", true_m)
        guess_f = _matrix_to_file(tmp_path, f"g{idx}.csv", guess_m)
        for name in DISTANCES:
            got = binding_fn[name](true_m, guess_m)
            want = _cli_json(["dist", "--distance", name, "--true", true_f, "--guess", guess_f, "--json"])
            assert got["count"] == want["count"], (idx, name)
            assert got["normalized"] == want["normalized"], (idx, name)
        if not (true_m == 2).any():  # order distance requires a DAG truth
            p = true_m.shape[0]
            order = [int(v) for v in rng.permutation(p)]
            got = gm.order_aid(true_m, order)
            order_f = tmp_path / f"o{idx}.txt"
            order_f.write_text("".join(f"{a} {b}\n" for a, b in zip(order, order[1:])))
            want = _cli_json(["order", "--true", true_f, "--order", str(order_f), "--json"])
            assert got["count"] == want["count"], idx
            assert got["normalized"] == want["normalized"], idx


def test_reference_count_through_subprocess_cli(tmp_path):
    full5 = np.triu(np.ones((5, 5), dtype=int), 1)
    chain5 = np.zeros((5, 5), dtype=int)
    for i in range(4):
        chain5[i, i + 1] = 1
    assert gm.parent_aid(full5, chain5) == {"count": 9, "normalized": 0.45}
    true_f = _matrix_to_file(tmp_path, "full5.csv", full5)
    guess_f = _matrix_to_file(tmp_path, "chain5.csv", chain5)
    proc = subprocess.run(
        [sys.executable, "-m", "gaid.cli", "dist", "--distance", "parent", "--true", true_f, "--guess", guess_f],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "count=9 normalized=0.45"


def test_inputs_are_never_mutated():
    rng = np.random.default_rng(5)
    g = gen_random_dag(GenConfig(8, 0.4, 3)).to_amat().astype(np.int64)
    h = cpdag_of_dag(gen_random_dag(GenConfig(8, 0.4, 4))).to_amat().astype(np.int64)
    g_copy, h_copy = g.copy(), h.copy()
    for fn in (gm.parent_aid, gm.ancestor_aid, gm.oset_aid, gm.shd):
        fn(g, h)
    gm.order_aid(g, list(range(8)))
    assert np.array_equal(g, g_copy) and np.array_equal(h, h_copy)


def test_read_only_arrays_accepted():
    m = np.triu(np.ones((4, 4), dtype=int), 1)
    m.setflags(write=False)
    assert gm.shd(m, m)["count"] == 0


def test_sparse_triplets_match_dense():
    rng = np.random.default_rng(17)
    for _ in range(10):
        g = gen_random_dag(GenConfig(7, 0.4, int(rng.integers(1 << 30))))
        h = cpdag_of_dag(gen_random_dag(GenConfig(7, 0.4, int(rng.integers(1 << 30)))))
        dense_t, dense_g = g.to_amat(), h.to_amat()
        trip_t = (7, [(i, j, int(dense_t[i, j])) for i in range(7) for j in range(7) if dense_t[i, j]])
        trip_g = (7, [(i, j, int(dense_g[i, j])) for i in range(7) for j in range(7) if dense_g[i, j]])
        for fn in (gm.parent_aid, gm.ancestor_aid, gm.oset_aid, gm.shd):
            assert fn(trip_t, trip_g) == fn(dense_t, dense_g)


def test_sparse_triplet_validation():
    with pytest.raises(ValueError, match="inconsistent"):
        gm.shd((2, [(0, 1, 2)]), (2, []))  # lone 2-cell without its mirror
    with pytest.raises(ValueError, match="illegal cell"):
        gm.shd((2, [(0, 1, 7)]), (2, []))
    with pytest.raises(ValueError, match="out of range"):
        gm.shd((2, [(0, 5, 1)]), (2, []))


def test_dimension_mismatch_raises():
    a = np.zeros((3, 3), dtype=int)
    b = np.zeros((4, 4), dtype=int)
    with pytest.raises(ValueError):
        gm.ancestor_aid(a, b)
    with pytest.raises(ValueError):
        gm.shd(a, np.zeros((3, 4), dtype=int))


def test_order_aid_accepts_precedence_pairs():
    chain = np.zeros((3, 3), dtype=int)
    chain[0, 1] = chain[1, 2] = 1
    by_perm = gm.order_aid(chain, [2, 1, 0])
    by_pairs = gm.order_aid(chain, [(2, 1), (1, 0), (2, 0)])
    assert by_perm == by_pairs == {"count": 6, "normalized": 1.0}


def test_filters_and_threads_options():
    full5 = np.triu(np.ones((5, 5), dtype=int), 1)
    chain5 = np.zeros((5, 5), dtype=int)
    for i in range(4):
        chain5[i, i + 1] = 1
    full = gm.parent_aid(full5, chain5, threads=2)
    assert full["count"] == 9
    restricted = gm.parent_aid(full5, chain5, treatments=(2,), targets=(3, 4))
    assert 0 <= restricted["count"] <= 2


def test_version_string():
    assert isinstance(gm.__version__, str) and gm.__version__
