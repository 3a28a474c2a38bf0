"""Random graph generation and the two experiment harnesses.

Covers seeded random DAG sampling (uniformly random total order plus i.i.d.
order-compatible edges), single-edge perturbations, the runtime-complexity
projection study and the distance-comparison study. Reports serialize to
CSV (header row) and a JSON mirror; the PRNG algorithm is recorded in every
report for reproducibility.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .distances import PairFilter, aid, shd
from .graph import Graph, GraphKind
from .strategies import Strategy

__all__ = [
    "GenConfig",
    "EmptyGraphError",
    "BenchReport",
    "ComparisonReport",
    "gen_random_dag",
    "remove_random_edge",
    "run_complexity_bench",
    "run_comparison",
]

_PRNG_NAME = "pcg64"
_DISTANCE_COLUMNS = ("parent", "ancestor", "oset", "shd")


class EmptyGraphError(ValueError):
    """Raised when an edge perturbation is asked of an edgeless graph."""


@dataclass(frozen=True)
class GenConfig:
    """Random-DAG sampling parameters; identical configs give identical
    graphs. ``density`` is "sparse" (edge probability 20/(p-1), clamped to
    1), "dense" (0.3) or an explicit probability."""

    p: int
    density: str | float = "sparse"
    seed: int = 0

    def edge_probability(self) -> float:
        if isinstance(self.density, str):
            name = self.density.lower()
            if name == "sparse":
                return 1.0 if self.p <= 21 else 20.0 / (self.p - 1)
            if name == "dense":
                return 0.3
            raise ValueError(f"unknown density {self.density!r}; use 'sparse', 'dense' or a probability")
        prob = float(self.density)
        if not 0.0 <= prob <= 1.0:
            raise ValueError(f"edge probability must be in [0, 1], got {prob}")
        return prob


def _child_seed(*entropy) -> int:
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def gen_random_dag(cfg: GenConfig) -> Graph:
    """DAG over a uniformly random total order with i.i.d. order-compatible
    edges at the configured probability."""
    if cfg.p < 1:
        raise ValueError("p must be >= 1")
    rng = np.random.default_rng(cfg.seed)
    order = rng.permutation(cfg.p)
    prob = cfg.edge_probability()
    edges = []
    for i in range(cfg.p - 1):
        hits = np.flatnonzero(rng.random(cfg.p - 1 - i) < prob)
        src = int(order[i])
        edges.extend((src, int(order[i + 1 + h])) for h in hits)
    return Graph.from_edges(cfg.p, edges, kind=GraphKind.DAG)


def remove_random_edge(g: Graph, seed: int = 0) -> Graph:
    """The same DAG minus one uniformly chosen directed edge."""
    if g.kind is not GraphKind.DAG:
        raise ValueError("edge removal is defined for DAGs")
    if g.m < 1:
        raise EmptyGraphError("cannot remove an edge from an edgeless graph")
    rng = np.random.default_rng(seed)
    k = int(rng.integers(g.m))
    edges = list(g.directed_edges())
    del edges[k]
    return Graph.from_edges(g.p, edges, kind=GraphKind.DAG)


def _pearson(x: np.ndarray, y: np.ndarray) -> float | None:
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float((xc * xc).sum()) * float((yc * yc).sum()))
    if denom == 0.0:
        return None
    return float((xc * yc).sum() / denom)


@dataclass
class BenchReport:
    """Per-size wall times plus runtime projections under candidate
    complexities, relative to the observed time (1 at the smallest size)."""

    config: dict
    rows: list = field(default_factory=list)

    def to_csv(self) -> str:
        header = "p,m_mean,seconds_mean,rel_proj_p2,rel_proj_p3,rel_proj_p4"
        lines = [header]
        for r in self.rows:
            lines.append(
                f"{r['p']},{r['m_mean']:.1f},{r['seconds_mean']:.6g},"
                f"{r['rel_proj_p2']:.6g},{r['rel_proj_p3']:.6g},{r['rel_proj_p4']:.6g}"
            )
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"config": self.config, "rows": self.rows}


@dataclass
class ComparisonReport:
    """Per-pair distance table plus Pearson correlations and means."""

    config: dict
    rows: list = field(default_factory=list)
    correlations: list = field(default_factory=list)
    means: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = ["pair," + ",".join(_DISTANCE_COLUMNS)]
        for i, row in enumerate(self.rows):
            lines.append(f"{i}," + ",".join(str(row[c]) for c in _DISTANCE_COLUMNS))
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "rows": self.rows,
            "correlations": self.correlations,
            "means": self.means,
        }


def run_complexity_bench(
    sizes,
    density="sparse",
    strategy=Strategy.ANCESTOR,
    reps: int = 3,
    seed: int = 0,
    workers: int = 1,
) -> BenchReport:
    """Measure the distance on random DAG pairs of increasing size and
    project runtimes under p^2, p^3 and p^4 from the smallest size.

    Per size, one warm-up run is discarded and the mean wall time over
    ``reps`` fresh pairs is recorded.
    """
    sizes = [int(p) for p in sizes]
    if sizes != sorted(sizes):
        raise ValueError("sizes must be ascending")
    strategy = Strategy(strategy)
    rows = []
    for p in sizes:
        times = []
        ms = []
        for rep in range(reps + 1):
            g_true = gen_random_dag(GenConfig(p, density, _child_seed(seed, p, rep, 0)))
            g_guess = gen_random_dag(GenConfig(p, density, _child_seed(seed, p, rep, 1)))
            t0 = time.perf_counter()
            aid(g_true, g_guess, strategy, threads=workers)
            elapsed = time.perf_counter() - t0
            if rep == 0:
                continue  # warm-up
            times.append(elapsed)
            ms.append((g_true.m + g_guess.m) / 2)
        rows.append({"p": p, "m_mean": float(np.mean(ms)), "seconds_mean": float(np.mean(times))})
    base_p, base_t = rows[0]["p"], rows[0]["seconds_mean"]
    for row in rows:
        for exp in (2, 3, 4):
            projected = (row["p"] / base_p) ** exp * base_t
            row[f"rel_proj_p{exp}"] = projected / row["seconds_mean"]
    config = {
        "sizes": sizes,
        "density": density,
        "strategy": strategy.value,
        "reps": reps,
        "seed": seed,
        "workers": workers,
        "prng": _PRNG_NAME,
        "numpy": np.__version__,
    }
    return BenchReport(config=config, rows=rows)


def _half_pair_count(g_true: Graph, g_guess: Graph, strategy: Strategy, workers: int) -> int:
    """Mistake count over the canonical half pair set {(t, y) : t < y}.

    The comparison study evaluates every node pair once (this reproduces
    the published study means); the library default elsewhere remains the
    full ordered pair set.
    """
    p = g_true.p

    def one(t: int) -> int:
        pair_filter = PairFilter(treatments=(t,), targets=tuple(range(t + 1, p)))
        return aid(g_true, g_guess, strategy, filter=pair_filter, threads=1).count

    if workers <= 1:
        return sum(one(t) for t in range(p - 1))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(one, range(p - 1)))


def run_comparison(
    p: int,
    density="dense",
    mode: str = "edge-removal",
    n_pairs: int = 300,
    seed: int = 0,
    workers: int = 1,
) -> ComparisonReport:
    """Distance table over random graph pairs, one evaluation per node pair.

    ``edge-removal`` compares each random DAG against itself minus one
    random edge; ``independent`` draws both graphs independently.
    """
    if p < 2:
        raise ValueError("p must be >= 2")
    if mode not in ("edge-removal", "independent"):
        raise ValueError(f"unknown mode {mode!r}; use 'edge-removal' or 'independent'")
    rows = []
    for i in range(n_pairs):
        g_true = gen_random_dag(GenConfig(p, density, _child_seed(seed, i, 0)))
        if mode == "edge-removal":
            attempt = 0
            while g_true.m < 1:
                attempt += 1
                g_true = gen_random_dag(GenConfig(p, density, _child_seed(seed, i, 0, attempt)))
            g_guess = remove_random_edge(g_true, _child_seed(seed, i, 1))
        else:
            g_guess = gen_random_dag(GenConfig(p, density, _child_seed(seed, i, 1)))
        rows.append(
            {
                "parent": _half_pair_count(g_true, g_guess, Strategy.PARENT, workers),
                "ancestor": _half_pair_count(g_true, g_guess, Strategy.ANCESTOR, workers),
                "oset": _half_pair_count(g_true, g_guess, Strategy.OSET, workers),
                "shd": shd(g_true, g_guess).count,
            }
        )
    columns = {c: np.array([row[c] for row in rows], dtype=np.float64) for c in _DISTANCE_COLUMNS}
    correlations = [
        [_pearson(columns[a], columns[b]) for b in _DISTANCE_COLUMNS] for a in _DISTANCE_COLUMNS
    ]
    means = {c: float(columns[c].mean()) for c in _DISTANCE_COLUMNS}
    config = {
        "p": p,
        "density": density,
        "mode": mode,
        "n_pairs": n_pairs,
        "seed": seed,
        "workers": workers,
        "columns": list(_DISTANCE_COLUMNS),
        "pair_set": "t<y",
        "prng": _PRNG_NAME,
        "numpy": np.__version__,
    }
    return ComparisonReport(config=config, rows=rows, correlations=correlations, means=means)
