"""Graph adjustment identification distances between DAGs and CPDAGs.

Counts, for a chosen identification strategy (parent, ancestor, or optimal
adjustment set), how many treatment-target claims derived from a guessed
graph are wrong in the true graph; also provides the structural Hamming
distance, a DAG-to-causal-order distance, a brute-force oracle, and a
benchmark harness.
"""

__version__ = "0.1.0"

from .distances import DistanceResult, PairFilter, aid, order_aid, shd
from .graph import (
    Graph,
    GraphFormat,
    GraphKind,
    NodeSet,
    ParseError,
    PartialOrder,
    ValidationError,
    cpdag_of_dag,
    order_to_dag,
    parse_graph,
    parse_order,
    serialize_graph,
    validate_cpdag,
    validate_dag,
)
from .reach import (
    AdjustmentVerdict,
    ancestors,
    d_connected,
    descendants,
    non_amenable,
    possible_descendants,
    proper_ancestors,
    verify_adjustment,
)
from .simbench import GenConfig, gen_random_dag, remove_random_edge, run_comparison, run_complexity_bench
from .strategies import (
    ClaimKind,
    IdentificationClaim,
    Strategy,
    StrategyOutput,
    ancestor_strategy,
    oset,
    oset_strategy,
    parent_strategy,
)

__all__ = [
    "__version__",
    "Graph",
    "GraphKind",
    "GraphFormat",
    "NodeSet",
    "PartialOrder",
    "ParseError",
    "ValidationError",
    "parse_graph",
    "parse_order",
    "serialize_graph",
    "validate_dag",
    "validate_cpdag",
    "cpdag_of_dag",
    "order_to_dag",
    "descendants",
    "ancestors",
    "possible_descendants",
    "proper_ancestors",
    "non_amenable",
    "verify_adjustment",
    "d_connected",
    "AdjustmentVerdict",
    "Strategy",
    "ClaimKind",
    "IdentificationClaim",
    "StrategyOutput",
    "parent_strategy",
    "ancestor_strategy",
    "oset",
    "oset_strategy",
    "DistanceResult",
    "PairFilter",
    "aid",
    "shd",
    "order_aid",
    "GenConfig",
    "gen_random_dag",
    "remove_random_edge",
    "run_complexity_bench",
    "run_comparison",
]
