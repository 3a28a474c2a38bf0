"""Identification strategies: per-treatment symbolic claims.

Each strategy maps a treatment node to a partition of the remaining nodes:
``a`` (effect not identifiable), ``b`` (effect is zero) and ``c`` (targets
claimed identifiable by covariate adjustment, each with its adjustment
set). Non-amenable targets always land in ``a``; inside the strategies,
parent/ancestor/descendant sets follow directed edges only.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels as k
from .graph import Graph, GraphKind, NodeSet

__all__ = [
    "Strategy",
    "ClaimKind",
    "IdentificationClaim",
    "StrategyOutput",
    "parent_strategy",
    "ancestor_strategy",
    "oset",
    "oset_strategy",
    "strategy_output",
]


class Strategy(Enum):
    PARENT = "parent"
    ANCESTOR = "ancestor"
    OSET = "oset"


class ClaimKind(Enum):
    NON_IDENTIFIABLE = "non-identifiable"
    ZERO_EFFECT = "zero-effect"
    ADJUST_BY = "adjust-by"


@dataclass(frozen=True)
class IdentificationClaim:
    """Symbolic identifying formula for one (treatment, target) pair."""

    target: int
    kind: ClaimKind
    z: NodeSet | None = None

    def __post_init__(self):
        if self.kind is ClaimKind.ADJUST_BY:
            if self.z is None:
                raise ValueError("adjust-by claim requires an adjustment set")
            if self.target in self.z:
                raise ValueError("adjustment set must not contain the target")
        elif self.z is not None:
            raise ValueError(f"{self.kind.value} claim carries no adjustment set")


@dataclass(frozen=True)
class StrategyOutput:
    """Per-treatment claims: ``a`` non-identifiable targets, ``b``
    zero-effect targets, ``c`` the remaining (target, adjustment set)
    claims. The three parts partition all nodes except the treatment."""

    treatment: int
    a: NodeSet
    b: NodeSet
    c: tuple  # of (target, NodeSet) pairs, ascending by target

    def claims(self):
        for v in self.a:
            yield IdentificationClaim(v, ClaimKind.NON_IDENTIFIABLE)
        for v in self.b:
            yield IdentificationClaim(v, ClaimKind.ZERO_EFFECT)
        for y, z in self.c:
            yield IdentificationClaim(y, ClaimKind.ADJUST_BY, z)


def _check_node(g: Graph, t: int) -> None:
    if not 0 <= t < g.p:
        raise ValueError(f"invalid treatment node {t} for a graph with p={g.p}")


def _nam_mask(g: Graph, t: int) -> np.ndarray:
    out = np.zeros(g.p, dtype=np.bool_)
    if g.kind is GraphKind.DAG or not g.has_undirected:
        return out
    t_mask = np.zeros(g.p, dtype=np.bool_)
    t_mask[t] = True
    _, _, ch_ptr, ch_idx, un_ptr, un_idx = g.csr()
    k.non_amenable(
        ch_ptr, ch_idx, un_ptr, un_idx, np.array([t], np.int32), t_mask, out, np.empty(g.p + 1, np.int64)
    )
    return out


def _reach_mask(g: Graph, t: int, relation: str) -> np.ndarray:
    out = np.zeros(g.p, dtype=np.bool_)
    pa_ptr, pa_idx, ch_ptr, ch_idx, _, _ = g.csr()
    ptr, idx = (ch_ptr, ch_idx) if relation == "ch" else (pa_ptr, pa_idx)
    k.reach(ptr, idx, np.array([t], np.int32), out, np.empty(g.p + 1, np.int64))
    return out


def parent_strategy(g: Graph, t: int) -> StrategyOutput:
    """Adjust every amenable non-parent target by the parents of t."""
    _check_node(g, t)
    nam = _nam_mask(g, t)
    z_mask = np.zeros(g.p, dtype=np.bool_)
    z_mask[g.parents(t)] = True
    b = z_mask & ~nam
    c_targets = ~nam & ~z_mask
    c_targets[t] = False
    z = NodeSet.from_mask(z_mask, copy=False)
    return StrategyOutput(
        treatment=t,
        a=NodeSet.from_mask(nam, copy=False),
        b=NodeSet.from_mask(b, copy=False),
        c=tuple((int(y), z) for y in np.flatnonzero(c_targets)),
    )


def ancestor_strategy(g: Graph, t: int) -> StrategyOutput:
    """Claim zero effect outside de(t) and adjust targets in de(t) by the
    ancestors of t; one shared adjustment set per treatment."""
    _check_node(g, t)
    nam = _nam_mask(g, t)
    de = _reach_mask(g, t, "ch")
    an = _reach_mask(g, t, "pa")
    an[t] = False
    b = ~nam & ~de
    b[t] = False
    c_targets = de & ~nam
    c_targets[t] = False
    z = NodeSet.from_mask(an, copy=False)
    return StrategyOutput(
        treatment=t,
        a=NodeSet.from_mask(nam, copy=False),
        b=NodeSet.from_mask(b, copy=False),
        c=tuple((int(y), z) for y in np.flatnonzero(c_targets)),
    )


def oset(g: Graph, t: int, y: int) -> NodeSet:
    """Optimal adjustment set for (t, y): parents of the causal nodes minus
    the descendants of t. Callers guarantee amenability and y in de(t)."""
    _check_node(g, t)
    _check_node(g, y)
    if y == t:
        raise ValueError("treatment and target must differ")
    de = _reach_mask(g, t, "ch")
    return NodeSet.from_mask(_oset_mask(g, t, y, de), copy=False)


def _oset_mask(g: Graph, t: int, y: int, de: np.ndarray) -> np.ndarray:
    pa_ptr, pa_idx, *_ = g.csr()
    avoid = np.zeros(g.p, dtype=np.bool_)
    avoid[t] = True
    prop_an = np.zeros(g.p, dtype=np.bool_)
    k.reach_avoiding(pa_ptr, pa_idx, y, avoid, prop_an, np.empty(g.p + 1, np.int64))
    z = np.zeros(g.p, dtype=np.bool_)
    k.parents_of_set(pa_ptr, pa_idx, de & prop_an, z)
    return z & ~de


def oset_strategy(g: Graph, t: int) -> StrategyOutput:
    """Claim zero effect outside de(t); adjust each target in de(t) by its
    own optimal adjustment set."""
    _check_node(g, t)
    nam = _nam_mask(g, t)
    de = _reach_mask(g, t, "ch")
    b = ~nam & ~de
    b[t] = False
    c_targets = de & ~nam
    c_targets[t] = False
    if not c_targets.any():
        # No amenable causal targets: skip the per-target passes entirely.
        c = ()
    else:
        c = tuple(
            (int(y), NodeSet.from_mask(_oset_mask(g, t, int(y), de), copy=False))
            for y in np.flatnonzero(c_targets)
        )
    return StrategyOutput(
        treatment=t,
        a=NodeSet.from_mask(nam, copy=False),
        b=NodeSet.from_mask(b, copy=False),
        c=c,
    )


def strategy_output(g: Graph, t: int, strategy: Strategy) -> StrategyOutput:
    fn = {
        Strategy.PARENT: parent_strategy,
        Strategy.ANCESTOR: ancestor_strategy,
        Strategy.OSET: oset_strategy,
    }[Strategy(strategy)]
    return fn(g, t)
