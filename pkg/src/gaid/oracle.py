"""Brute-force reference implementations by exhaustive path enumeration.

Ground truth for tests: every predicate is decided by enumerating simple
paths and checking the defining criterion on each complete path, with
non-local checks (definite status, open colliders) done directly on the
path. Exponential time; hard size guards fail loudly on large inputs.
"""

from typing import Iterable

from .graph import Graph, GraphKind
from .strategies import Strategy

__all__ = [
    "naive_d_separated",
    "naive_amenable",
    "naive_valid_adjustment",
    "naive_aid",
]

_MAX_DAG = 12
_MAX_CPDAG = 8


def _guard(g: Graph) -> None:
    limit = _MAX_CPDAG if g.kind is GraphKind.CPDAG else _MAX_DAG
    if g.p > limit:
        raise ValueError(f"oracle size guard: p={g.p} exceeds {limit} for {g.kind.value} inputs")


def _adjacency(g: Graph) -> list[list[tuple[int, str]]]:
    """Per node: (neighbor, step descriptor) with '>' pointing away from the
    node, '<' pointing into it, '-' undirected."""
    adj: list[list[tuple[int, str]]] = [[] for _ in range(g.p)]
    for i, j in g.directed_edges():
        adj[i].append((j, ">"))
        adj[j].append((i, "<"))
    for i, j in g.undirected_edges():
        adj[i].append((j, "-"))
        adj[j].append((i, "-"))
    return adj


def _paths(g: Graph, t: int, y: int):
    """All simple paths from t to y as (nodes, dirs) tuples."""
    adj = _adjacency(g)
    on_path = [False] * g.p
    on_path[t] = True
    nodes = [t]
    dirs: list[str] = []

    def walk(v):
        if v == y:
            yield tuple(nodes), tuple(dirs)
            return
        for w, d in adj[v]:
            if not on_path[w]:
                on_path[w] = True
                nodes.append(w)
                dirs.append(d)
                yield from walk(w)
                nodes.pop()
                dirs.pop()
                on_path[w] = False

    yield from walk(t)


def _adjacent(g: Graph, a: int, b: int) -> bool:
    return b in set(g.children(a)) or b in set(g.parents(a)) or b in set(g.undirected(a))


def _is_definite_status(g: Graph, nodes, dirs) -> bool:
    for i in range(1, len(nodes) - 1):
        d_in, d_out = dirs[i - 1], dirs[i]
        if d_in == ">" and d_out == "<":
            continue  # collider
        if d_in == "<" or d_out == ">":
            continue  # definite non-collider via an outgoing edge
        if d_in == "-" and d_out == "-" and not _adjacent(g, nodes[i - 1], nodes[i + 1]):
            continue  # definite non-collider on a shielded-free undirected segment
        return False
    return True


def _descendants_of(g: Graph, v: int) -> set[int]:
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for w in g.children(x):
            if w not in seen:
                seen.add(int(w))
                stack.append(int(w))
    return seen


def _possible_descendants_of(g: Graph, seeds: Iterable[int]) -> set[int]:
    seen = set(seeds)
    stack = list(seen)
    while stack:
        x = stack.pop()
        for w in list(g.children(x)) + list(g.undirected(x)):
            if w not in seen:
                seen.add(int(w))
                stack.append(int(w))
    return seen


def _is_blocked(g: Graph, nodes, dirs, z: set[int]) -> bool:
    """Path-blocking for a definite-status path: a non-collider in z, or a
    collider none of whose descendants is in z."""
    for i in range(1, len(nodes) - 1):
        if dirs[i - 1] == ">" and dirs[i] == "<":
            if not (_descendants_of(g, nodes[i]) & z):
                return True
        elif nodes[i] in z:
            return True
    return False


def _as_set(z) -> set[int]:
    return {int(v) for v in z}


def naive_d_separated(g: Graph, t: int, y: int, z) -> bool:
    """True iff every definite-status path from t to y is blocked given z."""
    _guard(g)
    z = _as_set(z)
    for nodes, dirs in _paths(g, t, y):
        if _is_definite_status(g, nodes, dirs) and not _is_blocked(g, nodes, dirs, z):
            return False
    return True


def naive_amenable(g: Graph, t: int, y: int) -> bool:
    """True iff no possibly directed path from t to y starts undirected."""
    _guard(g)
    if not g.has_undirected:
        return True
    for nodes, dirs in _paths(g, t, y):
        if "<" not in dirs and dirs[0] == "-":
            return False
    return True


def _forbidden(g: Graph, t: int, y: int) -> set[int]:
    possibly_causal = set()
    for nodes, dirs in _paths(g, t, y):
        if "<" not in dirs:
            possibly_causal.update(nodes[1:])
    forb = _possible_descendants_of(g, possibly_causal) if possibly_causal else set()
    forb.add(t)
    return forb


def naive_valid_adjustment(g: Graph, t: int, y: int, z) -> bool:
    """Generalized adjustment criterion by enumeration: amenability, empty
    intersection with the forbidden set, and blocking of every proper
    definite-status non-causal path."""
    _guard(g)
    z = _as_set(z)
    if t == y or t in z or y in z:
        raise ValueError("t, y, z must be pairwise disjoint")
    if not naive_amenable(g, t, y):
        return False
    if z & _forbidden(g, t, y):
        return False
    for nodes, dirs in _paths(g, t, y):
        if "<" in dirs and _is_definite_status(g, nodes, dirs) and not _is_blocked(g, nodes, dirs, z):
            return False
    return True


def _naive_oset(g: Graph, t: int, y: int) -> set[int]:
    causal = set()
    for nodes, dirs in _paths(g, t, y):
        if all(d == ">" for d in dirs):
            causal.update(nodes[1:])
    parents = set()
    for v in causal:
        parents.update(int(w) for w in g.parents(v))
    return parents - _forbidden(g, t, y)


def _de_strict(g: Graph, t: int) -> set[int]:
    return _descendants_of(g, t)


def _an_strict(g: Graph, t: int) -> set[int]:
    seen = {t}
    stack = [t]
    while stack:
        x = stack.pop()
        for w in g.parents(x):
            if w not in seen:
                seen.add(int(w))
                stack.append(int(w))
    return seen


def naive_aid(g_true: Graph, g_guess: Graph, strategy) -> int:
    """Literal per-pair loop: derive the claim for each (t, y) on g_guess,
    verify it on g_true, count the incorrect ones."""
    _guard(g_true)
    _guard(g_guess)
    if g_true.p != g_guess.p:
        raise ValueError("graphs must share a node count")
    strategy = Strategy(strategy)
    p = g_true.p
    count = 0
    for t in range(p):
        de_g = _de_strict(g_guess, t)
        an_g = _an_strict(g_guess, t) - {t}
        pa_g = {int(w) for w in g_guess.parents(t)}
        for y in range(p):
            if y == t:
                continue
            # Claim on the guess graph; amenability is checked first.
            if not naive_amenable(g_guess, t, y):
                claim = ("none", None)
            elif strategy is Strategy.PARENT:
                claim = ("zero", None) if y in pa_g else ("adjust", pa_g)
            elif strategy is Strategy.ANCESTOR:
                claim = ("adjust", an_g) if y in de_g else ("zero", None)
            else:
                claim = ("adjust", _naive_oset(g_guess, t, y)) if y in de_g else ("zero", None)
            # Verification on the true graph.
            kind, z = claim
            if kind == "none":
                correct = not naive_amenable(g_true, t, y)
            elif kind == "zero":
                correct = y not in _possible_descendants_of(g_true, [t])
            elif y in z:
                correct = False
            else:
                correct = naive_valid_adjustment(g_true, t, y, z)
            if not correct:
                count += 1
    return count
