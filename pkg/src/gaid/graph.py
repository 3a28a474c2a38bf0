"""Graph core: parsing, validation, and traversal-friendly storage.

Graphs are immutable once constructed. Nodes are integer ids ``0..p-1`` and
each of the three neighbor relations (parents, children, undirected) is kept
as a CSR pair of arrays: an ``int64`` offset table plus a sorted ``int32``
index array. That layout is built once at parse time and shared read-only
with the reachability kernels and across worker threads.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "GraphKind",
    "GraphFormat",
    "ParseError",
    "ValidationError",
    "Graph",
    "NodeSet",
    "PartialOrder",
    "parse_graph",
    "serialize_graph",
    "parse_order",
    "validate_dag",
    "validate_cpdag",
    "cpdag_of_dag",
    "order_to_dag",
]


class ParseError(ValueError):
    """Malformed input text (bad cell value, ragged matrix, bad token)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class ValidationError(ValueError):
    """A structural graph invariant is violated.

    ``reason`` is a short machine-readable tag such as ``Cycle``,
    ``NoConsistentExtension`` or ``NotCompleted``.
    """

    def __init__(self, reason: str, message: str):
        self.reason = reason
        super().__init__(f"{reason}: {message}")


class GraphKind(Enum):
    DAG = "dag"
    CPDAG = "cpdag"


class GraphFormat(Enum):
    ADJ_MATRIX = "adj"
    EDGE_LIST = "edgelist"


def _as_kind(kind) -> "GraphKind":
    if isinstance(kind, GraphKind):
        return kind
    return GraphKind(str(kind).lower())


def _as_format(fmt) -> "GraphFormat":
    if isinstance(fmt, GraphFormat):
        return fmt
    return GraphFormat(str(fmt).lower())


def _build_csr(p: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sorted CSR arrays for the relation src -> dst."""
    ptr = np.zeros(p + 1, dtype=np.int64)
    if src.size:
        order = np.lexsort((dst, src))
        src = src[order]
        dst = dst[order]
        np.add.at(ptr, src + 1, 1)
        np.cumsum(ptr, out=ptr)
    idx = np.ascontiguousarray(dst, dtype=np.int32)
    ptr.setflags(write=False)
    idx.setflags(write=False)
    return ptr, idx


class Graph:
    """Immutable DAG or CPDAG over nodes ``0..p-1``."""

    __slots__ = ("kind", "p", "m", "_pa", "_ch", "_un")

    def __init__(self, kind, p, pa, ch, un, m):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "_pa", pa)
        object.__setattr__(self, "_ch", ch)
        object.__setattr__(self, "_un", un)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    # -- construction ---------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        p: int,
        directed: Iterable[tuple[int, int]] = (),
        undirected: Iterable[tuple[int, int]] = (),
        kind: GraphKind | str | None = None,
    ) -> "Graph":
        """Build and validate a graph from explicit edge lists.

        ``directed`` holds (i, j) pairs meaning i -> j; ``undirected`` holds
        each line edge once, in either orientation. Self-loops, duplicate
        edges and pairs carrying both edge types are rejected; the directed
        part must be acyclic. ``kind`` defaults to CPDAG when undirected
        edges are present and DAG otherwise.
        """
        if p < 0:
            raise ValidationError("BadNodeCount", f"p must be >= 0, got {p}")
        d = np.array(sorted(directed), dtype=np.int64).reshape(-1, 2)
        u_raw = [(min(a, b), max(a, b)) for a, b in undirected]
        u = np.array(sorted(u_raw), dtype=np.int64).reshape(-1, 2)
        for arr, label in ((d, "directed"), (u, "undirected")):
            if arr.size:
                if arr.min() < 0 or arr.max() >= p:
                    raise ValidationError("BadNodeId", f"{label} edge endpoint out of range 0..{p - 1}")
                if (arr[:, 0] == arr[:, 1]).any():
                    v = int(arr[arr[:, 0] == arr[:, 1]][0, 0])
                    raise ValidationError("SelfLoop", f"self-loop at node {v}")
        if len(u_raw) != len({tuple(r) for r in u_raw}):
            raise ValidationError("MultiEdge", "duplicate undirected edge")
        d_pairs = {(int(a), int(b)) for a, b in d}
        if len(d_pairs) != d.shape[0]:
            raise ValidationError("MultiEdge", "duplicate directed edge")
        u_pairs = {tuple(r) for r in u_raw}
        both = {(min(a, b), max(a, b)) for a, b in d_pairs} & u_pairs
        if both:
            a, b = min(both)
            raise ValidationError("MixedEdgePair", f"nodes {a},{b} carry directed and undirected edges")
        if kind is None:
            kind = GraphKind.CPDAG if u.size else GraphKind.DAG
        kind = _as_kind(kind)
        if kind is GraphKind.DAG and u.size:
            raise ValidationError("UndirectedInDag", "kind=DAG forbids undirected edges")
        src_d = d[:, 0].astype(np.int64, copy=False) if d.size else np.empty(0, np.int64)
        dst_d = d[:, 1].astype(np.int64, copy=False) if d.size else np.empty(0, np.int64)
        if u.size:
            src_u = np.concatenate([u[:, 0], u[:, 1]])
            dst_u = np.concatenate([u[:, 1], u[:, 0]])
        else:
            src_u = dst_u = np.empty(0, np.int64)
        pa = _build_csr(p, dst_d, src_d)
        ch = _build_csr(p, src_d, dst_d)
        un = _build_csr(p, src_u, dst_u)
        g = cls(kind, p, pa, ch, un, int(d.shape[0] + u.shape[0]))
        cycle = g._find_directed_cycle()
        if cycle is not None:
            raise ValidationError("Cycle", f"directed cycle {cycle}")
        return g

    @classmethod
    def from_amat(cls, amat, kind: GraphKind | str | None = None) -> "Graph":
        """Build a graph from a p x p adjacency matrix.

        Cell coding: ``amat[i, j] == 1`` means i -> j and requires
        ``amat[j, i] == 0``; ``amat[i, j] == 2`` means i -- j and requires
        ``amat[j, i] == 2``; the diagonal must be 0.
        """
        a = np.asarray(amat)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ParseError(f"adjacency matrix must be square, got shape {a.shape}")
        p = int(a.shape[0])
        bad = ~np.isin(a, (0, 1, 2))
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise ParseError(f"illegal cell value {a[i, j]!r} at ({i},{j}); cells must be 0, 1 or 2")
        if np.diagonal(a).any():
            v = int(np.flatnonzero(np.diagonal(a))[0])
            raise ParseError(f"nonzero diagonal at node {v} (self-loop)")
        directed = []
        undirected = []
        for i in range(p):
            for j in range(i + 1, p):
                x, y = int(a[i, j]), int(a[j, i])
                if x == 0 and y == 0:
                    continue
                if x == 1 and y == 0:
                    directed.append((i, j))
                elif x == 0 and y == 1:
                    directed.append((j, i))
                elif x == 2 and y == 2:
                    undirected.append((i, j))
                else:
                    raise ParseError(
                        f"inconsistent cells ({i},{j})={x} and ({j},{i})={y}: "
                        "1 requires the mirror cell 0, 2 requires the mirror cell 2"
                    )
        if kind is None:
            kind = GraphKind.CPDAG if undirected else GraphKind.DAG
        return cls.from_edges(p, directed, undirected, kind)

    # -- queries ---------------------------------------------------------

    def parents(self, v: int) -> np.ndarray:
        return self._pa[1][self._pa[0][v] : self._pa[0][v + 1]]

    def children(self, v: int) -> np.ndarray:
        return self._ch[1][self._ch[0][v] : self._ch[0][v + 1]]

    def undirected(self, v: int) -> np.ndarray:
        return self._un[1][self._un[0][v] : self._un[0][v + 1]]

    @property
    def has_undirected(self) -> bool:
        return self._un[1].size > 0

    def directed_edges(self) -> Iterator[tuple[int, int]]:
        ptr, idx = self._ch
        for v in range(self.p):
            for e in range(ptr[v], ptr[v + 1]):
                yield v, int(idx[e])

    def undirected_edges(self) -> Iterator[tuple[int, int]]:
        ptr, idx = self._un
        for v in range(self.p):
            for e in range(ptr[v], ptr[v + 1]):
                w = int(idx[e])
                if v < w:
                    yield v, w

    def csr(self):
        """(pa_ptr, pa_idx, ch_ptr, ch_idx, un_ptr, un_idx) for the kernels."""
        return (*self._pa, *self._ch, *self._un)

    def to_amat(self) -> np.ndarray:
        a = np.zeros((self.p, self.p), dtype=np.int8)
        for i, j in self.directed_edges():
            a[i, j] = 1
        for i, j in self.undirected_edges():
            a[i, j] = a[j, i] = 2
        return a

    def _find_directed_cycle(self) -> list[int] | None:
        """Kahn pass; on failure walk the leftover subgraph for a witness."""
        p = self.p
        indeg = np.diff(self._pa[0]).astype(np.int64)
        queue = [v for v in range(p) if indeg[v] == 0]
        seen = 0
        while queue:
            v = queue.pop()
            seen += 1
            for w in self.children(v):
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(int(w))
        if seen == p:
            return None
        start = next(v for v in range(p) if indeg[v] > 0)
        trail, pos = [], {}
        v = start
        while v not in pos:
            pos[v] = len(trail)
            trail.append(v)
            v = next(int(w) for w in self.parents(v) if indeg[w] > 0)
        return trail[pos[v] :][::-1]

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        if self.kind is not other.kind or self.p != other.p or self.m != other.m:
            return False
        for mine, theirs in zip(self.csr(), other.csr()):
            if not np.array_equal(mine, theirs):
                return False
        return True

    def __repr__(self):
        return f"Graph({self.kind.value}, p={self.p}, m={self.m})"


class NodeSet:
    """Dense node set over a fixed universe ``0..p-1``.

    Membership tests and inserts are O(1); iteration is ascending.
    """

    __slots__ = ("_mask",)

    def __init__(self, p: int, members: Iterable[int] = ()):
        mask = np.zeros(p, dtype=np.bool_)
        for v in members:
            if not 0 <= v < p:
                raise ValueError(f"node id {v} out of range 0..{p - 1}")
            mask[v] = True
        self._mask = mask

    @classmethod
    def from_mask(cls, mask: np.ndarray, copy: bool = True) -> "NodeSet":
        ns = cls.__new__(cls)
        ns._mask = np.array(mask, dtype=np.bool_, copy=copy)
        return ns

    @property
    def p(self) -> int:
        return self._mask.shape[0]

    def add(self, v: int) -> None:
        if not 0 <= v < self.p:
            raise ValueError(f"node id {v} out of range 0..{self.p - 1}")
        self._mask[v] = True

    def mask(self) -> np.ndarray:
        return self._mask.copy()

    def __contains__(self, v) -> bool:
        return 0 <= v < self.p and bool(self._mask[v])

    def __iter__(self) -> Iterator[int]:
        return iter(int(v) for v in np.flatnonzero(self._mask))

    def __len__(self) -> int:
        return int(self._mask.sum())

    def __eq__(self, other):
        if isinstance(other, NodeSet):
            return np.array_equal(self._mask, other._mask)
        if isinstance(other, (set, frozenset)):
            return set(self) == other
        return NotImplemented

    def __repr__(self):
        return f"NodeSet(p={self.p}, {{{', '.join(map(str, self))}}})"


@dataclass(frozen=True)
class PartialOrder:
    """Strict partial order: ``(a, b)`` in ``pairs`` means a precedes b."""

    p: int
    pairs: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset((int(a), int(b)) for a, b in self.pairs))
        for a, b in self.pairs:
            if not (0 <= a < self.p and 0 <= b < self.p):
                raise ValidationError("BadNodeId", f"order pair ({a},{b}) out of range 0..{self.p - 1}")
            if a == b:
                raise ValidationError("Irreflexivity", f"order pair ({a},{a}) is reflexive")

    @classmethod
    def total(cls, order: Iterable[int]) -> "PartialOrder":
        """Total order from a permutation of node ids (first is smallest)."""
        seq = [int(v) for v in order]
        if sorted(seq) != list(range(len(seq))):
            raise ValidationError("BadOrder", "total order must be a permutation of 0..p-1")
        return cls(len(seq), frozenset((a, b) for i, a in enumerate(seq) for b in seq[i + 1 :]))


# -- parsing and serialization -------------------------------------------


def _decode(text) -> str:
    if isinstance(text, bytes):
        return text.decode("utf-8")
    return text


def parse_graph(text, format=GraphFormat.ADJ_MATRIX, kind=None, header: bool = False) -> Graph:
    """Parse a graph from CSV adjacency-matrix or edge-list text.

    ``kind`` forces DAG or CPDAG validation; when None it is inferred
    (any undirected edge makes the graph a CPDAG). ``header`` skips the
    first row of an adjacency matrix.
    """
    fmt = _as_format(format)
    text = _decode(text)
    if fmt is GraphFormat.ADJ_MATRIX:
        return _parse_amat(text, kind, header)
    return _parse_edgelist(text, kind)


def _parse_amat(text: str, kind, header: bool) -> Graph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if header and lines:
        lines = lines[1:]
    if not lines:
        raise ParseError("empty adjacency matrix")
    rows = []
    p = len(lines)
    for lineno, ln in enumerate(lines, start=1):
        cells = [c.strip() for c in ln.split(",")]
        if len(cells) != p:
            raise ParseError(f"expected {p} columns, got {len(cells)}", line=lineno)
        row = []
        for c in cells:
            if c not in ("0", "1", "2"):
                raise ParseError(f"illegal cell value {c!r}; cells must be 0, 1 or 2", line=lineno)
            row.append(int(c))
        rows.append(row)
    return Graph.from_amat(np.array(rows, dtype=np.int8), kind)


def _parse_edgelist(text: str, kind) -> Graph:
    directed, undirected = [], []
    declared_p = None
    max_id = -1
    for lineno, raw in enumerate(_decode(text).splitlines(), start=1):
        line = raw.split("#", 1)
        comment = line[1] if len(line) > 1 else ""
        stripped = comment.strip()
        if stripped.startswith("p=") and declared_p is None:
            try:
                declared_p = int(stripped[2:])
            except ValueError:
                raise ParseError(f"bad node-count pragma {stripped!r}", line=lineno) from None
        body = line[0].strip()
        if not body:
            continue
        tokens = body.split()
        if len(tokens) != 3 or tokens[2] not in ("d", "u"):
            raise ParseError(f"expected 'i j d' or 'i j u', got {body!r}", line=lineno)
        try:
            i, j = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(f"non-integer node id in {body!r}", line=lineno) from None
        if i < 0 or j < 0:
            raise ParseError(f"negative node id in {body!r}", line=lineno)
        max_id = max(max_id, i, j)
        (directed if tokens[2] == "d" else undirected).append((i, j))
    p = declared_p if declared_p is not None else max_id + 1
    if max_id >= p:
        raise ParseError(f"node id {max_id} exceeds declared p={p}")
    return Graph.from_edges(p, directed, undirected, kind)


def serialize_graph(g: Graph, format=GraphFormat.ADJ_MATRIX) -> str:
    fmt = _as_format(format)
    if fmt is GraphFormat.ADJ_MATRIX:
        a = g.to_amat()
        return "\n".join(",".join(str(int(c)) for c in row) for row in a) + "\n"
    lines = [f"# p={g.p}"]
    lines += [f"{i} {j} d" for i, j in g.directed_edges()]
    lines += [f"{i} {j} u" for i, j in g.undirected_edges()]
    return "\n".join(lines) + "\n"


def parse_order(text) -> PartialOrder:
    """Parse a strict partial order from lines ``a b`` meaning a precedes b."""
    pairs = []
    declared_p = None
    max_id = -1
    for lineno, raw in enumerate(_decode(text).splitlines(), start=1):
        line = raw.split("#", 1)
        comment = line[1] if len(line) > 1 else ""
        stripped = comment.strip()
        if stripped.startswith("p=") and declared_p is None:
            try:
                declared_p = int(stripped[2:])
            except ValueError:
                raise ParseError(f"bad node-count pragma {stripped!r}", line=lineno) from None
        body = line[0].strip()
        if not body:
            continue
        tokens = body.split()
        if len(tokens) != 2:
            raise ParseError(f"expected 'a b', got {body!r}", line=lineno)
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(f"non-integer node id in {body!r}", line=lineno) from None
        max_id = max(max_id, a, b)
        pairs.append((a, b))
    p = declared_p if declared_p is not None else max_id + 1
    return PartialOrder(p, frozenset(pairs))


# -- validation ----------------------------------------------------------


def validate_dag(g: Graph) -> None:
    """Raise ValidationError unless g structurally satisfies the DAG
    invariants (no undirected edges, acyclic directed part)."""
    if g.has_undirected:
        i, j = next(g.undirected_edges())
        raise ValidationError("UndirectedInDag", f"undirected edge {i}--{j} in a DAG")
    cycle = g._find_directed_cycle()
    if cycle is not None:
        raise ValidationError("Cycle", f"directed cycle {cycle}")


def validate_cpdag(g: Graph, strict: bool = False) -> None:
    """Check CPDAG invariants.

    Non-strict checks the structural invariants only (these already hold for
    any constructed Graph, so this re-verifies acyclicity of the directed
    part). Strict additionally requires the graph to be a genuine completed
    graph: a consistent DAG extension must exist and re-completing it must
    reproduce the input exactly.
    """
    cycle = g._find_directed_cycle()
    if cycle is not None:
        raise ValidationError("Cycle", f"directed cycle {cycle}")
    if not strict:
        return
    ext = consistent_extension(g)
    if cpdag_of_dag(ext) != g:
        raise ValidationError("NotCompleted", "graph is not a completed CPDAG (re-completion differs)")


def consistent_extension(g: Graph) -> Graph:
    """Orient all undirected edges into a DAG with the same adjacencies and
    v-structures, by repeated sink elimination."""
    p = g.p
    directed = list(g.directed_edges())
    und = {v: set(int(w) for w in g.undirected(v)) for v in range(p)}
    ch_left = {v: set(int(w) for w in g.children(v)) for v in range(p)}
    pa_left = {v: set(int(w) for w in g.parents(v)) for v in range(p)}
    adjacent = np.zeros((p, p), dtype=np.bool_)
    for i, j in directed:
        adjacent[i, j] = adjacent[j, i] = True
    for i, j in g.undirected_edges():
        adjacent[i, j] = adjacent[j, i] = True
    remaining = set(range(p))
    while remaining:
        sink = None
        for v in sorted(remaining):
            if ch_left[v]:
                continue
            nbrs = und[v] | pa_left[v]
            ok = all(adjacent[u, x] for u in und[v] for x in nbrs if x != u)
            if ok:
                sink = v
                break
        if sink is None:
            raise ValidationError("NoConsistentExtension", "no consistent DAG extension exists")
        for u in und[sink]:
            directed.append((u, sink))
            und[u].discard(sink)
        for u in pa_left[sink]:
            ch_left[u].discard(sink)
        remaining.discard(sink)
        und[sink] = set()
        pa_left[sink] = set()
    return Graph.from_edges(p, directed, kind=GraphKind.DAG)


def cpdag_of_dag(g: Graph) -> Graph:
    """Completed graph of a DAG: orient v-structures, close under the Meek
    orientation rules, leave the rest undirected."""
    validate_dag(g)
    p = g.p
    # 1 = directed i->j, 2 = undirected (both cells), 0 = none.
    m = np.zeros((p, p), dtype=np.int8)
    adjacent = np.zeros((p, p), dtype=np.bool_)
    for i, j in g.directed_edges():
        m[i, j] = m[j, i] = 2
        adjacent[i, j] = adjacent[j, i] = True
    for v in range(p):
        pa = g.parents(v)
        for x in range(len(pa)):
            for y in range(x + 1, len(pa)):
                a, b = int(pa[x]), int(pa[y])
                if not adjacent[a, b]:
                    m[a, v], m[v, a] = 1, 0
                    m[b, v], m[v, b] = 1, 0
    _meek_closure(m, adjacent)
    directed = []
    undirected = []
    for i in range(p):
        for j in range(p):
            if m[i, j] == 1:
                directed.append((i, j))
            elif m[i, j] == 2 and i < j:
                undirected.append((i, j))
    return Graph.from_edges(p, directed, undirected, GraphKind.CPDAG)


def _meek_closure(m: np.ndarray, adjacent: np.ndarray) -> None:
    # R4 needs background knowledge to fire; v-structure seeds close under R1-R3.
    p = m.shape[0]
    changed = True
    while changed:
        changed = False
        for b in range(p):
            parents = [a for a in range(p) if m[a, b] == 1]
            linked = [c for c in range(p) if m[b, c] == 2]
            children = [c for c in range(p) if m[b, c] == 1]
            # R1: a -> b -- c with a, c non-adjacent orients b -> c.
            for a in parents:
                for c in linked:
                    if c != a and not adjacent[a, c] and m[b, c] == 2:
                        m[b, c], m[c, b] = 1, 0
                        changed = True
            # R2: a -> b -> c with a -- c orients a -> c.
            for a in parents:
                for c in children:
                    if m[a, c] == 2:
                        m[a, c], m[c, a] = 1, 0
                        changed = True
        # R3: a -- d with a -- b -> d, a -- c -> d, b, c non-adjacent orients a -> d.
        for a in range(p):
            linked = [d for d in range(p) if m[a, d] == 2]
            for d in linked:
                if m[a, d] != 2:
                    continue
                spouses = [b for b in range(p) if m[b, d] == 1 and m[a, b] == 2]
                done = False
                for x in range(len(spouses)):
                    for y in range(x + 1, len(spouses)):
                        if not adjacent[spouses[x], spouses[y]]:
                            m[a, d], m[d, a] = 1, 0
                            changed = True
                            done = True
                            break
                    if done:
                        break


def order_to_dag(o: PartialOrder) -> Graph:
    """Transitively closed DAG with an edge a -> b iff a precedes b."""
    succ: dict[int, list[int]] = {}
    for a, b in o.pairs:
        succ.setdefault(a, []).append(b)
    edges = []
    for a in range(o.p):
        if a not in succ:
            continue
        seen = set()
        stack = list(succ[a])
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(succ.get(v, ()))
        if a in seen:
            raise ValidationError("Cycle", f"order is not strict: {a} precedes itself transitively")
        edges.extend((a, b) for b in sorted(seen))
    return Graph.from_edges(o.p, edges, kind=GraphKind.DAG)
