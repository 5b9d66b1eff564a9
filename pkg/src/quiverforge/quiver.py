"""Finite quivers, structural constructions and the Euler form.

Vertices and edges are dense integer indices.  Labels are kept only for
display and JSON round-trips.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_PATH_LIMIT = 10**6


class QuiverError(ValueError):
    """Invalid quiver data or an operation applied to incompatible input."""


@dataclass(frozen=True)
class Edge:
    id: int
    tail: int
    head: int


@dataclass(frozen=True)
class Quiver:
    labels: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        n = len(self.labels)
        for pos, e in enumerate(self.edges):
            if e.id != pos:
                raise QuiverError(f"edge id {e.id} at position {pos}; ids must equal positions")
            if not (0 <= e.tail < n and 0 <= e.head < n):
                raise QuiverError(f"edge {e.id} has endpoint outside 0..{n - 1}")

    @classmethod
    def from_arrows(cls, n_vertices: int, arrows: Iterable[tuple[int, int]],
                    labels: Sequence[str] | None = None) -> "Quiver":
        """Build from ``(tail, head)`` pairs; edge ids follow the iteration order."""
        if labels is None:
            labels = [f"v{i}" for i in range(n_vertices)]
        if len(labels) != n_vertices:
            raise QuiverError("label count does not match vertex count")
        edges = tuple(Edge(k, t, h) for k, (t, h) in enumerate(arrows))
        return cls(tuple(labels), edges)

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def tail(self, e: int) -> int:
        return self.edges[e].tail

    def head(self, e: int) -> int:
        return self.edges[e].head

    def check_vertex(self, v: int) -> int:
        if not isinstance(v, (int, np.integer)) or not 0 <= v < self.n_vertices:
            raise QuiverError(f"vertex {v!r} not in quiver with {self.n_vertices} vertices")
        return int(v)

    def check_edge(self, e: int) -> int:
        if not isinstance(e, (int, np.integer)) or not 0 <= e < self.n_edges:
            raise QuiverError(f"edge {e!r} not in quiver with {self.n_edges} edges")
        return int(e)

    def out_edges(self, v: int) -> list[int]:
        return [e.id for e in self.edges if e.tail == v]

    def in_edges(self, v: int) -> list[int]:
        return [e.id for e in self.edges if e.head == v]

    def adjacency(self) -> np.ndarray:
        """Integer matrix ``A[h, t]`` counting edges ``t -> h``."""
        a = np.zeros((self.n_vertices, self.n_vertices), dtype=np.int64)
        for e in self.edges:
            a[e.head, e.tail] += 1
        return a

    def arrows(self) -> list[tuple[int, int]]:
        return [(e.tail, e.head) for e in self.edges]


# -- standard examples --------------------------------------------------------

def jordan_quiver() -> Quiver:
    return Quiver.from_arrows(1, [(0, 0)])


def kronecker_quiver(n: int) -> Quiver:
    """Two vertices, ``n`` parallel edges from vertex 0 (tail) to vertex 1 (head)."""
    return Quiver.from_arrows(2, [(0, 1)] * n, labels=["tail", "head"])


def a_quiver(m: int) -> Quiver:
    """Linear quiver ``A_m`` oriented towards vertex 0: edge ``k`` goes ``k+1 -> k``."""
    return Quiver.from_arrows(m, [(k + 1, k) for k in range(m - 1)])


# -- path data ---------------------------------------------------------------

@dataclass(frozen=True)
class Path:
    """A path written left to right as ``a_1 a_2 ... a_k``; ``a_k`` acts first.

    The trivial path at ``vertex`` has ``edges == ()``.
    """
    quiver: Quiver = field(repr=False, compare=False)
    edges: tuple[int, ...]
    vertex: int | None = None

    def __post_init__(self):
        q = self.quiver
        if not self.edges:
            if self.vertex is None:
                raise QuiverError("a trivial path needs a vertex")
            q.check_vertex(self.vertex)
            return
        for e in self.edges:
            q.check_edge(e)
        for left, right in zip(self.edges, self.edges[1:]):
            if q.tail(left) != q.head(right):
                raise QuiverError(f"edges {left} and {right} are not composable")
        object.__setattr__(self, "vertex", None)

    @classmethod
    def trivial(cls, quiver: Quiver, v: int) -> "Path":
        return cls(quiver, (), v)

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def head(self) -> int:
        return self.vertex if not self.edges else self.quiver.head(self.edges[0])

    @property
    def tail(self) -> int:
        return self.vertex if not self.edges else self.quiver.tail(self.edges[-1])

    def key(self) -> tuple:
        return (self.edges, self.vertex if not self.edges else None)

    def __hash__(self):
        return hash(self.key())

    def __eq__(self, other):
        return isinstance(other, Path) and self.key() == other.key()

    def compose(self, other: "Path") -> "Path | None":
        """``self * other`` (``other`` applied first); ``None`` if not composable."""
        if self.tail != other.head:
            return None
        if not self.edges:
            return other
        if not other.edges:
            return self
        return Path(self.quiver, self.edges + other.edges)


def enumerate_paths(q: Quiver, source: int, target: int, max_len: int,
                    limit: int = DEFAULT_PATH_LIMIT) -> list[Path]:
    """All paths ``source -> target`` of length at most ``max_len``.

    Ordered by length, then lexicographically by the written edge sequence
    ``a_1 .. a_k``.  Raises if more than ``limit`` partial paths would be
    generated.
    """
    q.check_vertex(source)
    q.check_vertex(target)
    if max_len < 0:
        raise QuiverError("max_len must be >= 0")
    out_by_vertex = [sorted(q.out_edges(v)) for v in range(q.n_vertices)]
    found: list[Path] = []
    # frontier entries: (application-order edge list, current vertex)
    frontier: list[tuple[tuple[int, ...], int]] = [((), source)]
    generated = 0
    for length in range(max_len + 1):
        batch = sorted(tuple(reversed(word)) for word, v in frontier if v == target)
        found.extend(Path(q, w, source) if w else Path.trivial(q, source) for w in batch)
        if length == max_len:
            break
        nxt = []
        for word, v in frontier:
            for e in out_by_vertex[v]:
                nxt.append((word + (e,), q.head(e)))
        generated += len(nxt)
        if generated > limit:
            raise QuiverError(f"path enumeration exceeds limit {limit}")
        frontier = nxt
    return found


# -- structural constructions ------------------------------------------------

def opposite(q: Quiver) -> Quiver:
    """Reverse every arrow; edge ``k`` of the result is the dual of edge ``k``."""
    return Quiver(q.labels, tuple(Edge(e.id, e.head, e.tail) for e in q.edges))


@dataclass(frozen=True)
class TensorQuiverMap:
    """Tensor quiver together with its bookkeeping back to the factors.

    Product vertex ``(i, j)`` has index ``i * |Q''_0| + j``.  Edge origins are
    ``(0, alpha, j)`` for first-factor edges and ``(1, i, beta)`` for
    second-factor edges.
    """
    quiver: Quiver
    first: Quiver
    second: Quiver
    vertex_pairs: tuple[tuple[int, int], ...]
    origins: tuple[tuple[int, int, int], ...]

    def vertex_index(self, i: int, j: int) -> int:
        return i * self.second.n_vertices + j

    def first_edge(self, alpha: int, j: int) -> int:
        return self._first_ids[alpha][j]

    def second_edge(self, i: int, beta: int) -> int:
        return self._second_ids[i][beta]

    def __post_init__(self):
        n1, n2 = self.first.n_vertices, self.second.n_vertices
        f = [[-1] * n2 for _ in range(self.first.n_edges)]
        s = [[-1] * self.second.n_edges for _ in range(n1)]
        for eid, (kind, a, b) in enumerate(self.origins):
            if kind == 0:
                f[a][b] = eid
            else:
                s[a][b] = eid
        object.__setattr__(self, "_first_ids", f)
        object.__setattr__(self, "_second_ids", s)


def tensor_quiver(q1: Quiver, q2: Quiver) -> TensorQuiverMap:
    if q1.n_vertices == 0 or q2.n_vertices == 0:
        raise QuiverError("tensor product needs nonempty quivers")
    n2 = q2.n_vertices
    pairs = tuple((i, j) for i in range(q1.n_vertices) for j in range(n2))
    labels = tuple(f"({q1.labels[i]},{q2.labels[j]})" for i, j in pairs)
    arrows, origins = [], []
    for a in q1.edges:
        for j in range(n2):
            arrows.append((a.tail * n2 + j, a.head * n2 + j))
            origins.append((0, a.id, j))
    for i in range(q1.n_vertices):
        for b in q2.edges:
            arrows.append((i * n2 + b.tail, i * n2 + b.head))
            origins.append((1, i, b.id))
    tq = Quiver.from_arrows(len(pairs), arrows, labels)
    return TensorQuiverMap(tq, q1, q2, pairs, tuple(origins))


def euler_form(q: Quiver, d: Sequence[int], e: Sequence[int]) -> int:
    """``sum_i d_i e_i - sum_alpha d_{t alpha} e_{h alpha}``."""
    if len(d) != q.n_vertices or len(e) != q.n_vertices:
        raise QuiverError("dimension vector length does not match vertex count")
    d = [int(x) for x in d]
    e = [int(x) for x in e]
    return sum(a * b for a, b in zip(d, e)) - sum(d[x.tail] * e[x.head] for x in q.edges)


def is_indivisible(d: Sequence[int]) -> bool:
    from math import gcd
    g = 0
    for x in d:
        g = gcd(g, int(x))
    return g == 1


def check_dimension_vector(q: Quiver, d: Sequence[int]) -> tuple[int, ...]:
    if len(d) != q.n_vertices:
        raise QuiverError(f"dimension vector has {len(d)} entries, quiver has {q.n_vertices} vertices")
    out = tuple(int(x) for x in d)
    if any(x < 0 for x in out):
        raise QuiverError("dimension vector entries must be nonnegative")
    return out


# -- operations: collapse / clone / delete -----------------------------------

@dataclass(frozen=True)
class Correspondence:
    """How an operated quiver relates to its source quiver.

    ``vertex_sources[v]`` lists the old vertices whose spaces are stacked (in
    that order) at new vertex ``v``.  ``edge_sources[e]`` lists the old edges
    whose maps are added up at new edge ``e``.  ``vertex_map`` and
    ``edge_map`` send each old index to its new image, or ``None`` if it was
    deleted.
    """
    kind: str
    source: Quiver
    target: Quiver
    vertex_sources: tuple[tuple[int, ...], ...]
    edge_sources: tuple[tuple[int, ...], ...]
    vertex_map: tuple[int | None, ...]
    edge_map: tuple[int | None, ...]
    operands: tuple[int, ...] = ()


def _relabel(q: Quiver, keep_vertices: list[list[int]], edge_plan: list[tuple[tuple[int, ...], int, int]],
             kind: str, labels: list[str] | None = None, operands: Sequence[int] = ()) -> Correspondence:
    vmap: list[int | None] = [None] * q.n_vertices
    for new, olds in enumerate(keep_vertices):
        for o in olds:
            if vmap[o] is None:
                vmap[o] = new
    emap: list[int | None] = [None] * q.n_edges
    for new, (olds, _, _) in enumerate(edge_plan):
        for o in olds:
            if emap[o] is None:
                emap[o] = new
    if labels is None:
        labels = ["+".join(q.labels[o] for o in olds) for olds in keep_vertices]
    target = Quiver.from_arrows(len(keep_vertices), [(t, h) for _, t, h in edge_plan], labels)
    return Correspondence(kind, q, target,
                          tuple(tuple(v) for v in keep_vertices),
                          tuple(olds for olds, _, _ in edge_plan),
                          tuple(vmap), tuple(emap), tuple(operands))


def collapse_vertices(q: Quiver, groups: Sequence[Sequence[int]]) -> Correspondence:
    """Merge each group into one vertex.

    ``groups`` may list only the nontrivial blocks; every other vertex stays a
    singleton.  The new vertex order follows the smallest member of each block.
    """
    seen: set[int] = set()
    blocks = []
    for g in groups:
        g = sorted(q.check_vertex(v) for v in g)
        if not g:
            raise QuiverError("empty vertex group")
        if seen.intersection(g):
            raise QuiverError("vertex groups overlap")
        seen.update(g)
        blocks.append(g)
    blocks += [[v] for v in range(q.n_vertices) if v not in seen]
    blocks.sort(key=min)
    where = {}
    for new, b in enumerate(blocks):
        for v in b:
            where[v] = new
    plan = [((e.id,), where[e.tail], where[e.head]) for e in q.edges]
    return _relabel(q, blocks, plan, "collapse_vertices",
                    operands=[v for b in blocks if len(b) > 1 for v in b])


def collapse_edges(q: Quiver, bundle: Sequence[int]) -> Correspondence:
    """Replace a bundle of parallel edges by one edge carrying their sum.

    The merged edge takes the position of the smallest bundled edge id.
    """
    bundle = sorted({q.check_edge(e) for e in bundle})
    if not bundle:
        raise QuiverError("empty edge bundle")
    t, h = q.tail(bundle[0]), q.head(bundle[0])
    if any(q.tail(e) != t or q.head(e) != h for e in bundle):
        raise QuiverError("bundled edges must share head and tail")
    plan = []
    for e in q.edges:
        if e.id == bundle[0]:
            plan.append((tuple(bundle), t, h))
        elif e.id not in bundle:
            plan.append(((e.id,), e.tail, e.head))
    return _relabel(q, [[v] for v in range(q.n_vertices)], plan, "collapse_edges",
                    list(q.labels), bundle)


def clone_vertex(q: Quiver, v: int) -> Correspondence:
    """Add a copy ``v'`` of ``v`` (appended last) with copies of all incident edges.

    An edge ``v -> u`` gets a clone ``v' -> u``, ``u -> v`` gets ``u -> v'`` and
    a loop at ``v`` gets a loop at ``v'``.
    """
    v = q.check_vertex(v)
    nv = q.n_vertices
    plan = [((e.id,), e.tail, e.head) for e in q.edges]
    for e in q.edges:
        if e.tail == v or e.head == v:
            t = nv if e.tail == v else e.tail
            h = nv if e.head == v else e.head
            plan.append(((e.id,), t, h))
    groups = [[u] for u in range(nv)] + [[v]]
    labels = list(q.labels) + [q.labels[v] + "'"]
    return _relabel(q, groups, plan, "clone_vertex", labels, (v,))


def clone_edge(q: Quiver, e: int) -> Correspondence:
    e = q.check_edge(e)
    plan = [((x.id,), x.tail, x.head) for x in q.edges] + [((e,), q.tail(e), q.head(e))]
    return _relabel(q, [[u] for u in range(q.n_vertices)], plan, "clone_edge", list(q.labels), (e,))


def delete_vertex(q: Quiver, v: int) -> Correspondence:
    v = q.check_vertex(v)
    keep = [u for u in range(q.n_vertices) if u != v]
    where = {u: k for k, u in enumerate(keep)}
    plan = [((e.id,), where[e.tail], where[e.head]) for e in q.edges
            if e.tail != v and e.head != v]
    return _relabel(q, [[u] for u in keep], plan, "delete_vertex", [q.labels[u] for u in keep], (v,))


def delete_edge(q: Quiver, e: int) -> Correspondence:
    e = q.check_edge(e)
    plan = [((x.id,), x.tail, x.head) for x in q.edges if x.id != e]
    return _relabel(q, [[u] for u in range(q.n_vertices)], plan, "delete_edge", list(q.labels), (e,))
