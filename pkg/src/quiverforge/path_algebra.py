"""Bounded path algebra, the tensor commutation ideal and path normal forms."""
from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import Iterable, Mapping

import numpy as np

from . import _accel
from .quiver import Path, Quiver, QuiverError, TensorQuiverMap


class PathAlgebraElement:
    """Finite linear combination of paths of one quiver.

    Coefficients may be ints, Fractions or complex floats; zero terms are
    dropped on construction.
    """

    __slots__ = ("quiver", "terms")

    def __init__(self, quiver: Quiver, terms: Mapping[Path, Number] | Iterable[tuple[Path, Number]] = ()):
        self.quiver = quiver
        acc: dict[Path, Number] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for p, c in items:
            if p.quiver is not quiver and p.quiver != quiver:
                raise QuiverError("path belongs to a different quiver")
            acc[p] = acc.get(p, 0) + c
        self.terms = {p: c for p, c in acc.items() if c != 0}

    @classmethod
    def from_path(cls, p: Path, coeff: Number = 1) -> "PathAlgebraElement":
        return cls(p.quiver, {p: coeff})

    @classmethod
    def unit(cls, quiver: Quiver) -> "PathAlgebraElement":
        return cls(quiver, {Path.trivial(quiver, v): 1 for v in range(quiver.n_vertices)})

    def _check(self, other: "PathAlgebraElement"):
        if other.quiver is not self.quiver and other.quiver != self.quiver:
            raise QuiverError("elements of different path algebras")

    def __add__(self, other):
        self._check(other)
        return PathAlgebraElement(self.quiver, list(self.terms.items()) + list(other.terms.items()))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c: Number) -> "PathAlgebraElement":
        return PathAlgebraElement(self.quiver, {p: c * v for p, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        self._check(other)
        out: list[tuple[Path, Number]] = []
        for p, a in self.terms.items():
            for q, b in other.terms.items():
                pq = p.compose(q)
                if pq is not None:
                    out.append((pq, a * b))
        return PathAlgebraElement(self.quiver, out)

    def __eq__(self, other):
        return isinstance(other, PathAlgebraElement) and self.terms == other.terms

    def __repr__(self):
        body = " + ".join(f"{c}*{p.edges or ('e', p.vertex)}" for p, c in self.terms.items())
        return f"PathAlgebraElement({body or '0'})"


def multiply(x: PathAlgebraElement, y: PathAlgebraElement) -> PathAlgebraElement:
    return x * y


@dataclass(frozen=True)
class Relation:
    """``sum c_p p`` over parallel paths of length at least two."""
    terms: tuple[tuple[complex, Path], ...]

    def __post_init__(self):
        if not self.terms:
            raise QuiverError("a relation needs at least one term")
        heads = {p.head for _, p in self.terms}
        tails = {p.tail for _, p in self.terms}
        if len(heads) != 1 or len(tails) != 1:
            raise QuiverError("relation paths must share head and tail")
        if any(p.length < 2 for _, p in self.terms):
            raise QuiverError("relation paths must have length >= 2")
        if len({p.quiver for _, p in self.terms}) != 1:
            raise QuiverError("relation mixes quivers")

    @property
    def quiver(self) -> Quiver:
        return self.terms[0][1].quiver

    @property
    def head(self) -> int:
        return self.terms[0][1].head

    @property
    def tail(self) -> int:
        return self.terms[0][1].tail

    def as_element(self) -> PathAlgebraElement:
        return PathAlgebraElement(self.quiver, [(p, c) for c, p in self.terms])


@dataclass(frozen=True)
class CommutationGenerator:
    """The square ``(h a, b)(a, t b) - (a, h b)(t a, b)`` for factor edges ``a``, ``b``."""
    alpha: int
    beta: int
    first_then_second: Path   # (a, tb) applied first, then (ha, b)
    second_then_first: Path   # (ta, b) applied first, then (a, hb)

    def relation(self) -> Relation:
        return Relation(((1, self.first_then_second), (-1, self.second_then_first)))


def commutation_generators(tq: TensorQuiverMap) -> list[CommutationGenerator]:
    q1, q2, q = tq.first, tq.second, tq.quiver
    gens = []
    for a in q1.edges:
        for b in q2.edges:
            p = Path(q, (tq.second_edge(a.head, b.id), tq.first_edge(a.id, b.tail)))
            r = Path(q, (tq.first_edge(a.id, b.head), tq.second_edge(a.tail, b.id)))
            gens.append(CommutationGenerator(a.id, b.id, p, r))
    return gens


def _check_tensor_path(p: Path, tq: TensorQuiverMap):
    if p.quiver is not tq.quiver and p.quiver != tq.quiver:
        raise QuiverError("path does not live on this tensor quiver")


def factor_words(p: Path, tq: TensorQuiverMap) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """First- and second-factor edge sequences of ``p`` in application order."""
    _check_tensor_path(p, tq)
    first, second = [], []
    for e in reversed(p.edges):
        kind, a, b = tq.origins[e]
        (first if kind == 0 else second).append(a if kind == 0 else b)
    return tuple(first), tuple(second)


def path_from_factors(tq: TensorQuiverMap, start: tuple[int, int],
                      first: Iterable[int], second: Iterable[int]) -> Path:
    """Normal-form path: ``first`` applied from ``start``, then ``second``."""
    i, j = start
    word = []
    for a in first:
        if tq.first.tail(a) != i:
            raise QuiverError("first-factor word is not a path")
        word.append(tq.first_edge(a, j))
        i = tq.first.head(a)
    for b in second:
        if tq.second.tail(b) != j:
            raise QuiverError("second-factor word is not a path")
        word.append(tq.second_edge(i, b))
        j = tq.second.head(b)
    if not word:
        return Path.trivial(tq.quiver, tq.vertex_index(*start))
    return Path(tq.quiver, tuple(reversed(word)))


def normal_form(p: Path, tq: TensorQuiverMap) -> Path:
    """Representative of ``p`` modulo the commutation ideal.

    First-factor edges are moved to act before all second-factor edges; the
    order within each factor is preserved.  This is the terminal form of the
    swap rewriting, which is confluent because every swap removes exactly one
    inversion between the two factor words.
    """
    _check_tensor_path(p, tq)
    if not p.edges:
        return p
    start = tq.vertex_pairs[p.tail]
    first, second = factor_words(p, tq)
    return path_from_factors(tq, start, first, second)


def rewrite_once(p: Path, tq: TensorQuiverMap, position: int) -> Path | None:
    """Apply one commutation rewrite at ``p.edges[position:position+2]`` if possible.

    Swaps a first-factor edge acting right after a second-factor edge, in either
    direction of the generator.  Returns ``None`` when the pair is not a square.
    """
    _check_tensor_path(p, tq)
    if not 0 <= position < len(p.edges) - 1:
        return None
    later, earlier = p.edges[position], p.edges[position + 1]
    k_late, a1, b1 = tq.origins[later]
    k_early, a2, b2 = tq.origins[earlier]
    if k_late == k_early:
        return None
    i, j = tq.vertex_pairs[tq.quiver.tail(earlier)]
    if k_early == 1:                      # second-factor first, then first-factor
        beta, alpha = b2, a1
        new_early = tq.first_edge(alpha, j)
        new_late = tq.second_edge(tq.first.head(alpha), beta)
    else:                                 # first-factor first, then second-factor
        alpha, beta = a2, b1
        new_early = tq.second_edge(i, beta)
        new_late = tq.first_edge(alpha, tq.second.head(beta))
    edges = p.edges[:position] + (new_late, new_early) + p.edges[position + 2:]
    return Path(tq.quiver, edges)


def _tensor_arrays(tq: TensorQuiverMap):
    q = tq.quiver
    n2 = tq.second.n_vertices
    tails = np.array([e.tail for e in q.edges], dtype=np.int64)
    heads = np.array([e.head for e in q.edges], dtype=np.int64)
    kinds = np.array([o[0] for o in tq.origins], dtype=np.int64)
    factor_edge = np.array([o[1] if o[0] == 0 else o[2] for o in tq.origins], dtype=np.int64)
    first_ids = np.array(tq._first_ids, dtype=np.int64).reshape(tq.first.n_edges, n2)
    second_ids = np.array(tq._second_ids, dtype=np.int64).reshape(tq.first.n_vertices, tq.second.n_edges)
    return tails, heads, kinds, factor_edge, first_ids, second_ids


def normal_form_counts(tq: TensorQuiverMap, source: tuple[int, int], max_len: int) -> np.ndarray:
    """``C[v, l]``: distinct normal forms of length ``l`` from ``source`` to product vertex ``v``.

    Every path of the tensor quiver up to ``max_len`` is enumerated and
    normalized, so this is independent of the factor-side counting.
    """
    if max_len < 0:
        raise QuiverError("max_len must be >= 0")
    s = tq.vertex_index(tq.first.check_vertex(source[0]), tq.second.check_vertex(source[1]))
    tails, heads, kinds, fe, fids, sids = _tensor_arrays(tq)
    args = (tq.quiver.n_vertices, tq.second.n_vertices, tails, heads, kinds, fe, fids, sids, s, max_len)
    try:
        return _accel.kernels.normal_form_counts(*args)
    except OverflowError:
        return _accel._kernels_py.normal_form_counts(*args)


def count_paths_mod_ideal(tq: TensorQuiverMap, source: tuple[int, int], target: tuple[int, int],
                          max_len: int) -> int:
    t = tq.vertex_index(tq.first.check_vertex(target[0]), tq.second.check_vertex(target[1]))
    return int(normal_form_counts(tq, source, max_len)[t].sum())


def _counts_by_length(q: Quiver, source: int, target: int, max_len: int) -> list[int]:
    a = q.adjacency()
    v = np.zeros(q.n_vertices, dtype=object)
    v[source] = 1
    out = []
    for _ in range(max_len + 1):
        out.append(int(v[target]))
        v = a.astype(object) @ v
    return out


def factored_count(tq: TensorQuiverMap, source: tuple[int, int], target: tuple[int, int],
                   max_len: int) -> int:
    """``sum_{a+b<=L} #paths_{Q'}(i->k, a) * #paths_{Q''}(j->l, b)`` from adjacency powers."""
    c1 = _counts_by_length(tq.first, source[0], target[0], max_len)
    c2 = _counts_by_length(tq.second, source[1], target[1], max_len)
    return sum(c1[a] * c2[b] for a in range(max_len + 1) for b in range(max_len + 1 - a))

