"""Complex representations of quivers, relations, slopes and thin stability."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

import numpy as np

from . import _accel
from .quiver import Path, Quiver, QuiverError, check_dimension_vector

DEFAULT_TOL = 1e-10
MAX_THIN_VERTICES = 24


class Representation:
    """Dimension vector plus one ``d_head x d_tail`` complex matrix per edge."""

    __slots__ = ("quiver", "dims", "maps")

    def __init__(self, quiver: Quiver, dims: Sequence[int], maps: Mapping[int, np.ndarray] | Sequence | None = None):
        self.quiver = quiver
        self.dims = check_dimension_vector(quiver, dims)
        if maps is None:
            maps = {}
        if not isinstance(maps, Mapping):
            maps = dict(enumerate(maps))
        out = []
        for e in quiver.edges:
            shape = (self.dims[e.head], self.dims[e.tail])
            m = maps.get(e.id)
            m = np.zeros(shape, dtype=complex) if m is None else np.array(m, dtype=complex)
            if m.size == 0:
                m = m.reshape(shape) if 0 in shape else m
            if m.shape != shape:
                raise QuiverError(f"edge {e.id}: matrix shape {m.shape}, expected {shape}")
            if not np.all(np.isfinite(m)):
                raise QuiverError(f"edge {e.id}: non-finite entries")
            m.setflags(write=False)
            out.append(m)
        extra = set(maps) - set(range(quiver.n_edges))
        if extra:
            raise QuiverError(f"matrices given for unknown edges {sorted(extra)}")
        self.maps = tuple(out)

    def __getitem__(self, e: int) -> np.ndarray:
        return self.maps[e]

    def norm_sq(self) -> float:
        return float(sum(np.vdot(m, m).real for m in self.maps))

    def with_maps(self, maps: Sequence[np.ndarray]) -> "Representation":
        return Representation(self.quiver, self.dims, list(maps))

    def act(self, g: Sequence[np.ndarray]) -> "Representation":
        """``g . phi = (g_h phi g_t^{-1})``."""
        inv = [np.linalg.inv(x) if x.size else x for x in g]
        return self.with_maps([g[e.head] @ self.maps[e.id] @ inv[e.tail] for e in self.quiver.edges])

    def allclose(self, other: "Representation", atol=1e-12) -> bool:
        return (self.dims == other.dims and self.quiver == other.quiver
                and all(np.allclose(a, b, atol=atol, rtol=0) for a, b in zip(self.maps, other.maps)))

    def __repr__(self):
        return f"Representation(dims={self.dims}, edges={self.quiver.n_edges})"


def zero_representation(q: Quiver, dims: Sequence[int]) -> Representation:
    return Representation(q, dims)


def evaluate_path(rep: Representation, p: Path) -> np.ndarray:
    """``phi_{a_1} ... phi_{a_k}``; identity for a trivial path."""
    if p.quiver != rep.quiver:
        raise QuiverError("path belongs to a different quiver")
    if not p.edges:
        return np.eye(rep.dims[p.vertex], dtype=complex)
    out = rep.maps[p.edges[-1]]
    for e in reversed(p.edges[:-1]):
        out = rep.maps[e] @ out
    return out


def relation_value(rep: Representation, rel) -> np.ndarray:
    val = np.zeros((rep.dims[rel.head], rep.dims[rel.tail]), dtype=complex)
    for c, p in rel.terms:
        val = val + complex(c) * evaluate_path(rep, p)
    return val


def satisfies_relations(rep: Representation, rels, tol: float = DEFAULT_TOL) -> tuple[bool, list[float]]:
    """Frobenius norm of ``sum c_p phi_p`` for every relation, and whether all are ``<= tol``."""
    residuals = [float(np.linalg.norm(relation_value(rep, r))) for r in rels]
    return all(r <= tol for r in residuals), residuals


# -- slopes and stability parameters ------------------------------------------

def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    return Fraction(float(x))


@dataclass(frozen=True)
class StabilityData:
    """Per-vertex ``sigma > 0`` and ``theta``.  ``sigma`` is 1 in the linear case."""
    theta: tuple[Fraction, ...]
    sigma: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(as_fraction(t) for t in self.theta))
        sigma = self.sigma if self.sigma is not None else (1,) * len(self.theta)
        sigma = tuple(as_fraction(s) for s in sigma)
        if len(sigma) != len(self.theta):
            raise QuiverError("sigma and theta lengths differ")
        if any(s <= 0 for s in sigma):
            raise QuiverError("sigma must be positive")
        object.__setattr__(self, "sigma", sigma)

    def balanced(self, d: Sequence[int]) -> tuple[Fraction, ...]:
        return balance_theta(self.theta, d)


def slope(d: Sequence[int], theta: Sequence) -> Fraction:
    """``sum theta_i d_i / sum d_i`` in exact arithmetic."""
    if len(d) != len(theta):
        raise QuiverError("theta and dimension vector lengths differ")
    total = sum(int(x) for x in d)
    if total == 0:
        raise QuiverError("slope of the zero dimension vector is undefined")
    return sum(as_fraction(t) * int(x) for t, x in zip(theta, d)) / total


def balance_theta(theta: Sequence, d: Sequence[int]) -> tuple[Fraction, ...]:
    """``theta_i * sum_j d_j - sum_j theta_j d_j``; always orthogonal to ``d``."""
    if len(d) != len(theta):
        raise QuiverError("theta and dimension vector lengths differ")
    th = [as_fraction(t) for t in theta]
    total = sum(int(x) for x in d)
    if total == 0:
        raise QuiverError("cannot balance against the zero dimension vector")
    dot = sum(t * int(x) for t, x in zip(th, d))
    return tuple(t * total - dot for t in th)


def direct_sum(a: Representation, b: Representation) -> Representation:
    if a.quiver != b.quiver:
        raise QuiverError("direct sum needs a common quiver")
    maps = []
    for e in a.quiver.edges:
        x, y = a.maps[e.id], b.maps[e.id]
        m = np.zeros((x.shape[0] + y.shape[0], x.shape[1] + y.shape[1]), dtype=complex)
        m[:x.shape[0], :x.shape[1]] = x
        m[x.shape[0]:, x.shape[1]:] = y
        maps.append(m)
    return Representation(a.quiver, [p + q for p, q in zip(a.dims, b.dims)], maps)


# -- subrepresentations -------------------------------------------------------

@dataclass(frozen=True)
class SubspaceFamily:
    """Column bases ``F_i`` (``d_i x k_i``) of subspaces at every vertex."""
    bases: tuple[np.ndarray, ...]

    @classmethod
    def from_bases(cls, bases: Sequence, dims: Sequence[int], tol: float = DEFAULT_TOL) -> "SubspaceFamily":
        out = []
        for i, (b, d) in enumerate(zip(bases, dims)):
            b = np.zeros((d, 0), dtype=complex) if b is None else np.array(b, dtype=complex).reshape(d, -1)
            if b.shape[1]:
                s = np.linalg.svd(b, compute_uv=False)
                if s[-1] <= tol * max(1.0, s[0]):
                    raise QuiverError(f"basis at vertex {i} is rank deficient")
            out.append(b)
        if len(out) != len(dims):
            raise QuiverError("one basis per vertex is required")
        return cls(tuple(out))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(b.shape[1] for b in self.bases)


def is_subrepresentation(rep: Representation, f: SubspaceFamily, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``phi_a(F_{ta})`` lies in ``F_{ha}`` for every edge, up to ``tol``."""
    if len(f.bases) != rep.quiver.n_vertices:
        raise QuiverError("subspace family does not match the quiver")
    for b, d in zip(f.bases, rep.dims):
        if b.shape[0] != d:
            raise QuiverError("subspace basis has the wrong ambient dimension")
    qs = []
    for b in f.bases:
        q, _ = np.linalg.qr(b) if b.shape[1] else (b, None)
        qs.append(q)
    for e in rep.quiver.edges:
        img = rep.maps[e.id] @ f.bases[e.tail]
        if img.size == 0:
            continue
        q = qs[e.head]
        resid = img - q @ (q.conj().T @ img) if q.shape[1] else img
        if np.linalg.norm(resid) > tol:
            return False
    return True


# -- thin representations -------------------------------------------------------

@dataclass(frozen=True)
class ThinVerdict:
    verdict: str                       # stable | semistable_not_stable | unstable
    witness: tuple[int, ...] | None    # vertices of a destabilizing or equal-slope subrepresentation
    slope: Fraction
    witness_slope: Fraction | None


def _support_data(rep: Representation, zero_tol: float):
    if any(d not in (0, 1) for d in rep.dims):
        raise QuiverError("thin stability needs all dimensions in {0, 1}")
    support = [i for i, d in enumerate(rep.dims) if d == 1]
    if not support:
        raise QuiverError("the zero representation has no slope")
    if len(support) > MAX_THIN_VERTICES:
        raise QuiverError(f"thin stability is limited to {MAX_THIN_VERTICES} support vertices")
    pos = {v: k for k, v in enumerate(support)}
    succ = [0] * len(support)
    for e in rep.quiver.edges:
        if e.tail in pos and e.head in pos and abs(rep.maps[e.id][0, 0]) > zero_tol:
            succ[pos[e.tail]] |= 1 << pos[e.head]
    return support, succ


def thin_stability(rep: Representation, s: StabilityData | Sequence, zero_tol: float = 0.0) -> ThinVerdict:
    """Exact slope stability of a thin representation.

    Subrepresentations are the vertex subsets of the support closed under
    nonzero arrows.  Arrows with ``|phi| <= zero_tol`` count as zero.
    """
    theta = s.theta if isinstance(s, StabilityData) else StabilityData(tuple(s)).theta
    if len(theta) != rep.quiver.n_vertices:
        raise QuiverError("theta length does not match the quiver")
    support, succ = _support_data(rep, zero_tol)
    n = len(support)
    th = [theta[v] for v in support]
    scale = lcm(*[t.denominator for t in th]) if th else 1
    weights = [int(t * scale) for t in th]
    total_slope = Fraction(sum(weights), n * scale)
    if n == 1:
        return ThinVerdict("stable", None, total_slope, None)
    kern = _accel.kernels
    if max(abs(w) for w in weights) * n * n >= 2**62:
        kern = _accel._kernels_py
    best_score, best_mask, zero_mask = kern.scan_closed_subsets(
        np.array(succ, dtype=np.int64), np.array(weights, dtype=np.int64), n)

    def verts(mask):
        return tuple(support[k] for k in range(n) if mask >> k & 1)

    def sl(mask):
        vs = [k for k in range(n) if mask >> k & 1]
        return Fraction(sum(weights[k] for k in vs), len(vs) * scale)

    if best_mask >= 0 and best_score > 0:
        return ThinVerdict("unstable", verts(best_mask), total_slope, sl(best_mask))
    if zero_mask >= 0:
        return ThinVerdict("semistable_not_stable", verts(zero_mask), total_slope, sl(zero_mask))
    return ThinVerdict("stable", None, total_slope, None)


def closed_subsets_bruteforce(rep: Representation, zero_tol: float = 0.0) -> list[tuple[int, ...]]:
    """All proper nonempty arrow-closed subsets of the support (reference enumeration)."""
    from itertools import combinations
    support, _ = _support_data(rep, zero_tol)
    out = []
    for k in range(1, len(support)):
        for sub in combinations(support, k):
            ss = set(sub)
            if all(e.head in ss for e in rep.quiver.edges
                   if e.tail in ss and rep.dims[e.head] == 1 and abs(rep.maps[e.id][0, 0]) > zero_tol):
                out.append(sub)
    return out
