"""Semi-invariants of thin representations of the Kronecker diamond ``Q_n (x) Q_m``.

Vertices are ordered (source, top, bottom, sink), i.e. the product pairs
``(0,0), (0,1), (1,0), (1,1)`` with 0/1 the tail/head of each factor:

* ``x`` (n arms) goes source -> bottom;
* ``y`` (m arms) goes bottom -> sink;
* ``w`` (m arms) goes source -> top;
* ``z`` (n arms) goes top -> sink.

The semi-invariant monomials are ``s_ij = x_i y_j`` and ``t_kl = w_k z_l``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quiver import QuiverError, TensorQuiverMap, kronecker_quiver, tensor_quiver
from .representation import Representation


@dataclass(frozen=True)
class DiamondInvariants:
    s: np.ndarray   # n x m
    t: np.ndarray   # m x n

    def __post_init__(self):
        s = np.asarray(self.s, dtype=complex)
        t = np.asarray(self.t, dtype=complex)
        if s.ndim != 2 or t.ndim != 2:
            raise QuiverError("invariant matrices must be two-dimensional")
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(t))):
            raise QuiverError("invariants must be finite")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)

    @property
    def n(self) -> int:
        return self.s.shape[0]

    @property
    def m(self) -> int:
        return self.s.shape[1]


@dataclass(frozen=True)
class DiamondArms:
    x: np.ndarray
    y: np.ndarray
    w: np.ndarray
    z: np.ndarray


def diamond_map(n: int, m: int) -> TensorQuiverMap:
    return tensor_quiver(kronecker_quiver(n), kronecker_quiver(m))


def _diamond_sizes(rep: Representation) -> tuple[int, int]:
    q = rep.quiver
    if q.n_vertices != 4:
        raise QuiverError("not a Kronecker diamond")
    n = sum(1 for e in q.edges if (e.tail, e.head) == (0, 2))
    m = sum(1 for e in q.edges if (e.tail, e.head) == (0, 1))
    if n == 0 or m == 0 or diamond_map(n, m).quiver != q:
        raise QuiverError("not a Kronecker diamond Q_n (x) Q_m")
    return n, m


def diamond_arms(rep: Representation) -> DiamondArms:
    if any(d != 1 for d in rep.dims):
        raise QuiverError("diamond invariants need a thin representation with all dimensions 1")
    n, m = _diamond_sizes(rep)
    tq = diamond_map(n, m)
    val = [complex(mat[0, 0]) for mat in rep.maps]
    x = np.array([val[tq.first_edge(a, 0)] for a in range(n)])
    z = np.array([val[tq.first_edge(a, 1)] for a in range(n)])
    w = np.array([val[tq.second_edge(0, b)] for b in range(m)])
    y = np.array([val[tq.second_edge(1, b)] for b in range(m)])
    return DiamondArms(x, y, w, z)


def diamond_from_arms(x, y, w, z) -> Representation:
    x, y, w, z = (np.asarray(v, dtype=complex).ravel() for v in (x, y, w, z))
    n, m = len(x), len(y)
    if len(z) != n or len(w) != m:
        raise QuiverError("x, z need n entries and y, w need m entries")
    tq = diamond_map(n, m)
    maps = [None] * tq.quiver.n_edges
    for a in range(n):
        maps[tq.first_edge(a, 0)] = [[x[a]]]
        maps[tq.first_edge(a, 1)] = [[z[a]]]
    for b in range(m):
        maps[tq.second_edge(0, b)] = [[w[b]]]
        maps[tq.second_edge(1, b)] = [[y[b]]]
    return Representation(tq.quiver, (1, 1, 1, 1), maps)


def diamond_invariants(rep: Representation) -> DiamondInvariants:
    a = diamond_arms(rep)
    return DiamondInvariants(np.outer(a.x, a.y), np.outer(a.w, a.z))


def _max_minor(a: np.ndarray) -> float:
    r, c = a.shape
    if r < 2 or c < 2:
        return 0.0
    best = 0.0
    for i1 in range(r):
        for i2 in range(i1 + 1, r):
            # all column pairs for this row pair at once
            m = np.outer(a[i1], a[i2]) - np.outer(a[i2], a[i1])
            best = max(best, float(np.abs(m).max()))
    return best


def segre_quadric_residual(inv: DiamondInvariants) -> float:
    """Largest absolute 2x2 minor of ``s`` and of ``t``."""
    return max(_max_minor(inv.s), _max_minor(inv.t))


def diagonal_residual(inv: DiamondInvariants) -> float:
    """``max |s_ij - t_ji|``."""
    if inv.s.shape != inv.t.T.shape:
        raise QuiverError(f"s is {inv.s.shape} but t is {inv.t.shape}")
    return float(np.abs(inv.s - inv.t.T).max(initial=0.0))


@dataclass(frozen=True)
class SegreCheck:
    in_image: bool
    quadric_residual: float
    diagonal_residual: float
    factors: tuple[np.ndarray, np.ndarray] | None

    def to_json(self) -> dict:
        out = {"quadric_residual": self.quadric_residual,
               "diagonal_residual": self.diagonal_residual,
               "in_image": self.in_image, "factors": None}
        if self.factors is not None:
            out["factors"] = {"z": [[v.real, v.imag] for v in self.factors[0]],
                              "w": [[v.real, v.imag] for v in self.factors[1]]}
        return out


def reconstruct_factors(inv: DiamondInvariants) -> tuple[np.ndarray, np.ndarray]:
    """Rank-one factors ``(z, w)`` with ``s ~ outer(z, w)``, pivoting on the largest entry."""
    s = inv.s
    if not np.any(s):
        raise QuiverError("all-zero invariants: the input is unstable")
    i, j = np.unravel_index(np.argmax(np.abs(s)), s.shape)
    z = s[:, j].copy()
    w = s[i, :] / s[i, j]
    return z, w


def in_segre_image(rep: Representation, tol: float = 1e-10) -> SegreCheck:
    inv = diamond_invariants(rep)
    if not np.any(inv.s) and not np.any(inv.t):
        raise QuiverError("all-zero invariants: the input is unstable")
    q, d = segre_quadric_residual(inv), diagonal_residual(inv)
    ok = q <= tol and d <= tol
    factors = reconstruct_factors(inv) if ok else None
    return SegreCheck(bool(ok), q, d, factors)


def tensor_image_invariants(z, w) -> DiamondInvariants:
    """Invariants of the tensor of the Kronecker representations ``z`` and ``w``."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return DiamondInvariants(np.outer(z, w), np.outer(w, z))


def segre_dimensions(n: int, m: int) -> dict:
    """Real dimension of ``P^{n-1} x P^{m-1}`` computed two ways.

    ``product`` is ``2(1 - <d',d'>) + 2(1 - <d'',d''>)`` and ``euler_only`` is
    ``-2(<d',d'> + <d'',d''>)`` with ``d = (1, 1)`` on both Kronecker factors.
    They differ by 4; the first matches the tangent-space count.
    """
    e1, e2 = 2 - n, 2 - m
    return {"product": 2 * (1 - e1) + 2 * (1 - e2), "euler_only": -2 * (e1 + e2)}
