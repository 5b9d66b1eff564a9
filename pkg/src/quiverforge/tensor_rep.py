"""Tensor products, duals and restriction along quiver operations."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .path_algebra import CommutationGenerator, commutation_generators
from .quiver import Correspondence, QuiverError, TensorQuiverMap, opposite, tensor_quiver
from .representation import Representation, StabilityData, as_fraction


@dataclass(frozen=True)
class TensorRepresentation:
    rep: Representation
    first: Representation
    second: Representation
    tq: TensorQuiverMap
    generators: tuple[CommutationGenerator, ...]

    def relations(self):
        return [g.relation() for g in self.generators]


def tensor(a: Representation, b: Representation, tq: TensorQuiverMap | None = None) -> TensorRepresentation:
    """Edge ``(alpha, j)`` carries ``phi_alpha (x) I``, edge ``(i, beta)`` carries ``I (x) psi_beta``.

    The first factor indexes the slow axis of every Kronecker product.
    """
    if tq is None:
        tq = tensor_quiver(a.quiver, b.quiver)
    elif tq.first != a.quiver or tq.second != b.quiver:
        raise QuiverError("tensor quiver does not match the factors")
    dims = [a.dims[i] * b.dims[j] for i, j in tq.vertex_pairs]
    maps = []
    for kind, x, y in tq.origins:
        if kind == 0:
            maps.append(np.kron(a.maps[x], np.eye(b.dims[y])))
        else:
            maps.append(np.kron(np.eye(a.dims[x]), b.maps[y]))
    rep = Representation(tq.quiver, dims, maps)
    return TensorRepresentation(rep, a, b, tq, tuple(commutation_generators(tq)))


def dual(rep: Representation) -> Representation:
    """Representation of the opposite quiver with maps ``-phi^T`` (plain transpose)."""
    return Representation(opposite(rep.quiver), rep.dims, [-m.T for m in rep.maps])


def restrict_along(rep: Representation, corr: Correspondence) -> Representation:
    """Pull ``rep`` back along a collapse/clone/delete correspondence.

    Merged vertices carry the direct sum of the old spaces, a collapsed edge
    carries the sum of the bundled maps embedded blockwise, clones copy maps
    and deleted edges are dropped.
    """
    if corr.source != rep.quiver:
        raise QuiverError("correspondence was built for a different quiver")
    offsets = []
    dims = []
    for olds in corr.vertex_sources:
        off, acc = {}, 0
        for o in olds:
            off[o] = acc
            acc += rep.dims[o]
        offsets.append(off)
        dims.append(acc)
    maps = []
    for e, olds in zip(corr.target.edges, corr.edge_sources):
        m = np.zeros((dims[e.head], dims[e.tail]), dtype=complex)
        for o in olds:
            oe = rep.quiver.edges[o]
            r0, c0 = offsets[e.head][oe.head], offsets[e.tail][oe.tail]
            blk = rep.maps[o]
            m[r0:r0 + blk.shape[0], c0:c0 + blk.shape[1]] += blk
        maps.append(m)
    return Representation(corr.target, dims, maps)


# -- stability parameter transport ---------------------------------------------

def tensor_theta(s1: StabilityData, s2: StabilityData, tq: TensorQuiverMap) -> StabilityData:
    """``sigma_(i,j) = s'_i s''_j`` and ``theta_(i,j) = theta'_i s''_j + theta''_j s'_i``."""
    if len(s1.theta) != tq.first.n_vertices or len(s2.theta) != tq.second.n_vertices:
        raise QuiverError("stability data does not match the tensor factors")
    theta = [s1.theta[i] * s2.sigma[j] + s2.theta[j] * s1.sigma[i] for i, j in tq.vertex_pairs]
    sigma = [s1.sigma[i] * s2.sigma[j] for i, j in tq.vertex_pairs]
    return StabilityData(tuple(theta), tuple(sigma))


def tensor_theta_linear(theta1: Sequence, theta2: Sequence, tq: TensorQuiverMap) -> tuple[Fraction, ...]:
    return tensor_theta(StabilityData(tuple(theta1)), StabilityData(tuple(theta2)), tq).theta


def isotropy_constant(rep: Representation, edges: Sequence[int], tol: float = 1e-10) -> float | None:
    """``tau`` with ``psi psi^* = tau I`` and ``psi^* psi = tau I`` for ``psi`` the sum of the maps.

    Returns ``None`` when either product is not scalar within ``tol``.
    """
    edges = list(edges)
    if not edges:
        raise QuiverError("empty edge set")
    psi = sum(rep.maps[e] for e in edges)
    left, right = psi @ psi.conj().T, psi.conj().T @ psi
    taus = []
    for m in (left, right):
        if m.size == 0:
            continue
        t = np.trace(m).real / m.shape[0]
        if np.linalg.norm(m - t * np.eye(m.shape[0])) > tol:
            return None
        taus.append(t)
    if len(taus) == 2 and abs(taus[0] - taus[1]) > tol:
        return None
    return float(taus[0]) if taus else 0.0


def transported_theta(s: StabilityData, corr: Correspondence, tau=None) -> StabilityData:
    """Stability parameter on the operated quiver.

    * collapse_vertices: members of a group must share theta, which is kept;
    * collapse_edges: head shifts by ``-tau``, tail by ``+tau``;
    * delete_edge: head ``+tau``, tail ``-tau``; clone_edge: head ``-tau``, tail ``+tau``;
    * clone_vertex / delete_vertex: surviving or copied vertices keep their theta.
    """
    q = corr.source
    if len(s.theta) != q.n_vertices:
        raise QuiverError("stability data does not match the source quiver")
    theta = []
    sigma = []
    for olds in corr.vertex_sources:
        vals = {s.theta[o] for o in olds}
        if len(vals) != 1:
            raise QuiverError("collapsed vertices must share the same theta")
        theta.append(s.theta[olds[0]])
        sigma.append(s.sigma[olds[0]])
    if corr.kind in ("collapse_edges", "delete_edge", "clone_edge"):
        if tau is None:
            raise QuiverError(f"{corr.kind} needs the isotropy constant tau")
        tau = as_fraction(tau)
        e = q.edges[corr.operands[0]]
        h, t = corr.vertex_map[e.head], corr.vertex_map[e.tail]
        sign = 1 if corr.kind == "delete_edge" else -1
        theta[h] += sign * tau
        theta[t] -= sign * tau
    return StabilityData(tuple(theta), tuple(sigma))


def second_sum_permutation(c_dim: int, a_dim: int, b_dim: int) -> np.ndarray:
    """Permutation taking ``C (x) (A + B)`` coordinates to ``(C (x) A) + (C (x) B)``.

    ``out[k]`` is the index in ``C (x) (A + B)`` of the ``k``-th basis vector
    of the direct sum.
    """
    n = a_dim + b_dim
    first = [k * n + l for k in range(c_dim) for l in range(a_dim)]
    second = [k * n + a_dim + l for k in range(c_dim) for l in range(b_dim)]
    return np.array(first + second, dtype=int)
