"""Moment-map bracket, vortex residuals and the Kempf-Ness gradient flow.

Sign convention: the vortex residual is ``[phi, phi^*]_i - kappa * theta'_i * Id``
with ``kappa = -1`` by default.  With that choice the Kronecker representation
``z != 0`` is a solution for ``theta' = (1, -1)`` exactly when ``|z| = 1``,
which agrees with slope stability of the same representation.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .quiver import QuiverError, enumerate_paths
from .representation import Representation, balance_theta, evaluate_path
from .tensor_rep import tensor

log = logging.getLogger(__name__)

KAPPA = -1
COLLAPSE_NORM = 1e-14


class PreconditionError(QuiverError):
    """An operation's documented precondition does not hold."""


class NonFiniteError(QuiverError):
    """The flow produced NaN or infinite values."""


def inner_product(a: Representation, b: Representation) -> complex:
    """``H(a, b) = sum_alpha Tr(a_alpha b_alpha^*)``; conjugate-linear in ``b``."""
    if a.quiver != b.quiver or a.dims != b.dims:
        raise QuiverError("inner product needs equal quivers and dimension vectors")
    return complex(sum(np.vdot(y, x) for x, y in zip(a.maps, b.maps)))


def _bracket_maps(q, dims, maps) -> list[np.ndarray]:
    out = [np.zeros((d, d), dtype=complex) for d in dims]
    for e in q.edges:
        m = maps[e.id]
        out[e.head] += m @ m.conj().T
        out[e.tail] -= m.conj().T @ m
    return out


def bracket(rep: Representation) -> list[np.ndarray]:
    """``[phi, phi^*]_i = sum_{h a = i} phi_a phi_a^* - sum_{t a = i} phi_a^* phi_a``."""
    return _bracket_maps(rep.quiver, rep.dims, rep.maps)


def _as_floats(theta) -> np.ndarray:
    return np.array([float(t) for t in theta], dtype=float)


def check_balanced(theta_prime, dims, tol: float = 1e-12):
    th = _as_floats(theta_prime)
    if len(th) != len(dims):
        raise QuiverError("theta' length does not match the quiver")
    scale = max(1.0, float(np.abs(th).max(initial=0.0)) * max(1, sum(dims)))
    if abs(float(np.dot(th, dims))) > tol * scale:
        raise PreconditionError("theta' . d must vanish; the trace of the vortex equations forces it")
    return th


def vortex_residual(rep: Representation, theta_prime, kappa: int = KAPPA) -> list[np.ndarray]:
    """``R_i = [phi, phi^*]_i - kappa * theta'_i * Id``."""
    if kappa not in (1, -1):
        raise QuiverError("kappa must be +1 or -1")
    th = check_balanced(theta_prime, rep.dims)
    br = bracket(rep)
    return [b - kappa * t * np.eye(b.shape[0]) for b, t in zip(br, th)]


def residual_norm(res: Sequence[np.ndarray]) -> float:
    return max((float(np.linalg.norm(r)) for r in res), default=0.0)


def energy(rep: Representation, theta_prime, kappa: int = KAPPA) -> float:
    return float(sum(np.linalg.norm(r) ** 2 for r in vortex_residual(rep, theta_prime, kappa)))


def infinitesimal_action(rep: Representation, xs: Sequence[np.ndarray]) -> list[np.ndarray]:
    """``X . phi = (X_h phi_a - phi_a X_t)``."""
    return [xs[e.head] @ rep.maps[e.id] - rep.maps[e.id] @ xs[e.tail] for e in rep.quiver.edges]


def energy_derivative(rep: Representation, theta_prime, xs: Sequence[np.ndarray], kappa: int = KAPPA) -> float:
    """Derivative of the energy along ``eps -> exp(eps X) . phi`` at ``eps = 0`` for Hermitian ``X``.

    Equals ``4 Re H(X . phi, R . phi)``.
    """
    res = vortex_residual(rep, theta_prime, kappa)
    xa = infinitesimal_action(rep, xs)
    ra = infinitesimal_action(rep, res)
    return 4.0 * float(sum(np.vdot(r, x).real for x, r in zip(xa, ra)))


def _hermitian_exp(r: np.ndarray, eps: float) -> tuple[np.ndarray, np.ndarray]:
    """``exp(-eps R)`` and its inverse via eigendecomposition."""
    if r.shape[0] == 0:
        return r, r
    w, v = np.linalg.eigh(r)
    vh = v.conj().T
    return (v * np.exp(-eps * w)) @ vh, (v * np.exp(eps * w)) @ vh


def gauge_step(rep: Representation, theta_prime, eps: float, kappa: int = KAPPA) -> Representation:
    """One flow step ``phi_a <- exp(-eps R_h) phi_a exp(eps R_t)``."""
    res = vortex_residual(rep, theta_prime, kappa)
    ex = [_hermitian_exp(r, eps) for r in res]
    return rep.with_maps([ex[e.head][0] @ rep.maps[e.id] @ ex[e.tail][1] for e in rep.quiver.edges])


@dataclass(frozen=True)
class FlowConfig:
    step: float = 0.05
    backtrack: float = 0.5
    tol: float = 1e-8
    max_iters: int = 50_000
    seed: int = 0
    kappa: int = KAPPA
    growth: float = 1.2
    grow_after: int = 5
    history_every: int = 100
    # certification: a converged limit counts as a genuine solution only if
    # its residual is this small relative to max(|phi|^2, |theta'|)
    relative_tol: float = 1e-4

    def __post_init__(self):
        if not self.step > 0:
            raise QuiverError("step must be positive")
        if not 0 < self.backtrack < 1:
            raise QuiverError("backtrack must lie in (0, 1)")
        if not self.tol > 0:
            raise QuiverError("tol must be positive")
        if self.kappa not in (1, -1):
            raise QuiverError("kappa must be +1 or -1")
        if self.max_iters < 0:
            raise QuiverError("max_iters must be >= 0")


@dataclass(frozen=True)
class FlowReport:
    status: str                 # converged | max_iters | collapsed_to_zero | stalled
    iterations: int
    residual: float
    energy_history: tuple[float, ...]
    cycle_trace_drift: float
    kappa: int
    norm_sq: float
    gauge_condition: float
    final_step: float
    rejected_steps: int = 0
    notes: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "iterations": self.iterations,
            "residual": self.residual,
            "kappa": self.kappa,
            "cycle_trace_drift": self.cycle_trace_drift,
            "norm_sq": self.norm_sq,
            "gauge_condition": self.gauge_condition,
            "energy_history": list(self.energy_history),
        }


def cycle_traces(rep: Representation, max_len: int = 4) -> np.ndarray:
    """Traces of all oriented cycles of length ``1..max_len``; invariant under GL(d)."""
    vals = []
    q = rep.quiver
    for v in range(q.n_vertices):
        if rep.dims[v] == 0:
            continue
        for p in enumerate_paths(q, v, v, max_len):
            if p.edges:
                vals.append(np.trace(evaluate_path(rep, p)))
    return np.array(vals, dtype=complex)


def cycle_trace_drift(before: Representation, after: Representation, max_len: int = 4) -> float:
    """Max of ``|Tr_after - Tr_before| / max(|Tr_before|, s^k)`` over cycles of length ``k``.

    ``s^2`` is the squared norm of ``before``; the floor keeps near-zero traces
    from inflating the relative error.
    """
    q = before.quiver
    scale = max(np.sqrt(before.norm_sq()), 1e-300)
    drift = 0.0
    for v in range(q.n_vertices):
        if before.dims[v] == 0:
            continue
        for p in enumerate_paths(q, v, v, max_len):
            if not p.edges:
                continue
            a = np.trace(evaluate_path(before, p))
            b = np.trace(evaluate_path(after, p))
            denom = max(abs(a), scale ** p.length)
            drift = max(drift, abs(b - a) / denom)
    return float(drift)


def kempf_ness_flow(rep: Representation, theta_prime, cfg: FlowConfig = FlowConfig()) -> tuple[Representation, FlowReport]:
    """Descend ``f = sum_i |R_i|^2`` inside the complexified orbit of ``rep``.

    Steps are ``phi_a <- exp(-eps R_h) phi_a exp(eps R_t)`` with ``eps``
    halved until ``f`` does not increase and grown after a run of accepted
    steps.  The accumulated gauge transformation is tracked so callers can
    see how far into the orbit the flow travelled.
    """
    th = check_balanced(theta_prime, rep.dims)
    q = rep.quiver
    kappa = cfg.kappa
    maps = [m.copy() for m in rep.maps]
    dims = rep.dims
    eyes = [np.eye(d) for d in dims]
    gauge = [np.eye(d, dtype=complex) for d in dims]
    theta_nonzero = bool(np.any(th != 0))

    def residuals(ms):
        br = _bracket_maps(q, dims, ms)
        return [b - kappa * t * i for b, t, i in zip(br, th, eyes)]

    def energy_of(res):
        return float(sum(np.vdot(r, r).real for r in res))

    res = residuals(maps)
    f = energy_of(res)
    history = [f]
    eps = cfg.step
    accepted_run = 0
    rejected = 0
    status = "max_iters"
    it = 0
    for it in range(cfg.max_iters + 1):
        rnorm = residual_norm(res)
        if not np.isfinite(f):
            raise NonFiniteError(f"non-finite energy at iteration {it}")
        if rnorm <= cfg.tol:
            status = "converged"
            break
        nsq = float(sum(np.vdot(m, m).real for m in maps))
        if theta_nonzero and nsq < COLLAPSE_NORM:
            status = "collapsed_to_zero"
            break
        grad_sq = float(sum(np.vdot(x, x).real for x in
                            (res[e.head] @ maps[e.id] - maps[e.id] @ res[e.tail] for e in q.edges)))
        if grad_sq <= 1e-30 * max(1.0, f):
            status = "stalled"
            break
        if it == cfg.max_iters:
            break
        while True:
            ex = [_hermitian_exp(r, eps) for r in res]
            trial = [ex[e.head][0] @ maps[e.id] @ ex[e.tail][1] for e in q.edges]
            tres = residuals(trial)
            tf = energy_of(tres)
            if np.isfinite(tf) and tf <= f:
                break
            eps *= cfg.backtrack
            accepted_run = 0
            rejected += 1
            if eps < 1e-300:
                status = "stalled"
                break
        if status == "stalled":
            break
        maps, res, f = trial, tres, tf
        gauge = [x[0] @ g for x, g in zip(ex, gauge)]
        accepted_run += 1
        if accepted_run >= cfg.grow_after:
            eps *= cfg.growth
            accepted_run = 0
        if cfg.history_every and (it + 1) % cfg.history_every == 0:
            history.append(f)
    if history[-1] != f:
        history.append(f)
    out = rep.with_maps(maps)
    conds = [np.linalg.cond(g) for g in gauge if g.size]
    report = FlowReport(
        status=status,
        iterations=it,
        residual=residual_norm(res),
        energy_history=tuple(history),
        cycle_trace_drift=cycle_trace_drift(rep, out),
        kappa=kappa,
        norm_sq=out.norm_sq(),
        gauge_condition=float(max(conds, default=1.0)),
        final_step=eps,
        rejected_steps=rejected,
    )
    log.debug("flow finished: %s after %d iterations, residual %.3e", status, it, report.residual)
    return out, report


@dataclass(frozen=True)
class Certificate:
    verdict: str                 # polystable | not_polystable_evidence | inconclusive
    theta_prime: tuple
    report: FlowReport
    limit: Representation
    relative_residual: float


def certify_polystable(rep: Representation, theta, cfg: FlowConfig = FlowConfig()) -> Certificate:
    """Balance ``theta``, run the flow and classify the outcome.

    ``polystable`` needs a converged flow whose limit is a genuine solution,
    i.e. its residual is small relative to ``max(|phi|^2, |theta'|)``.  When
    ``theta' = 0`` the input is first scaled to unit norm so that a flow
    shrinking towards zero (a limit outside the orbit) is visible.
    """
    if sum(rep.dims) == 0:
        raise QuiverError("the zero-dimensional representation has no stability")
    theta_prime = balance_theta(theta, rep.dims)
    th = _as_floats(theta_prime)
    start = rep
    if not np.any(th) and rep.norm_sq() > 0:
        start = rep.with_maps([m / np.sqrt(rep.norm_sq()) for m in rep.maps])
    limit, report = kempf_ness_flow(start, theta_prime, cfg)
    scale = max(report.norm_sq, float(np.abs(th).max(initial=0.0)))
    rel = report.residual / scale if scale > 0 else (0.0 if report.residual == 0 else np.inf)
    if report.status == "converged":
        verdict = "polystable" if rel <= cfg.relative_tol else "not_polystable_evidence"
    elif report.status in ("collapsed_to_zero", "stalled"):
        verdict = "not_polystable_evidence"
    else:
        verdict = "inconclusive"
    return Certificate(verdict, tuple(theta_prime), report, limit, float(rel))


# -- tangent space of the moduli space -------------------------------------------

def _linear_operator_matrix(rep: Representation, func) -> np.ndarray:
    """Real matrix of a real-linear map on ``Rep(Q, d)``."""
    shapes = [m.shape for m in rep.maps]
    sizes = [a * b for a, b in shapes]
    n = sum(sizes)
    cols = []
    for k in range(2 * n):
        vec = np.zeros(n, dtype=complex)
        vec[k % n] = 1.0 if k < n else 1j
        mats, off = [], 0
        for (a, b), s in zip(shapes, sizes):
            mats.append(vec[off:off + s].reshape(a, b))
            off += s
        out = func(mats)
        flat = np.concatenate([o.ravel() for o in out]) if out else np.zeros(0, dtype=complex)
        cols.append(np.concatenate([flat.real, flat.imag]))
    return np.array(cols).T if cols else np.zeros((0, 0))


def moduli_tangent_dim(rep: Representation, theta_prime, kappa: int = KAPPA, tol: float = 1e-8,
                       rank_rtol: float = 1e-7) -> int:
    """Real dimension of ``ker d1 ∩ ker d0^*`` at a vortex solution.

    ``d1`` linearizes the bracket and ``d0^*(A)_i = sum_{h a=i} A_a phi_a^* -
    sum_{t a=i} phi_a^* A_a`` is the adjoint of the infinitesimal action.
    """
    r = residual_norm(vortex_residual(rep, theta_prime, kappa))
    if r > tol:
        raise PreconditionError(f"vortex residual {r:.3e} exceeds {tol:.1e}")
    q, phi = rep.quiver, rep.maps

    def d1(a):
        out = [np.zeros((d, d), dtype=complex) for d in rep.dims]
        for e in q.edges:
            p, x = phi[e.id], a[e.id]
            out[e.head] += p @ x.conj().T + x @ p.conj().T
            out[e.tail] -= p.conj().T @ x + x.conj().T @ p
        return out

    def d0_adj(a):
        out = [np.zeros((d, d), dtype=complex) for d in rep.dims]
        for e in q.edges:
            p, x = phi[e.id], a[e.id]
            out[e.head] += x @ p.conj().T
            out[e.tail] -= p.conj().T @ x
        return out

    m = _linear_operator_matrix(rep, lambda a: d1(a) + d0_adj(a))
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    rank = int(np.sum(s > rank_rtol * s[0])) if s.size and s[0] > 0 else 0
    return m.shape[1] - rank


# -- tensor products of solutions -------------------------------------------------

@dataclass(frozen=True)
class TensorPolystabilityReport:
    passed: bool
    residual: float
    bound: float
    factor_residuals: tuple[float, float]
    theta: tuple
    kappa: int

    def to_json(self) -> dict:
        return {"passed": self.passed, "residual": self.residual, "bound": self.bound,
                "factor_residuals": list(self.factor_residuals),
                "theta": [str(t) for t in self.theta], "kappa": self.kappa}


def verify_tensor_polystability(a: Representation, theta_a, b: Representation, theta_b,
                                tol: float = 1e-10, kappa: int = KAPPA) -> TensorPolystabilityReport:
    """Check that the tensor of two vortex solutions solves the equations at ``theta'_i + theta''_j``."""
    ra = residual_norm(vortex_residual(a, theta_a, kappa))
    rb = residual_norm(vortex_residual(b, theta_b, kappa))
    if ra > tol or rb > tol:
        raise PreconditionError(f"factor residuals {ra:.3e}, {rb:.3e} exceed tol {tol:.1e}")
    t = tensor(a, b)
    theta = tuple(theta_a[i] + theta_b[j] for i, j in t.tq.vertex_pairs)
    r = residual_norm(vortex_residual(t.rep, theta, kappa))
    bound = 2.0 * max(np.sqrt(a.norm_sq()), np.sqrt(b.norm_sq()), 1.0) * tol
    return TensorPolystabilityReport(bool(r <= bound), r, bound, (ra, rb), theta, kappa)
