"""Symmetric polynomials, the block permutation ``tau``, the substitution ``phi``
and joint spectra for character varieties of free abelian groups.

Permutations are tuples in one-line notation over ``1..N``.  A permutation
``pi`` acts on a polynomial by the substitution ``x_i <- x_{pi(i)}``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations, product
from math import prod
from typing import Iterable, Mapping, Sequence

import numpy as np

from .quiver import QuiverError

Coeff = Fraction | complex


class PreconditionError(QuiverError):
    pass


# -- permutations ------------------------------------------------------------------

def check_permutation(p: Sequence[int], n: int | None = None) -> tuple[int, ...]:
    p = tuple(int(x) for x in p)
    if n is not None and len(p) != n:
        raise QuiverError(f"permutation {p} is not in S_{n}")
    if sorted(p) != list(range(1, len(p) + 1)):
        raise QuiverError(f"{p} is not a permutation of 1..{len(p)}")
    return p


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """``(p q)(i) = p(q(i))``."""
    if len(p) != len(q):
        raise QuiverError("permutations of different degree")
    return tuple(p[q[i] - 1] for i in range(len(q)))


def identity(n: int) -> tuple[int, ...]:
    return tuple(range(1, n + 1))


def tau(n: int, m: int, sigma: Sequence[int], sigma_p: Sequence[int]) -> tuple[int, ...]:
    """``k m + j -> m (sigma(k+1) - 1) + sigma'(j)`` for ``k < n``, ``1 <= j <= m``."""
    if n < 1 or m < 1:
        raise QuiverError("n and m must be positive")
    return tau_r((n, m), (sigma, sigma_p))


def tau_r(ns: Sequence[int], sigmas: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Block permutation of ``1..prod(ns)`` with the first factor as the slowest index."""
    ns = tuple(int(x) for x in ns)
    if not ns or any(x < 1 for x in ns):
        raise QuiverError("all factor sizes must be positive")
    if len(sigmas) != len(ns):
        raise QuiverError("one permutation per factor is required")
    sigmas = [check_permutation(s, n) for s, n in zip(sigmas, ns)]
    strides = [prod(ns[i + 1:]) for i in range(len(ns))]
    out = []
    for idx in product(*(range(n) for n in ns)):
        out.append(1 + sum((s[k] - 1) * st for s, k, st in zip(sigmas, idx, strides)))
    return tuple(out)


# -- sparse polynomials ---------------------------------------------------------------

def _coeff(c) -> Coeff:
    if isinstance(c, complex):
        return Fraction(c.real) if c.imag == 0 else c
    if isinstance(c, (Fraction, int)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, float):
        return Fraction(c)
    if isinstance(c, (list, tuple)) and len(c) == 2:
        return _coeff(complex(float(c[0]), float(c[1])))
    raise QuiverError(f"unsupported coefficient {c!r}")


class SymPoly:
    """Polynomial in named variable families with sparse exact coefficients."""

    __slots__ = ("families", "terms")

    def __init__(self, families: Sequence[tuple[str, int]], terms: Mapping[tuple, object] | Iterable = ()):
        self.families = tuple((str(name), int(k)) for name, k in families)
        if any(k < 0 for _, k in self.families):
            raise QuiverError("family arity must be nonnegative")
        total = sum(k for _, k in self.families)
        acc: dict[tuple[int, ...], Coeff] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != total or any(e < 0 for e in exp):
                raise QuiverError(f"exponent {exp} does not match total arity {total}")
            acc[exp] = acc.get(exp, 0) + _coeff(c)
        self.terms = {e: c for e, c in acc.items() if c != 0}

    @classmethod
    def _trusted(cls, families: tuple, terms: dict) -> "SymPoly":
        """Build from already normalized, nonzero terms without revalidating."""
        out = cls.__new__(cls)
        out.families = families
        out.terms = terms
        return out

    @property
    def arity(self) -> int:
        return sum(k for _, k in self.families)

    def offset(self, family: int) -> int:
        return sum(k for _, k in self.families[:family])

    @classmethod
    def variable(cls, families, family: int, index: int) -> "SymPoly":
        """The variable ``index`` (0-based) of family ``family``."""
        families = tuple(families)
        total = sum(k for _, k in families)
        exp = [0] * total
        exp[sum(k for _, k in families[:family]) + index] = 1
        return cls(families, {tuple(exp): 1})

    @classmethod
    def constant(cls, families, c=1) -> "SymPoly":
        families = tuple(families)
        return cls(families, {(0,) * sum(k for _, k in families): c})

    def _check(self, other: "SymPoly"):
        if self.families != other.families:
            raise QuiverError("polynomials live in different rings")

    def __add__(self, other: "SymPoly") -> "SymPoly":
        self._check(other)
        return SymPoly(self.families, list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "SymPoly":
        return SymPoly(self.families, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + (-other)

    def scale(self, c) -> "SymPoly":
        c = _coeff(c)
        return SymPoly(self.families, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other: "SymPoly") -> "SymPoly":
        self._check(other)
        out: dict[tuple[int, ...], Coeff] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SymPoly(self.families, out)

    def __eq__(self, other):
        return isinstance(other, SymPoly) and self.families == other.families and self.terms == other.terms

    def __hash__(self):
        return hash((self.families, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def evaluate(self, values: Sequence[complex]) -> complex:
        values = list(values)
        if len(values) != self.arity:
            raise QuiverError("one value per variable is required")
        total = 0
        for e, c in self.terms.items():
            t = complex(c) if isinstance(c, complex) else c
            for v, k in zip(values, e):
                if k:
                    t = t * v ** k
            total += t
        return total

    def __repr__(self):
        return f"SymPoly({self.families}, {len(self.terms)} terms)"


def power_sum(families, family: int, k: int) -> SymPoly:
    families = tuple(families)
    n = families[family][1]
    off = sum(a for _, a in families[:family])
    total = sum(a for _, a in families)
    terms = {}
    for i in range(n):
        exp = [0] * total
        exp[off + i] = k
        terms[tuple(exp)] = 1
    return SymPoly(families, terms)


def elementary_symmetric(families, family: int, k: int) -> SymPoly:
    families = tuple(families)
    n = families[family][1]
    off = sum(a for _, a in families[:family])
    total = sum(a for _, a in families)
    terms = {}
    for idx in combinations(range(n), k):
        exp = [0] * total
        for i in idx:
            exp[off + i] = 1
        terms[tuple(exp)] = 1
    return SymPoly(families, terms)


# -- actions -----------------------------------------------------------------------

def act(p: SymPoly, perms: Mapping[int, Sequence[int]]) -> SymPoly:
    """Apply ``x_i <- x_{pi(i)}`` in each family ``f`` listed in ``perms``."""
    moves = []
    for f, pi in perms.items():
        n = p.families[f][1]
        pi = check_permutation(pi, n)
        moves.append((p.offset(f), pi))
    # permuting exponents is a bijection on monomials, so no terms merge
    return SymPoly._trusted(p.families, {_permute_exp(exp, moves): c for exp, c in p.terms.items()})


def _permute_exp(exp: tuple, moves) -> tuple:
    new = list(exp)
    for off, pi in moves:
        for i in range(len(pi)):
            new[off + pi[i] - 1] = exp[off + i]
    return tuple(new)


def act_simultaneous(p: SymPoly, pi: Sequence[int]) -> SymPoly:
    _check_simultaneous(p)
    return act(p, {f: pi for f in range(len(p.families))})


def _check_simultaneous(p: SymPoly) -> int:
    arities = {k for _, k in p.families}
    if len(arities) != 1:
        raise QuiverError("the simultaneous action needs families of equal arity")
    return arities.pop()


def _transposition(n: int, i: int) -> tuple[int, ...]:
    t = list(range(1, n + 1))
    t[i], t[i + 1] = t[i + 1], t[i]
    return tuple(t)


def is_invariant(p: SymPoly, action: str = "simultaneous", family: int | None = None) -> bool:
    """Exact invariance under adjacent transpositions, which generate ``S_N``.

    ``action`` is ``simultaneous`` (one permutation on every family),
    ``independent`` (a separate ``S_N`` on each family) or ``family`` (only
    the family with index ``family``).
    """
    if action == "simultaneous":
        n = _check_simultaneous(p)
        gens = [{f: _transposition(n, i) for f in range(len(p.families))} for i in range(n - 1)]
    elif action == "independent":
        gens = [{f: _transposition(k, i)} for f, (_, k) in enumerate(p.families) for i in range(k - 1)]
    elif action == "family":
        if family is None:
            raise QuiverError("family index required")
        k = p.families[family][1]
        gens = [{family: _transposition(k, i)} for i in range(k - 1)]
    else:
        raise QuiverError(f"unknown action {action!r}")
    return all(act(p, g) == p for g in gens)


def symmetrize(families, exp: Sequence[int], action: str = "simultaneous") -> SymPoly:
    """Orbit sum of a monomial: each distinct image appears with coefficient 1."""
    probe = SymPoly(families, {tuple(exp): 1})
    if action == "simultaneous":
        n = _check_simultaneous(probe)
        gens = [{f: _transposition(n, i) for f in range(len(probe.families))} for i in range(n - 1)]
    elif action == "independent":
        gens = [{f: _transposition(k, i)} for f, (_, k) in enumerate(probe.families) for i in range(k - 1)]
    else:
        raise QuiverError(f"unknown action {action!r}")
    start = tuple(exp)
    seen = {start}
    queue = deque([start])
    moves = [[(probe.offset(f), pi) for f, pi in g.items()] for g in gens]
    while queue:
        e = queue.popleft()
        for mv in moves:
            img = _permute_exp(e, mv)
            if img not in seen:
                seen.add(img)
                queue.append(img)
    return SymPoly(probe.families, {e: 1 for e in seen})


def symmetrized_monomials(families, max_degree: int) -> list[SymPoly]:
    """One orbit sum per simultaneous orbit of nonconstant monomials of degree ``<= max_degree``.

    A monomial of degree ``k`` involves at most ``k`` indices, so orbit
    representatives can be taken among the first ``min(k, N)`` indices.
    """
    families = tuple(families)
    n = _check_simultaneous(SymPoly(families))
    r = len(families)
    width = min(max_degree, n)
    slots = [(f, i) for f in range(r) for i in range(width)]
    out, seen = [], set()
    for deg in range(1, max_degree + 1):
        for combo in combinations_with_replacement(range(len(slots)), deg):
            exp = [0] * (r * n)
            for s in combo:
                f, i = slots[s]
                exp[f * n + i] += 1
            if tuple(exp) in seen:
                continue
            orbit = symmetrize(families, exp)
            seen.update(orbit.terms)
            out.append(orbit)
    return out


# -- the substitution phi -----------------------------------------------------------

def phi_substitute(p: SymPoly, n: int, m: int, names=("alpha", "beta")) -> SymPoly:
    """``lambda_{km+j} <- alpha_{k+1}`` and ``mu_{km+j} <- beta_j``."""
    return phi_substitute_r(p, (n, m), names)


def phi_substitute_r(p: SymPoly, ns: Sequence[int], names: Sequence[str] | None = None) -> SymPoly:
    """Family ``f`` variable at multi-index ``(k_1, .., k_r)`` becomes variable ``k_f`` of output family ``f``."""
    ns = tuple(int(x) for x in ns)
    r = len(ns)
    total = prod(ns)
    if len(p.families) != r or any(k != total for _, k in p.families):
        raise QuiverError(f"expected {r} families of arity {total}, got {p.families}")
    if names is None:
        names = tuple(f"x{f + 1}" for f in range(r))
    if len(names) != r:
        raise QuiverError("one output family name per factor")
    out_fams = tuple(zip(names, ns))
    offs = [sum(ns[:f]) for f in range(r)]
    # position in the output exponent for every (family, linear index)
    target = [[offs[f] + idx[f] for idx in product(*(range(x) for x in ns))] for f in range(r)]
    out = {}
    for exp, c in p.terms.items():
        new = [0] * sum(ns)
        for f in range(r):
            base = f * total
            tf = target[f]
            for i in range(total):
                k = exp[base + i]
                if k:
                    new[tf[i]] += k
        key = tuple(new)
        out[key] = out.get(key, 0) + c
    return SymPoly(out_fams, out)


@dataclass(frozen=True)
class EquivarianceResult:
    ok: bool
    phi_invariant: bool
    tau_identity: bool


def equivariance_check(p: SymPoly, n: int, m: int, sigma: Sequence[int], sigma_p: Sequence[int],
                       check_precondition: bool = True) -> EquivarianceResult:
    """Check ``(sigma, sigma') . phi(p) = phi(tau . p) = phi(p)`` exactly."""
    return equivariance_check_r(p, (n, m), (sigma, sigma_p), check_precondition)


def equivariance_check_r(p: SymPoly, ns: Sequence[int], sigmas: Sequence[Sequence[int]],
                         check_precondition: bool = True) -> EquivarianceResult:
    if check_precondition and not is_invariant(p, "simultaneous"):
        raise PreconditionError("p is not invariant under the simultaneous symmetric group action")
    t = tau_r(ns, sigmas)
    image = phi_substitute_r(p, ns)
    moved = act(image, {f: s for f, s in enumerate(sigmas)})
    via_tau = phi_substitute_r(act_simultaneous(p, t), ns)
    phi_inv = moved == image
    tau_id = via_tau == moved
    return EquivarianceResult(phi_inv and tau_id, phi_inv, tau_id)


def all_permutations(n: int):
    return [tuple(x) for x in permutations(range(1, n + 1))]


# -- spectra --------------------------------------------------------------------------

def char_poly_invariants(a) -> list[complex]:
    """Elementary symmetric functions ``e_1..e_d`` of the eigenvalues.

    Faddeev-LeVerrier up to size 6, eigenvalue products above.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise QuiverError("char_poly_invariants needs a square matrix")
    d = a.shape[0]
    if d == 0:
        return []
    if d <= 6:
        c = [0j] * (d + 1)
        c[d] = 1
        mk = np.zeros_like(a)
        eye = np.eye(d)
        for k in range(1, d + 1):
            mk = a @ mk + c[d - k + 1] * eye
            c[d - k] = -np.trace(a @ mk) / k
        return [complex((-1) ** k * c[d - k]) for k in range(1, d + 1)]
    coeffs = np.poly(np.linalg.eigvals(a))
    return [complex((-1) ** k * coeffs[k]) for k in range(1, d + 1)]


def _canonical_order(tuples: list[tuple[complex, ...]], digits: int = 9) -> list[tuple[complex, ...]]:
    def key(t):
        return tuple(x for v in t for x in (round(v.real, digits), round(v.imag, digits)))
    return sorted(tuples, key=key)


def joint_spectrum(mats: Sequence, tol: float = 1e-8, seed: int = 0, attempts: int = 5) -> list[tuple[complex, ...]]:
    """Joint eigenvalue tuples of commuting diagonalizable matrices.

    A seeded random combination is diagonalized and each matrix is read off
    in its eigenbasis; a new seed is tried when the eigenbasis is
    ill-conditioned or fails to diagonalize the family.
    """
    mats = [np.asarray(x, dtype=complex) for x in mats]
    if not mats:
        raise QuiverError("at least one matrix is required")
    n = mats[0].shape[0]
    if any(x.shape != (n, n) for x in mats):
        raise QuiverError("matrices must be square of equal size")
    scale = max(1.0, max(float(np.linalg.norm(x)) for x in mats))
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            c = mats[i] @ mats[j] - mats[j] @ mats[i]
            if np.linalg.norm(c) > tol * scale * scale:
                raise PreconditionError(f"matrices {i} and {j} do not commute")
    if n == 0:
        return []
    for k in range(attempts):
        rng = np.random.default_rng(seed + k)
        coeffs = rng.normal(size=len(mats)) + 1j * rng.normal(size=len(mats))
        combo = sum(c * x for c, x in zip(coeffs, mats))
        _, v = np.linalg.eig(combo)
        if np.linalg.cond(v) > 1e8:
            continue
        vinv = np.linalg.inv(v)
        diags, ok = [], True
        for x in mats:
            d = vinv @ x @ v
            off = d - np.diag(np.diag(d))
            if np.linalg.norm(off) > 1e-6 * max(1.0, float(np.linalg.norm(x))):
                ok = False
                break
            diags.append(np.diag(d))
        if ok:
            return _canonical_order([tuple(complex(dg[i]) for dg in diags) for i in range(n)])
    raise PreconditionError("no diagonalizing combination found; the family may be defective")


# -- grid membership -------------------------------------------------------------------

def _cluster(values: Sequence[complex], tol: float) -> list[tuple[complex, int]]:
    """Greedy clustering of scalars; returns ``(mean, count)`` per cluster."""
    order = sorted(range(len(values)), key=lambda i: (values[i].real, values[i].imag))
    groups: list[list[complex]] = []
    for i in order:
        v = values[i]
        for g in groups:
            if abs(g[0] - v) <= tol:
                g.append(v)
                break
        else:
            groups.append([v])
    return [(complex(np.mean(g)), len(g)) for g in groups]


def _match_multisets(a: list[tuple], b: list[tuple], tol: float) -> bool:
    if len(a) != len(b):
        return False
    used = [False] * len(b)
    for x in a:
        for k, y in enumerate(b):
            if not used[k] and max(abs(u - v) for u, v in zip(x, y)) <= tol:
                used[k] = True
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class GridResult:
    ok: bool
    factors: tuple[tuple[complex, ...], ...] | None

    def to_json(self) -> dict:
        out = {"in_grid": self.ok, "factors": None}
        if self.factors is not None:
            out["factors"] = [[[v.real, v.imag] for v in f] for f in self.factors]
        return out


def grid_test(pairs: Sequence[Sequence[complex]], n: int, m: int, tol: float = 1e-6) -> GridResult:
    return grid_test_r(pairs, (n, m), tol)


def grid_test_r(tuples: Sequence[Sequence[complex]], ns: Sequence[int], tol: float = 1e-6) -> GridResult:
    """Whether the multiset of tuples is ``{(a1_k1, .., ar_kr)}`` for nonzero vectors ``a_i``.

    Each factor is recovered from its coordinate marginal: a value of
    multiplicity ``c`` in factor ``i`` appears ``c * N / n_i`` times.  The
    product grid of the recovered factors is then matched against the input.
    """
    ns = tuple(int(x) for x in ns)
    r = len(ns)
    total = prod(ns)
    tuples = [tuple(complex(v) for v in t) for t in tuples]
    if len(tuples) != total:
        raise QuiverError(f"expected {total} tuples, got {len(tuples)}")
    if any(len(t) != r for t in tuples):
        raise QuiverError(f"every tuple needs {r} entries")
    if any(abs(v) <= tol for t in tuples for v in t):
        raise PreconditionError("zero eigenvalue: not an invertible family")
    factors = []
    for f in range(r):
        rest = total // ns[f]
        vals = []
        for mean, count in _cluster([t[f] for t in tuples], tol):
            if count % rest:
                return GridResult(False, None)
            vals.extend([mean] * (count // rest))
        factors.append(tuple(vals))
    grid = list(product(*factors))
    if not _match_multisets(grid, tuples, 2 * tol):
        return GridResult(False, None)
    return GridResult(True, tuple(factors))


def tensor_spectrum(factors: Sequence[Sequence[complex]]) -> list[tuple[complex, ...]]:
    """Joint spectrum of ``(A_1 (x) I .., I (x) A_2 (x) I .., ..)`` for diagonal ``A_i``."""
    return [tuple(complex(v) for v in t) for t in product(*factors)]


def kron_family(mats: Sequence) -> list[np.ndarray]:
    """``A_f`` placed in slot ``f`` of an ``r``-fold Kronecker product with identities elsewhere."""
    mats = [np.asarray(x, dtype=complex) for x in mats]
    out = []
    for f in range(len(mats)):
        acc = np.eye(1, dtype=complex)
        for g, x in enumerate(mats):
            acc = np.kron(acc, x if g == f else np.eye(x.shape[0]))
        out.append(acc)
    return out
