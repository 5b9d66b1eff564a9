import numpy as np
import pytest
from hypothesis import settings, strategies as st

from quiverforge.quiver import Quiver
from quiverforge.representation import Representation

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def random_quiver(rng, max_vertices=3, max_edges=4, min_vertices=1):
    n = int(rng.integers(min_vertices, max_vertices + 1))
    k = int(rng.integers(0, max_edges + 1))
    arrows = [(int(rng.integers(n)), int(rng.integers(n))) for _ in range(k)]
    return Quiver.from_arrows(n, arrows)


def random_matrix(rng, rows, cols, scale=1.0):
    return scale * (rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols)))


def random_rep(rng, q, max_dim=3, dims=None):
    if dims is None:
        dims = [int(rng.integers(1, max_dim + 1)) for _ in range(q.n_vertices)]
    maps = [random_matrix(rng, dims[e.head], dims[e.tail]) for e in q.edges]
    return Representation(q, dims, maps)


def random_unitary(rng, n):
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    qm, r = np.linalg.qr(random_matrix(rng, n, n))
    return qm * (np.diag(r) / np.abs(np.diag(r)))


def random_normal(rng, n):
    u = random_unitary(rng, n)
    lam = rng.normal(size=n) + 1j * rng.normal(size=n)
    return u @ np.diag(lam) @ u.conj().T


@st.composite
def quivers(draw, max_vertices=3, max_edges=4):
    n = draw(st.integers(1, max_vertices))
    arrows = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=max_edges))
    return Quiver.from_arrows(n, arrows)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
