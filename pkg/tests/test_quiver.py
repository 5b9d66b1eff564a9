import numpy as np
import pytest
from hypothesis import given, strategies as st

from quiverforge.quiver import (Path, Quiver, QuiverError, a_quiver, clone_vertex, collapse_edges,
                                collapse_vertices, delete_edge, delete_vertex, enumerate_paths,
                                euler_form, is_indivisible, jordan_quiver, kronecker_quiver, opposite,
                                tensor_quiver)

from conftest import quivers


def test_opposite_examples():
    j = jordan_quiver()
    assert opposite(j) == j
    a2 = a_quiver(2)
    assert a2.arrows() == [(1, 0)]
    assert opposite(a2).arrows() == [(0, 1)]
    k = kronecker_quiver(3)
    assert opposite(k).arrows() == [(1, 0)] * 3


@given(quivers())
def test_opposite_is_involution(q):
    assert opposite(opposite(q)) == q


def test_tensor_quiver_figures():
    t = tensor_quiver(a_quiver(3), a_quiver(3))
    assert (t.quiver.n_vertices, t.quiver.n_edges) == (9, 12)
    t = tensor_quiver(jordan_quiver(), jordan_quiver())
    assert (t.quiver.n_vertices, t.quiver.n_edges) == (1, 2)
    t = tensor_quiver(kronecker_quiver(3), kronecker_quiver(2))
    assert (t.quiver.n_vertices, t.quiver.n_edges) == (4, 10)


@given(quivers(), quivers())
def test_tensor_quiver_counts_and_incidence(q1, q2):
    t = tensor_quiver(q1, q2)
    assert t.quiver.n_vertices == q1.n_vertices * q2.n_vertices
    assert t.quiver.n_edges == q1.n_edges * q2.n_vertices + q1.n_vertices * q2.n_edges
    for a in q1.edges:
        for j in range(q2.n_vertices):
            e = t.quiver.edges[t.first_edge(a.id, j)]
            assert (e.tail, e.head) == (t.vertex_index(a.tail, j), t.vertex_index(a.head, j))
    for i in range(q1.n_vertices):
        for b in q2.edges:
            e = t.quiver.edges[t.second_edge(i, b.id)]
            assert (e.tail, e.head) == (t.vertex_index(i, b.tail), t.vertex_index(i, b.head))


def test_tensor_quiver_rejects_empty():
    empty = Quiver((), ())
    with pytest.raises(QuiverError):
        tensor_quiver(empty, jordan_quiver())


def test_euler_form_examples():
    assert euler_form(jordan_quiver(), [2], [2]) == 0
    for n in range(1, 5):
        assert euler_form(kronecker_quiver(n), [1, 1], [1, 1]) == 2 - n
    assert euler_form(a_quiver(2), [1, 1], [1, 1]) == 1
    with pytest.raises(QuiverError):
        euler_form(a_quiver(2), [1], [1, 1])


@given(quivers(), st.data())
def test_euler_form_bilinear(q, data):
    vec = st.lists(st.integers(0, 5), min_size=q.n_vertices, max_size=q.n_vertices)
    d1, d2, e = data.draw(vec), data.draw(vec), data.draw(vec)
    s = [a + b for a, b in zip(d1, d2)]
    assert euler_form(q, s, e) == euler_form(q, d1, e) + euler_form(q, d2, e)
    assert euler_form(q, e, s) == euler_form(q, e, d1) + euler_form(q, e, d2)


def test_indivisible():
    assert is_indivisible([1, 1])
    assert not is_indivisible([2, 4])
    assert is_indivisible([2, 3])


def test_enumerate_paths_examples():
    assert len(enumerate_paths(a_quiver(2), 1, 0, 3)) == 1
    loops = enumerate_paths(jordan_quiver(), 0, 0, 3)
    assert [p.edges for p in loops] == [(), (0,), (0, 0), (0, 0, 0)]
    assert len(enumerate_paths(kronecker_quiver(2), 0, 1, 5)) == 2


@given(quivers(), st.integers(0, 4), st.data())
def test_enumerate_paths_matches_adjacency_powers(q, max_len, data):
    s = data.draw(st.integers(0, q.n_vertices - 1))
    t = data.draw(st.integers(0, q.n_vertices - 1))
    a = q.adjacency().astype(object)
    power = np.identity(q.n_vertices, dtype=object)
    expected = 0
    for _ in range(max_len + 1):
        expected += power[t, s]
        power = a.dot(power)
    paths = enumerate_paths(q, s, t, max_len)
    assert len(paths) == expected
    assert [(p.length, p.edges) for p in paths] == sorted((p.length, p.edges) for p in paths)


def test_enumerate_paths_limit():
    with pytest.raises(QuiverError):
        enumerate_paths(kronecker_quiver(1).__class__.from_arrows(1, [(0, 0)] * 3), 0, 0, 12, limit=1000)


def test_path_validation_and_compose():
    q = a_quiver(3)
    p = Path(q, (0, 1))
    assert (p.head, p.tail, p.length) == (0, 2, 2)
    with pytest.raises(QuiverError):
        Path(q, (1, 0))
    e0, e1 = Path(q, (0,)), Path(q, (1,))
    assert e0.compose(e1) == p
    assert e1.compose(e0) is None
    assert Path.trivial(q, 1).compose(e1) == e1


def test_collapse_and_clone_examples():
    t = tensor_quiver(jordan_quiver(), jordan_quiver())
    c = collapse_edges(t.quiver, [0, 1])
    assert c.target == jordan_quiver().__class__.from_arrows(1, [(0, 0)], c.target.labels)
    c = collapse_vertices(a_quiver(2), [[0, 1]])
    assert c.target.arrows() == [(0, 0)]
    c = clone_vertex(a_quiver(3), 1)
    assert (c.target.n_vertices, c.target.n_edges) == (4, 4)


def test_collapse_edges_requires_parallel():
    with pytest.raises(QuiverError):
        collapse_edges(a_quiver(3), [0, 1])
    with pytest.raises(QuiverError):
        collapse_edges(a_quiver(3), [7])


@given(quivers(max_vertices=4, max_edges=5), st.data())
def test_correspondences_are_total(q, data):
    v = data.draw(st.integers(0, q.n_vertices - 1))
    corrs = [clone_vertex(q, v), delete_vertex(q, v)]
    if q.n_vertices > 1:
        corrs.append(collapse_vertices(q, [[v, (v + 1) % q.n_vertices]]))
    if q.n_edges:
        e = data.draw(st.integers(0, q.n_edges - 1))
        corrs.append(delete_edge(q, e))
        par = [x.id for x in q.edges if (x.tail, x.head) == (q.tail(e), q.head(e))]
        corrs.append(collapse_edges(q, par))
    for c in corrs:
        assert len(c.edge_map) == q.n_edges and len(c.vertex_map) == q.n_vertices
        for old, new in enumerate(c.edge_map):
            if new is not None:
                assert old in c.edge_sources[new]
                ne, oe = c.target.edges[new], q.edges[old]
                assert c.vertex_map[oe.tail] == ne.tail or c.kind == "clone_vertex"
        covered = sorted(o for srcs in c.edge_sources for o in srcs)
        assert set(covered) == {o for o, n in enumerate(c.edge_map) if n is not None}
