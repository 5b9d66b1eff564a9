from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quiverforge.path_algebra import (PathAlgebraElement, Relation, commutation_generators,
                                      count_paths_mod_ideal, factor_words, factored_count, multiply,
                                      normal_form, rewrite_once)
from quiverforge.quiver import (Path, Quiver, QuiverError, a_quiver, enumerate_paths, jordan_quiver,
                                kronecker_quiver, tensor_quiver)

from conftest import quivers


def chain3():
    return Quiver.from_arrows(3, [(0, 1), (1, 2)])


def test_trivial_paths_are_orthogonal_idempotents():
    q = a_quiver(3)
    e = [PathAlgebraElement.from_path(Path.trivial(q, i)) for i in range(3)]
    for i, j in product(range(3), repeat=2):
        expected = e[i] if i == j else PathAlgebraElement(q)
        assert multiply(e[i], e[j]) == expected


def test_a3_products():
    q = a_quiver(3)   # edge 0: 1 -> 0, edge 1: 2 -> 1
    a2, a3 = PathAlgebraElement.from_path(Path(q, (0,))), PathAlgebraElement.from_path(Path(q, (1,)))
    assert (a2 * a3).terms == {Path(q, (0, 1)): 1}
    assert (a3 * a2).terms == {}


def _random_element(rng, q, max_len=3):
    paths = [p for s in range(q.n_vertices) for t in range(q.n_vertices)
             for p in enumerate_paths(q, s, t, max_len)]
    k = min(len(paths), 4)
    pick = rng.choice(len(paths), size=k, replace=False)
    return PathAlgebraElement(q, [(paths[i], Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))))
                                  for i in pick])


@given(quivers(max_edges=3), st.integers(0, 2**32 - 1))
def test_algebra_laws(q, seed):
    rng = np.random.default_rng(seed)
    x, y, z = (_random_element(rng, q) for _ in range(3))
    one = PathAlgebraElement.unit(q)
    assert one * x == x and x * one == x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x + y) * z == x * z + y * z


def test_mixed_quivers_rejected():
    x = PathAlgebraElement.unit(a_quiver(2))
    y = PathAlgebraElement.unit(a_quiver(3))
    with pytest.raises(QuiverError):
        x * y


def test_relation_validation():
    q = a_quiver(3)
    Relation(((1, Path(q, (0, 1))),))
    with pytest.raises(QuiverError):
        Relation(((1, Path(q, (0,))),))
    with pytest.raises(QuiverError):
        Relation(())
    k = Quiver.from_arrows(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(QuiverError):
        Relation(((1, Path(k, (1, 0))), (1, Path(Quiver.from_arrows(3, [(0, 1), (1, 2)]), (1, 0)))))


def test_generator_counts():
    tj = tensor_quiver(jordan_quiver(), jordan_quiver())
    gens = commutation_generators(tj)
    assert len(gens) == 1
    assert {gens[0].first_then_second.edges, gens[0].second_then_first.edges} == {(0, 1), (1, 0)}
    assert len(commutation_generators(tensor_quiver(kronecker_quiver(3), kronecker_quiver(2)))) == 6
    assert len(commutation_generators(tensor_quiver(a_quiver(2), a_quiver(2)))) == 1


@given(quivers(), quivers())
def test_generators_are_valid_relations(q1, q2):
    tq = tensor_quiver(q1, q2)
    gens = commutation_generators(tq)
    assert len(gens) == q1.n_edges * q2.n_edges
    for g in gens:
        r = g.relation()
        assert all(p.length == 2 for _, p in r.terms)
        a, b = q1.edges[g.alpha], q2.edges[g.beta]
        assert r.head == tq.vertex_index(a.head, b.head)
        assert r.tail == tq.vertex_index(a.tail, b.tail)


def test_normal_form_figure_example():
    tq = tensor_quiver(chain3(), chain3())
    # alpha_1 = edge 0 (i1 -> i2), alpha_2 = edge 1 (i2 -> i3); same names for beta
    p = Path(tq.quiver, (tq.first_edge(1, 2), tq.second_edge(1, 1), tq.second_edge(1, 0), tq.first_edge(0, 0)))
    expected = Path(tq.quiver, (tq.second_edge(2, 1), tq.second_edge(2, 0), tq.first_edge(1, 0), tq.first_edge(0, 0)))
    assert normal_form(p, tq) == expected
    already = Path(tq.quiver, (tq.second_edge(1, 0), tq.first_edge(0, 0)))
    assert normal_form(already, tq) == already


def test_normal_form_jordan_square():
    tq = tensor_quiver(jordan_quiver(), jordan_quiver())
    a, b = tq.first_edge(0, 0), tq.second_edge(0, 0)
    for w in product((a, b), repeat=2):
        nf = normal_form(Path(tq.quiver, w), tq)
        assert nf.edges == tuple(sorted(w, key=lambda e: e == a))   # alpha rightmost
    assert normal_form(Path(tq.quiver, (a, b)), tq).edges == (b, a)


def _random_tensor_path(rng, tq, length):
    v = int(rng.integers(tq.quiver.n_vertices))
    word = []
    for _ in range(length):
        outs = tq.quiver.out_edges(v)
        if not outs:
            break
        e = outs[int(rng.integers(len(outs)))]
        word.append(e)
        v = tq.quiver.head(e)
    if not word:
        return None
    return Path(tq.quiver, tuple(reversed(word)))


@given(quivers(max_edges=3), quivers(max_edges=3), st.integers(0, 2**32 - 1))
def test_normal_form_idempotent_and_rewrite_invariant(q1, q2, seed):
    rng = np.random.default_rng(seed)
    tq = tensor_quiver(q1, q2)
    p = _random_tensor_path(rng, tq, 5)
    if p is None:
        return
    nf = normal_form(p, tq)
    assert normal_form(nf, tq) == nf
    assert factor_words(nf, tq) == factor_words(p, tq)
    assert (nf.head, nf.tail) == (p.head, p.tail)
    for pos in range(p.length - 1):
        r = rewrite_once(p, tq, pos)
        if r is not None:
            assert normal_form(r, tq) == nf
            assert rewrite_once(r, tq, pos) == p


def test_count_examples():
    t = tensor_quiver(a_quiver(2), a_quiver(2))
    assert count_paths_mod_ideal(t, (1, 1), (0, 0), 2) == 1
    tj = tensor_quiver(jordan_quiver(), jordan_quiver())
    assert count_paths_mod_ideal(tj, (0, 0), (0, 0), 2) == 6
    for i, j in product(range(2), repeat=2):
        assert count_paths_mod_ideal(t, (i, j), (i, j), 0) == 1


def _brute_force_count(tq, s, t, max_len):
    src, dst = tq.vertex_index(*s), tq.vertex_index(*t)
    return len({normal_form(p, tq).edges or ("e", p.vertex)
                for p in enumerate_paths(tq.quiver, src, dst, max_len)})


@given(quivers(max_edges=3), quivers(max_edges=3), st.integers(0, 3), st.data())
def test_count_matches_factorization_and_bruteforce(q1, q2, max_len, data):
    tq = tensor_quiver(q1, q2)
    s = (data.draw(st.integers(0, q1.n_vertices - 1)), data.draw(st.integers(0, q2.n_vertices - 1)))
    t = (data.draw(st.integers(0, q1.n_vertices - 1)), data.draw(st.integers(0, q2.n_vertices - 1)))
    n = count_paths_mod_ideal(tq, s, t, max_len)
    assert n == factored_count(tq, s, t, max_len)
    assert n == _brute_force_count(tq, s, t, max_len)
