import numpy as np
import pytest
from hypothesis import given, strategies as st

from quiverforge.quiver import QuiverError, kronecker_quiver
from quiverforge.representation import Representation
from quiverforge.segre import (DiamondInvariants, diagonal_residual, diamond_arms, diamond_from_arms,
                               diamond_invariants, in_segre_image, reconstruct_factors, segre_dimensions,
                               segre_quadric_residual, tensor_image_invariants)
from quiverforge.tensor_rep import tensor

from conftest import random_matrix


def _kron(v):
    return Representation(kronecker_quiver(len(v)), (1, 1), [[[x]] for x in v])


def test_arms_round_trip(rng):
    x, z = random_matrix(rng, 3, 1).ravel(), random_matrix(rng, 3, 1).ravel()
    y, w = random_matrix(rng, 2, 1).ravel(), random_matrix(rng, 2, 1).ravel()
    arms = diamond_arms(diamond_from_arms(x, y, w, z))
    for a, b in zip((arms.x, arms.y, arms.w, arms.z), (x, y, w, z)):
        np.testing.assert_array_equal(a, b)


def test_tensor_image_matches_closed_form(rng):
    z, w = random_matrix(rng, 3, 1).ravel(), random_matrix(rng, 2, 1).ravel()
    inv = diamond_invariants(tensor(_kron(z), _kron(w)).rep)
    ref = tensor_image_invariants(z, w)
    np.testing.assert_allclose(inv.s, ref.s, atol=1e-14)
    np.testing.assert_allclose(inv.t, ref.t, atol=1e-14)


@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_tensor_images_are_accepted_and_factored(n, m, seed):
    rng = np.random.default_rng(seed)
    z, w = random_matrix(rng, n, 1).ravel(), random_matrix(rng, m, 1).ravel()
    chk = in_segre_image(tensor(_kron(z), _kron(w)).rep, tol=1e-10)
    assert chk.in_image
    zf, wf = chk.factors
    np.testing.assert_allclose(np.outer(zf, wf), np.outer(z, w), atol=1e-10)


@given(st.integers(2, 4), st.integers(2, 4), st.integers(0, 2**32 - 1))
def test_generic_diamonds_are_rejected(n, m, seed):
    rng = np.random.default_rng(seed)
    rep = diamond_from_arms(*(random_matrix(rng, k, 1).ravel() for k in (n, m, m, n)))
    chk = in_segre_image(rep)
    assert not chk.in_image and chk.factors is None
    assert max(chk.quadric_residual, chk.diagonal_residual) > 1e-6


def test_quadric_residual_detects_rank_two():
    assert segre_quadric_residual(DiamondInvariants(np.eye(2), np.eye(2))) == 1.0
    assert segre_quadric_residual(DiamondInvariants(np.ones((2, 3)), np.ones((3, 2)))) == 0.0


def test_diagonal_residual_shape_mismatch():
    with pytest.raises(QuiverError):
        diagonal_residual(DiamondInvariants(np.ones((2, 3)), np.ones((2, 3))))


def test_zero_invariants_raise():
    with pytest.raises(QuiverError):
        in_segre_image(diamond_from_arms([0, 0], [1, 1], [0, 0], [1, 1]))
    with pytest.raises(QuiverError):
        reconstruct_factors(DiamondInvariants(np.zeros((2, 2)), np.zeros((2, 2))))


def test_non_diamond_rejected():
    with pytest.raises(QuiverError):
        diamond_invariants(_kron([1, 2]))


def test_dimension_formulas():
    for n in range(1, 5):
        for m in range(1, 5):
            d = segre_dimensions(n, m)
            assert d["product"] == 2 * (n - 1) + 2 * (m - 1)
            assert d["product"] - d["euler_only"] == 4
