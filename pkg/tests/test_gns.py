import numpy as np
import pytest

from quasistar.errors import DimensionMismatch, NotRepresentable
from quasistar.functionals import Functional, functional_from_vector, gns, sesquilinear_form
from quasistar.models import build_group_algebra, build_matrix_algebra
from quasistar.sampling import random_cone_element

from conftest import basis


def _rand(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def test_triple_properties_by_direct_evaluation(model, rng):
    omega = functional_from_vector(random_cone_element(model, rng), model)
    t = gns(omega, model)
    assert t.checks.passed, t.checks.render()
    n, d = model.ambient_dim, model.sub_dim
    for _ in range(10):
        a = _rand(rng, n)
        assert t.expectation(a) == pytest.approx(omega(a), abs=1e-10)
        np.testing.assert_allclose(t.rep(model.involute(a)), t.rep(a).conj().T, atol=1e-10)
        x = _rand(rng, d)
        np.testing.assert_allclose(
            t.rep(model.right_multiply(a, x)), t.rep(a) @ t.rep(model.embedded(x)), atol=1e-9
        )
    np.testing.assert_allclose(t.rep(model.unit), np.eye(t.gns_dim), atol=1e-10)


def test_zero_functional_gives_zero_representation():
    pair = build_group_algebra(3)
    t = gns(Functional(np.zeros(3)), pair)
    assert t.gns_dim == 0
    assert t.checks.passed
    assert t.expectation(np.ones(3)) == 0


def test_trace_state_on_z2_is_regular_representation():
    pair = build_group_algebra(2)
    omega = functional_from_vector(pair.unit, pair)
    t = gns(omega, pair)
    assert t.gns_dim == 2
    for a in (basis(2, 0), basis(2, 1), np.array([0.3, -1.2j])):
        assert t.expectation(a) == pytest.approx(omega(a), abs=1e-12)
    # the regular representation of Z_2 sends g to a flip, eigenvalues -1 and 1
    np.testing.assert_allclose(np.linalg.eigvalsh(t.rep(basis(2, 1))), [-1.0, 1.0], atol=1e-12)


def test_character_on_z2_is_one_dimensional():
    pair = build_group_algebra(2)
    t = gns(Functional(np.array([1.0, 1.0])), pair)
    assert t.gns_dim == 1
    np.testing.assert_allclose(t.rep(basis(2, 1)), [[1.0]], atol=1e-12)
    assert abs(t.cyclic[0]) == pytest.approx(1.0)


def test_vector_state_on_m2_is_irreducible():
    # omega(A) proportional to A_11; omega(X* X) = sum_i |X_i1|^2 kills the second column, so dim 2
    pair = build_matrix_algebra(2)
    t = gns(functional_from_vector(basis(4, 0), pair), pair)
    assert t.gns_dim == 2
    assert t.checks.passed
    np.testing.assert_allclose(np.linalg.eigvalsh(t.rep(basis(4, 0))), [0.0, 1.0], atol=1e-12)


def test_trace_state_on_m2_has_full_dimension():
    pair = build_matrix_algebra(2)
    t = gns(functional_from_vector(pair.unit, pair), pair)
    assert t.gns_dim == 4
    np.testing.assert_allclose(np.linalg.eigvalsh(t.rep(basis(4, 0))), [0, 0, 1, 1], atol=1e-12)


def test_non_representable_refused():
    pair = build_group_algebra(2)
    with pytest.raises(NotRepresentable) as err:
        gns(functional_from_vector(-pair.unit, pair), pair)
    assert err.value.eigenvalue == pytest.approx(-1.0)


def test_rep_dimension_check():
    pair = build_group_algebra(2)
    t = gns(functional_from_vector(pair.unit, pair), pair)
    with pytest.raises(DimensionMismatch):
        t.rep(np.ones(3))


def test_gns_dim_equals_form_rank(model, rng):
    eta = random_cone_element(model, rng)
    t = gns(functional_from_vector(eta, model), model)
    ev = np.linalg.eigvalsh(sesquilinear_form(functional_from_vector(eta, model), model).matrix)
    assert t.gns_dim == int(np.sum(ev > 1e-9 * max(ev.max(), 0.0)))
