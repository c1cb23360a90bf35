import numpy as np
import pytest

from quasistar.algebra import involute, multiply
from quasistar.errors import DimensionMismatch, NotRepresentable, QuasiStarError
from quasistar.functionals import (
    Functional,
    check_condition_P,
    check_representable,
    check_sufficiency,
    closure_extension,
    functional_from_vector,
    inner_product_form_checks,
    is_fully_representable,
    is_star_semisimple,
    positive_cone_test,
    representing_vector,
    riesz_vector,
    sesquilinear_form,
)
from quasistar.models import build_function_model, build_group_algebra
from quasistar.quasi import boundedness_norm
from quasistar.sampling import random_cone_element

from conftest import basis


def enumerated_conditions(omega, pair):
    """Positivity matrix and symmetry residual by explicit loops over basis elements."""
    d, n = pair.sub_dim, pair.ambient_dim
    alg = pair.alg
    raw = np.zeros((d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            prod = multiply(involute(basis(d, j), alg), basis(d, i), alg)  # x_j* x_i
            raw[j, i] = omega(pair.embedded(prod))
    t = pair.sub_chol_inv
    form = t.conj().T @ raw @ t
    sym = 0.0
    for a in range(n):
        ea = basis(n, a)
        for x in range(d):
            for y in range(d):
                xs, ys = involute(basis(d, x), alg), involute(basis(d, y), alg)
                lhs = omega(pair.left_multiply(ys, pair.right_multiply(pair.involute(ea), basis(d, x))))
                rhs = omega(pair.right_multiply(pair.left_multiply(xs, ea), basis(d, y)))
                sym = max(sym, abs(lhs - np.conj(rhs)))
    return form, sym


def test_unit_functional_representable_with_gram_form():
    pair = build_group_algebra(2)
    omega = functional_from_vector(pair.unit, pair)
    chk = check_representable(omega, pair)
    assert chk.representable
    np.testing.assert_allclose(chk.form, np.eye(2), atol=1e-15)  # the A0 gram in orthonormal coordinates


def test_minus_unit_fails_positivity():
    pair = build_group_algebra(2)
    omega = functional_from_vector(-pair.unit, pair)
    assert omega(pair.unit) == pytest.approx(-pair.norm(pair.unit) ** 2)
    chk = check_representable(omega, pair)
    assert not chk.representable
    assert not chk.positivity.positive
    assert chk.positivity.min_eigenvalue == pytest.approx(-1.0)


def test_square_functionals_match_enumeration(model, rng):
    for _ in range(3):
        x = rng.standard_normal(model.sub_dim) + 1j * rng.standard_normal(model.sub_dim)
        eta = model.embedded(multiply(involute(x, model.alg), x, model.alg))
        omega = functional_from_vector(eta, model)
        chk = check_representable(omega, model)
        assert chk.representable, chk.as_report().render()
        form, sym = enumerated_conditions(omega, model)
        np.testing.assert_allclose(chk.form, form, atol=1e-12)
        assert np.linalg.eigvalsh((form + form.conj().T) / 2)[0] >= -1e-10
        assert sym <= 1e-10
        assert chk.symmetry_residual == pytest.approx(sym, abs=1e-12)


def test_gamma_constants_bound_the_functional(model, rng):
    omega = functional_from_vector(random_cone_element(model, rng), model)
    chk = check_representable(omega, model)
    phi = sesquilinear_form(omega, model)
    for a in range(model.ambient_dim):
        ea_star = model.involute(basis(model.ambient_dim, a))
        for _ in range(20):
            x = rng.standard_normal(model.sub_dim) + 1j * rng.standard_normal(model.sub_dim)
            lhs = abs(omega(model.right_multiply(ea_star, x)))
            xo = model.sub_chol @ x
            rhs = chk.gammas[a] * np.sqrt(max(phi(xo, xo).real, 0.0))
            assert lhs <= rhs * (1 + 1e-9) + 1e-12


def test_non_symmetric_functional_fails_L2():
    # omega(a) = i * a_e on C[Z_2]: omega(1) is not real
    pair = build_group_algebra(2)
    chk = check_representable(Functional(np.array([1j, 0.0])), pair)
    assert not chk.representable


def test_form_of_unit_functional_is_inner_product(model, rng):
    phi = sesquilinear_form(functional_from_vector(model.unit, model), model)
    x = rng.standard_normal(model.sub_dim) + 1j * rng.standard_normal(model.sub_dim)
    y = rng.standard_normal(model.sub_dim) + 1j * rng.standard_normal(model.sub_dim)
    got = phi(model.sub_chol @ x, model.sub_chol @ y)
    assert got == pytest.approx(model.inner(model.embedded(x), model.embedded(y)), abs=1e-12)


def test_form_at_unit_and_invariance(model, rng):
    omega = functional_from_vector(random_cone_element(model, rng), model)
    phi = sesquilinear_form(omega, model)
    u = model.sub_chol @ model.alg.unit
    assert phi(u, u) == pytest.approx(omega(model.unit), abs=1e-12)
    assert phi.min_eigenvalue >= -1e-10
    d = model.sub_dim
    oc = lambda v: model.sub_chol @ v  # noqa: E731
    worst = 0.0
    for i in range(d):
        for j in range(d):
            for k in range(d):
                x, y, z = basis(d, i), basis(d, j), basis(d, k)
                lhs = phi(oc(multiply(x, y, model.alg)), oc(z))
                rhs = phi(oc(y), oc(multiply(involute(x, model.alg), z, model.alg)))
                worst = max(worst, abs(lhs - rhs))
    assert worst <= 1e-10


def test_closure_extension_examples(model, rng):
    ext = closure_extension(sesquilinear_form(functional_from_vector(model.unit, model), model), model)
    assert ext.full_domain and ext.domain == "A"
    assert ext.bound == pytest.approx(1.0, abs=1e-12)

    eta = random_cone_element(model, rng)
    phi = sesquilinear_form(functional_from_vector(eta, model), model)
    ext = closure_extension(phi, model)
    p = model.isometry
    assert np.abs(p.conj().T @ ext.matrix @ p - phi.matrix).max() == pytest.approx(0.0, abs=1e-13)
    assert ext.bound == pytest.approx(boundedness_norm(eta, model), rel=1e-10)


def test_closure_extension_refuses_non_psd():
    pair = build_group_algebra(2)
    phi = sesquilinear_form(functional_from_vector(-pair.unit, pair), pair)
    assert not phi.psd
    with pytest.raises(NotRepresentable):
        closure_extension(phi, pair)


def test_riesz_examples(model, rng):
    rv = riesz_vector(functional_from_vector(model.unit, model), model)
    np.testing.assert_allclose(rv.vector, model.unit, atol=1e-12)
    with pytest.raises(NotRepresentable) as err:
        riesz_vector(functional_from_vector(-model.unit, model), model)
    assert err.value.eigenvalue == pytest.approx(-1.0)
    for _ in range(20):
        eta = random_cone_element(model, rng)
        back = riesz_vector(functional_from_vector(eta, model), model)
        assert model.norm(back.vector - eta) <= 1e-10
        assert back.min_eigenvalue >= -1e-10
        assert np.isfinite(back.bound)


def test_riesz_well_posed_under_tiny_perturbation(model, rng):
    omega = functional_from_vector(random_cone_element(model, rng), model)
    bump = 1e-12 * (rng.standard_normal(model.ambient_dim) + 1j * rng.standard_normal(model.ambient_dim))
    bump /= np.linalg.norm(bump) / 1e-12
    near = Functional(omega.covector + bump)
    a = representing_vector(omega, model)
    b = representing_vector(near, model)
    assert np.abs(a - b).max() <= 1e-10
    assert riesz_vector(omega, model).condition >= 1.0


def test_character_functional_riesz_vector_on_z2():
    # omega(a) = a_e + a_g; with <d_g, d_h> = [g = h] / 2 its representing vector is 2 (d_e + d_g)
    pair = build_group_algebra(2)
    rv = riesz_vector(Functional(np.array([1.0, 1.0])), pair)
    np.testing.assert_allclose(rv.vector, [2.0, 2.0], atol=1e-14)


def test_zero_functional():
    pair = build_group_algebra(3)
    omega = functional_from_vector(np.zeros(3), pair)
    np.testing.assert_array_equal(omega.covector, np.zeros(3))
    assert check_representable(omega, pair).representable


def test_functional_from_vector_is_inner_product(model, rng):
    eta = rng.standard_normal(model.ambient_dim) + 1j * rng.standard_normal(model.ambient_dim)
    xi = rng.standard_normal(model.ambient_dim) + 1j * rng.standard_normal(model.ambient_dim)
    assert functional_from_vector(eta, model)(xi) == pytest.approx(model.inner(xi, eta), abs=1e-12)


def test_host_mismatch():
    with pytest.raises(DimensionMismatch):
        check_representable(Functional(np.ones(3)), build_group_algebra(2))


def test_cone_examples(model, rng):
    assert positive_cone_test(model.unit, model).member
    for _ in range(10):
        assert positive_cone_test(random_cone_element(model, rng), model).member
    assert not positive_cone_test(-model.unit, model).member
    pair = build_group_algebra(2)
    dec = positive_cone_test(np.array([1.0, -2.0]), pair)  # symbol values -1 and 3
    assert not dec.member
    assert dec.min_eigenvalue == pytest.approx(-1.0)
    assert not positive_cone_test(np.array([1.0, 1j]), pair).member  # not self-adjoint


@pytest.mark.parametrize("n", [1, 2, 3, 6])
def test_group_algebras_sufficient_with_self_witness(n):
    pair = build_group_algebra(n)
    res = check_sufficiency(pair, cone_samples=30)
    assert res.status == "pass"
    assert len(res.witnesses) == 30
    assert all(name.startswith("<., a_") for _, name, _ in res.witnesses)
    assert all(val > 0 for _, _, val in res.witnesses)


def test_function_model_sufficient():
    assert check_sufficiency(build_function_model(7), cone_samples=30).sufficient


def test_empty_family_is_undecided():
    pair = build_group_algebra(4)
    assert check_sufficiency(pair, family=[]).status == "undecided"
    assert is_fully_representable(pair, family=[]).status == "undecided"


def test_family_without_witness_fails():
    pair = build_group_algebra(2)
    zero = functional_from_vector(np.zeros(2), pair, name="zero")
    res = check_sufficiency(pair, cone_samples=5, family=[zero])
    assert res.status == "fail"
    assert res.offending is not None


def test_c_z4_fully_representable():
    res = is_fully_representable(build_group_algebra(4))
    assert res.status == "pass"
    assert res.domain_certified
    assert len(res.sufficiency.witnesses) == 100


def test_semisimple_examples(rng):
    pair = build_group_algebra(3)
    probes = [pair.unit] + [rng.standard_normal(3) + 1j * rng.standard_normal(3) for _ in range(5)]
    res = is_star_semisimple(pair, probes)
    assert res.status == "pass"
    for a, w in zip(probes, res.witnesses):
        assert w == pytest.approx(pair.norm(a) ** 2)
    with pytest.raises(QuasiStarError):
        is_star_semisimple(pair, [np.zeros(3)])


def test_inner_product_invariance_on_z4():
    rep = inner_product_form_checks(build_group_algebra(4), tol=1e-10, samples=200)
    assert rep.passed
    assert rep["invariance"].residual <= 1e-10


def test_condition_p_examples(model):
    res = check_condition_P(model, samples=60)
    assert res.status == "pass"
    assert res.premise_held >= 20  # the cone samples always satisfy the premise
    assert "sampled" in res.note


def test_condition_p_z2_large_sweep():
    res = check_condition_P(build_group_algebra(2), samples=500, tol=1e-9)
    assert res.status == "pass" and res.counterexample is None
