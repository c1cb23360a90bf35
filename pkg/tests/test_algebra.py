import numpy as np
import pytest

from quasistar.algebra import AlgebraStructure, involute, multiply, verify_star_algebra
from quasistar.errors import DimensionMismatch
from quasistar.models import build_group_algebra, build_matrix_algebra, build_symmetric_group_algebra

from conftest import basis


def convolve_zn(a, b):
    """Group convolution on Z_n by explicit double loop."""
    n = len(a)
    out = np.zeros(n, dtype=complex)
    for g in range(n):
        for h in range(n):
            out[(g + h) % n] += a[g] * b[h]
    return out


def test_z2_delta_g_squared_is_identity():
    alg = build_group_algebra(2).alg
    np.testing.assert_array_equal(multiply(basis(2, 1), basis(2, 1), alg), basis(2, 0))


def test_z3_g_times_g2_is_identity():
    alg = build_group_algebra(3).alg
    np.testing.assert_array_equal(multiply(basis(3, 1), basis(3, 2), alg), basis(3, 0))


def test_z3_involution_inverts_group_element():
    alg = build_group_algebra(3).alg
    np.testing.assert_array_equal(involute(basis(3, 1), alg), basis(3, 2))


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_multiply_matches_brute_force_convolution(n, rng):
    alg = build_group_algebra(n).alg
    for _ in range(10):
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        np.testing.assert_allclose(multiply(a, b, alg), convolve_zn(a, b), atol=1e-12)


def test_group_involution_is_conjugate_reflection(rng):
    n = 6
    alg = build_group_algebra(n).alg
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    expected = np.conj(a[(-np.arange(n)) % n])
    np.testing.assert_allclose(involute(a, alg), expected, atol=0)


def test_matrix_algebra_matches_numpy_matmul(rng):
    k = 3
    alg = build_matrix_algebra(k).alg
    a = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    b = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    np.testing.assert_allclose(multiply(a.ravel(), b.ravel(), alg), (a @ b).ravel(), atol=1e-12)
    np.testing.assert_allclose(involute(a.ravel(), alg), a.conj().T.ravel(), atol=0)


def test_symmetric_group_composition():
    # permutations of {0,1,2} in lexicographic order; (g h)(t) = g(h(t))
    import itertools

    perms = list(itertools.permutations(range(3)))
    alg = build_symmetric_group_algebra(3).alg
    for gi, g in enumerate(perms):
        for hi, h in enumerate(perms):
            gh = tuple(g[h[t]] for t in range(3))
            np.testing.assert_array_equal(
                multiply(basis(6, gi), basis(6, hi), alg), basis(6, perms.index(gh))
            )


def test_unit_law_and_double_involution(model, rng):
    alg = model.alg
    for _ in range(100):
        a = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
        np.testing.assert_allclose(multiply(alg.unit, a, alg), a, atol=1e-12)
        np.testing.assert_allclose(multiply(a, alg.unit, alg), a, atol=1e-12)
        np.testing.assert_allclose(involute(involute(a, alg), alg), a, atol=1e-12)
    np.testing.assert_allclose(involute(alg.unit, alg), alg.unit, atol=0)


def test_involution_reverses_products(model, rng):
    alg = model.alg
    for _ in range(100):
        a = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
        b = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
        lhs = involute(multiply(a, b, alg), alg)
        rhs = multiply(involute(b, alg), involute(a, alg), alg)
        assert np.abs(lhs - rhs).max() <= 1e-10 * max(1.0, np.abs(lhs).max())


def test_multiply_is_bilinear(model, rng):
    alg = model.alg
    d = alg.dim
    a, b, c = (rng.standard_normal(d) + 1j * rng.standard_normal(d) for _ in range(3))
    s = 0.3 - 2.0j
    np.testing.assert_allclose(
        multiply(s * a + b, c, alg), s * multiply(a, c, alg) + multiply(b, c, alg), atol=1e-12
    )
    np.testing.assert_allclose(
        multiply(c, s * a + b, alg), s * multiply(c, a, alg) + multiply(c, b, alg), atol=1e-12
    )


def test_dimension_mismatch_rejected():
    alg = build_group_algebra(3).alg
    with pytest.raises(DimensionMismatch):
        multiply(np.ones(2), np.ones(3), alg)
    with pytest.raises(DimensionMismatch):
        involute(np.ones(4), alg)


def test_c_z4_all_axioms_exact():
    rep = verify_star_algebra(build_group_algebra(4).alg)
    assert rep.passed
    assert rep.max_residual == 0.0
    assert set(rep.names()) >= {"associativity", "antimultiplicativity", "antilinearity", "unit"}


def test_scalars_pass():
    alg = AlgebraStructure(np.ones((1, 1, 1)), np.ones((1, 1)), np.ones(1))
    assert verify_star_algebra(alg).passed


def test_perturbed_structure_constant_breaks_associativity():
    base = build_group_algebra(4).alg
    c = np.array(base.structure_constants)
    c[0, 0, 0] += 1e-3
    realized = c[0, 0, 0].real - 1.0  # 1e-3 after rounding of 1.001
    rep = verify_star_algebra(AlgebraStructure(c, base.involution, base.unit))
    assert rep["associativity"].residual >= realized
    assert rep["associativity"].residual == pytest.approx(1e-3, rel=1e-12)
    assert not rep["associativity"].passed


def test_structure_is_immutable():
    alg = build_group_algebra(2).alg
    with pytest.raises(ValueError):
        alg.structure_constants[0, 0, 0] = 5.0
