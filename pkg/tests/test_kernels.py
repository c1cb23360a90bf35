import os
import subprocess
import sys

import numpy as np
import pytest

from quasistar import kernels
from quasistar.algebra import AlgebraStructure, verify_star_algebra
from quasistar.models import build_function_model, build_group_algebra, build_matrix_algebra

BACKENDS = [kernels.triple_product_residual_py]
if kernels.HAVE_COMPILED:
    BACKENDS.append(kernels.triple_product_residual_compiled)


def brute_force(p1, p2, q1, q2):
    lhs = np.einsum("ijm,mkl->ijkl", p1, p2)
    rhs = np.einsum("jkm,iml->ijkl", q1, q2)
    return float(np.abs(lhs - rhs).max()) if lhs.size else 0.0


def _rand(rng, shape, density=1.0):
    t = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return t * (rng.random(shape) < density)


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda f: f.__name__)
@pytest.mark.parametrize("density", [1.0, 0.3])
def test_backend_matches_brute_force(backend, density, rng):
    for _ in range(5):
        ni, nj, nm1, nk, nl, nm2 = rng.integers(1, 5, size=6)
        p1 = _rand(rng, (ni, nj, nm1), density)
        p2 = _rand(rng, (nm1, nk, nl), density)
        q1 = _rand(rng, (nj, nk, nm2), density)
        q2 = _rand(rng, (ni, nm2, nl), density)
        assert backend(p1, p2, q1, q2) == pytest.approx(brute_force(p1, p2, q1, q2), rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda f: f.__name__)
def test_associative_models_give_zero(backend):
    for pair in (build_group_algebra(5), build_matrix_algebra(3), build_function_model(6)):
        c = pair.alg.structure_constants
        assert backend(c, c, c, c) == 0.0


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda f: f.__name__)
def test_shape_errors_and_empty(backend):
    with pytest.raises(ValueError):
        backend(np.ones((2, 2, 2)), np.ones((3, 2, 2)), np.ones((2, 2, 2)), np.ones((2, 2, 2)))
    assert backend(np.ones((0, 2, 2)), np.ones((2, 2, 2)), np.ones((2, 2, 2)), np.ones((0, 2, 2))) == 0.0


@pytest.mark.skipif(not kernels.HAVE_COMPILED, reason="compiled extension not built")
def test_backends_agree_on_models():
    for pair in (build_group_algebra(7), build_matrix_algebra(2)):
        c = pair.alg.structure_constants.copy()
        c[0, 1, 1] += 0.25
        a = kernels.triple_product_residual_py(c, c, c, c)
        b = kernels.triple_product_residual_compiled(c, c, c, c)
        assert a == pytest.approx(b, rel=1e-14) and a > 0


def test_perturbation_detected_by_active_backend():
    c = build_group_algebra(3).alg.structure_constants.copy()
    c[1, 1, 2] = 1.001  # breaks associativity by 1e-3 in a single slot
    res = kernels.triple_product_residual(c, c, c, c)
    realized = c[1, 1, 2] - 1.0
    assert res >= realized
    assert res == pytest.approx(1e-3, rel=1e-9)
    rep = verify_star_algebra(AlgebraStructure(c, build_group_algebra(3).alg.involution, build_group_algebra(3).alg.unit))
    assert not rep["associativity"].passed


@pytest.mark.parametrize("value,expected", [("1", "python"), ("0", None), ("", None)])
def test_environment_switch(value, expected):
    env = dict(os.environ, QUASISTAR_PURE_PYTHON=value)
    res = subprocess.run(
        [sys.executable, "-c", "from quasistar import kernels; print(kernels.BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    want = expected or ("cython" if kernels.HAVE_COMPILED else "python")
    assert res.stdout.strip() == want
