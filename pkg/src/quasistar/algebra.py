"""Finite-dimensional *-algebras given by structure constants.

Conventions
-----------
``structure_constants[i, j, k]`` is the coefficient of basis_k in
basis_i * basis_j.  The involution is antilinear: for coordinates ``a``,
``a* = involution @ conj(a)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .kernels import triple_product_residual
from .report import VerificationReport

DEFAULT_TOL = 1e-9


def _frozen(a, dtype=np.complex128):
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class AlgebraStructure:
    structure_constants: np.ndarray
    involution: np.ndarray
    unit: np.ndarray

    def __post_init__(self):
        c = _frozen(self.structure_constants)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
            raise DimensionMismatch(f"structure constants must be d x d x d, got {c.shape}")
        d = c.shape[0]
        if d == 0:
            raise DimensionMismatch("algebra dimension must be positive")
        s = _frozen(self.involution)
        if s.shape != (d, d):
            raise DimensionMismatch(f"involution must be {d} x {d}, got {s.shape}")
        u = _frozen(self.unit)
        if u.shape != (d,):
            raise DimensionMismatch(f"unit must have length {d}, got {u.shape}")
        object.__setattr__(self, "structure_constants", c)
        object.__setattr__(self, "involution", s)
        object.__setattr__(self, "unit", u)

    @property
    def dim(self) -> int:
        return self.structure_constants.shape[0]

    def basis(self, i):
        e = np.zeros(self.dim, dtype=np.complex128)
        e[i] = 1.0
        return e

    def left_regular(self, a):
        """Matrix of b -> a b in the algebra basis."""
        a = _check(a, self.dim)
        return np.einsum("i,ijk->kj", a, self.structure_constants, optimize=True)

    def right_regular(self, a):
        """Matrix of b -> b a in the algebra basis."""
        a = _check(a, self.dim)
        return np.einsum("j,ijk->ki", a, self.structure_constants, optimize=True)


def _check(a, dim):
    a = np.asarray(a, dtype=np.complex128)
    if a.shape != (dim,):
        raise DimensionMismatch(f"expected a vector of length {dim}, got shape {a.shape}")
    return a


def multiply(a, b, alg: AlgebraStructure):
    a = _check(a, alg.dim)
    b = _check(b, alg.dim)
    return np.einsum("i,j,ijk->k", a, b, alg.structure_constants, optimize=True)


def involute(a, alg: AlgebraStructure):
    a = _check(a, alg.dim)
    return alg.involution @ np.conj(a)


def star_products(alg: AlgebraStructure):
    """Tensor T[i, j, k] = coefficient of basis_k in (basis_i)* basis_j."""
    return np.einsum("pi,pjk->ijk", alg.involution, alg.structure_constants, optimize=True)


def verify_star_algebra(alg: AlgebraStructure, tol=DEFAULT_TOL) -> VerificationReport:
    c = alg.structure_constants
    s = alg.involution
    d = alg.dim
    rep = VerificationReport("*-algebra axioms")

    rep.add("associativity", "(xy)z = x(yz)", triple_product_residual(c, c, c, c), tol)

    # (x_i x_j)* against x_j* x_i*
    lhs = np.einsum("km,ijm->ijk", s, np.conj(c), optimize=True)
    rhs = np.einsum("pj,qi,pqk->ijk", s, s, c, optimize=True)
    rep.add("antimultiplicativity", "(xy)* = y* x*", np.abs(lhs - rhs).max(), tol)

    rep.add(
        "involutive",
        "(x*)* = x",
        np.abs(s @ np.conj(s) - np.eye(d)).max(),
        tol,
    )

    # antilinearity holds by the storage convention; probe it on fixed vectors
    rng = np.random.default_rng(0)
    a = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    b = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    alpha, beta = 0.3 - 1.1j, -0.7 + 0.2j
    lin = involute(alpha * a + beta * b, alg) - (
        np.conj(alpha) * involute(a, alg) + np.conj(beta) * involute(b, alg)
    )
    rep.add("antilinearity", "(ax + by)* = conj(a) x* + conj(b) y*", np.abs(lin).max(), tol)

    u = alg.unit
    left = np.einsum("i,ijk->jk", u, c, optimize=True) - np.eye(d)
    right = np.einsum("j,ijk->ik", u, c, optimize=True) - np.eye(d)
    rep.add("unit", "1x = x = x1", max(np.abs(left).max(), np.abs(right).max()), tol)
    return rep
