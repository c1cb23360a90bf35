"""Finite models of Hilbert quasi *-algebras.

A :class:`QuasiPair` is an ambient inner-product space H (coordinates of
length ``ambient_dim``) together with an embedded *-algebra A0.

Conventions
-----------
* inner product: ``<u, v> = v^H @ gram @ u`` (linear in the first slot);
* ``left_action[i, j, k]``: coefficient of e_k in x_i . e_j (A0 acting on the left of H);
* ``right_action[i, j, k]``: coefficient of e_k in e_j . x_i (A0 acting on the right);
* ``ambient_involution`` J is antilinear: ``a* = J @ conj(a)``.

Operator matrices are returned in orthonormal coordinates obtained from the
Cholesky factorisations ``gram = U^H U`` (ambient) and ``E^H gram E = U0^H U0``
(subalgebra), so norms and Hermitian parts carry their usual meaning.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import linalg as sla

from .algebra import DEFAULT_TOL, AlgebraStructure, star_products, verify_star_algebra
from .errors import DimensionMismatch, InvariantViolation
from .kernels import triple_product_residual
from .report import VerificationReport

GRAM_HERMITIAN_TOL = 1e-12
GRAM_DEGENERACY = 1e-12


def _frozen(a):
    arr = np.array(a, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


def _derived_action(alg, embed, side):
    """Extend the algebra product to the ambient space through an invertible embedding."""
    einv = np.linalg.inv(embed)
    c = alg.structure_constants
    if side == "left":
        # x_i . e_j with e_j = E y, y = Einv[:, j]
        prod = np.einsum("qj,iqk->ijk", einv, c, optimize=True)
    else:
        prod = np.einsum("qj,qik->ijk", einv, c, optimize=True)
    return np.einsum("mk,ijk->ijm", embed, prod, optimize=True)


@dataclass(frozen=True, eq=False)
class QuasiPair:
    alg: AlgebraStructure
    embed: np.ndarray
    gram: np.ndarray
    left_action: np.ndarray | None = None
    right_action: np.ndarray | None = None
    ambient_involution: np.ndarray | None = None
    name: str = "pair"
    factors: tuple = field(default=())

    def __post_init__(self):
        d = self.alg.dim
        e = _frozen(self.embed)
        if e.ndim != 2 or e.shape[1] != d:
            raise DimensionMismatch(f"embedding must be n x {d}, got {e.shape}")
        n = e.shape[0]
        if n < d:
            raise DimensionMismatch("embedding must be injective (ambient_dim >= sub_dim)")
        g = _frozen(self.gram)
        if g.shape != (n, n):
            raise DimensionMismatch(f"gram must be {n} x {n}, got {g.shape}")
        herm = float(np.abs(g - g.conj().T).max())
        if herm > GRAM_HERMITIAN_TOL * max(1.0, float(np.abs(g).max())):
            raise InvariantViolation("gram hermitian", herm)
        ev = np.linalg.eigvalsh((g + g.conj().T) / 2)
        if ev[0] <= GRAM_DEGENERACY * max(ev[-1], 0.0) or ev[-1] <= 0:
            raise InvariantViolation(
                "gram positive definite", ev[0], "smallest eigenvalue not above 1e-12 * largest"
            )
        if np.linalg.matrix_rank(e) < d:
            raise InvariantViolation("embedding injective", 0.0)

        square = n == d
        fields = {}
        for fname, side in (("left_action", "left"), ("right_action", "right")):
            t = getattr(self, fname)
            if t is None:
                if not square:
                    raise DimensionMismatch(f"{fname} is required when ambient_dim > sub_dim")
                t = _derived_action(self.alg, e, side)
            t = _frozen(t)
            if t.shape != (d, n, n):
                raise DimensionMismatch(f"{fname} must be {d} x {n} x {n}, got {t.shape}")
            fields[fname] = t
        j = self.ambient_involution
        if j is None:
            if not square:
                raise DimensionMismatch("ambient_involution is required when ambient_dim > sub_dim")
            # J conj(E) = E S
            j = e @ self.alg.involution @ np.linalg.inv(np.conj(e))
        j = _frozen(j)
        if j.shape != (n, n):
            raise DimensionMismatch(f"ambient_involution must be {n} x {n}, got {j.shape}")
        fields["ambient_involution"] = j
        fields["embed"] = e
        fields["gram"] = g
        for k, v in fields.items():
            object.__setattr__(self, k, v)

    # -- dimensions and coordinates -------------------------------------------------

    @property
    def sub_dim(self) -> int:
        return self.alg.dim

    @property
    def ambient_dim(self) -> int:
        return self.embed.shape[0]

    @property
    def unit(self):
        """The unit in ambient coordinates."""
        return self.embed @ self.alg.unit

    @cached_property
    def chol(self):
        """Upper factor U with gram = U^H U."""
        g = (self.gram + self.gram.conj().T) / 2
        return np.linalg.cholesky(g).conj().T

    @cached_property
    def sub_gram(self):
        return self.embed.conj().T @ self.gram @ self.embed

    @cached_property
    def sub_chol(self):
        g = (self.sub_gram + self.sub_gram.conj().T) / 2
        return np.linalg.cholesky(g).conj().T

    @cached_property
    def sub_chol_inv(self):
        return sla.solve_triangular(self.sub_chol, np.eye(self.sub_dim))

    @cached_property
    def chol_inv(self):
        return sla.solve_triangular(self.chol, np.eye(self.ambient_dim))

    @cached_property
    def isometry(self):
        """The embedding A0 -> H in orthonormal coordinates on both sides."""
        return self.chol @ self.embed @ self.sub_chol_inv

    def inner(self, u, v):
        return np.conj(v) @ self.gram @ u

    def norm(self, u) -> float:
        return float(np.sqrt(max(self.inner(u, u).real, 0.0)))

    def involute(self, a):
        a = self._amb(a)
        return self.ambient_involution @ np.conj(a)

    def to_orthonormal(self, a):
        return self.chol @ self._amb(a)

    def from_orthonormal(self, a):
        return self.chol_inv @ np.asarray(a, dtype=np.complex128)

    def embedded(self, x):
        return self.embed @ self._sub(x)

    def _amb(self, a):
        a = np.asarray(a, dtype=np.complex128)
        if a.shape != (self.ambient_dim,):
            raise DimensionMismatch(
                f"expected an ambient vector of length {self.ambient_dim}, got shape {a.shape}"
            )
        return a

    def _sub(self, x):
        x = np.asarray(x, dtype=np.complex128)
        if x.shape != (self.sub_dim,):
            raise DimensionMismatch(
                f"expected a subalgebra vector of length {self.sub_dim}, got shape {x.shape}"
            )
        return x

    # -- products --------------------------------------------------------------------

    def left_multiply(self, x, a):
        """x . a for x in A0 (subalgebra coordinates) and a ambient."""
        return np.einsum("i,j,ijk->k", self._sub(x), self._amb(a), self.left_action, optimize=True)

    def right_multiply(self, a, x):
        """a . x for a ambient and x in A0."""
        return np.einsum("i,j,ijk->k", self._sub(x), self._amb(a), self.right_action, optimize=True)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))

    @property
    def domain_dim(self) -> int:
        return self.entries.shape[1]

    @property
    def codomain_dim(self) -> int:
        return self.entries.shape[0]

    @property
    def norm(self) -> float:
        if self.entries.size == 0:
            return 0.0
        return float(np.linalg.norm(self.entries, 2))

    @property
    def hermitian_part(self):
        m = self.entries
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatch("hermitian part needs a square operator")
        return (m + m.conj().T) / 2

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return OperatorMatrix(self.entries @ other.entries)
        return self.entries @ other


def left_mult_operator(x, pair: QuasiPair) -> OperatorMatrix:
    """a -> x a on H."""
    m = np.einsum("i,ijk->kj", pair._sub(x), pair.left_action, optimize=True)
    return OperatorMatrix(pair.chol @ m @ pair.chol_inv)


def right_mult_operator(x, pair: QuasiPair) -> OperatorMatrix:
    """a -> a x on H."""
    m = np.einsum("i,ijk->kj", pair._sub(x), pair.right_action, optimize=True)
    return OperatorMatrix(pair.chol @ m @ pair.chol_inv)


def vector_left_operator(xi, pair: QuasiPair) -> OperatorMatrix:
    """x -> xi x from A0 into H."""
    m = np.einsum("j,ijk->ki", pair._amb(xi), pair.right_action, optimize=True)
    return OperatorMatrix(pair.chol @ m @ pair.sub_chol_inv)


@dataclass(frozen=True)
class PositivityResult:
    positive: bool
    min_eigenvalue: float
    antihermitian_residual: float

    def __bool__(self):
        return self.positive


def compression(op: OperatorMatrix, pair: QuasiPair):
    """Compress an operator A0 -> H to a form on A0: <op x, y> for x, y in A0."""
    return pair.isometry.conj().T @ op.entries


def _positivity(c, tol):
    herm = (c + c.conj().T) / 2
    anti = float(np.abs(c - herm).max()) if c.size else 0.0
    lo = float(np.linalg.eigvalsh(herm)[0]) if c.size else 0.0
    return PositivityResult(lo >= -tol and anti <= tol, lo, anti)


def is_weakly_positive(xi, pair: QuasiPair, tol=DEFAULT_TOL) -> PositivityResult:
    """Decide <xi x, x> >= 0 on A0 from the compression of x -> xi x.

    The decision needs both a nonnegative Hermitian part and a vanishing
    anti-Hermitian part, since a positive operator on a complex space has a
    real quadratic form.
    """
    return _positivity(compression(vector_left_operator(xi, pair), pair), tol)


def boundedness_norm(xi, pair: QuasiPair) -> float:
    return vector_left_operator(xi, pair).norm


# -- axiom suites --------------------------------------------------------------------


def verify_quasi_axioms(pair: QuasiPair, tol=DEFAULT_TOL) -> VerificationReport:
    """Bimodule, involution and norm requirements on the ambient space."""
    rep = VerificationReport(f"quasi *-algebra axioms [{pair.name}]")
    e, c, s, j = pair.embed, pair.alg.structure_constants, pair.alg.involution, pair.ambient_involution
    lact, ract = pair.left_action, pair.right_action
    scale = max(1.0, float(np.abs(e).max()))

    want = np.einsum("mk,ijk->ijm", e, c, optimize=True)
    got_l = np.einsum("ijk,jq->iqk", lact, e, optimize=True)  # x_i . E x_q
    got_r = np.einsum("ijk,jq->qik", ract, e, optimize=True)  # E x_q . x_i
    rep.add("left action extends product", "x.(Ey) = E(xy)", np.abs(got_l - want).max() / scale, tol)
    rep.add("right action extends product", "(Ex).y = E(xy)", np.abs(got_r - want).max() / scale, tol)

    rep.add(
        "involution extends",
        "(Ex)* = E(x*)",
        np.abs(j @ np.conj(e) - e @ s).max() / scale,
        tol,
    )
    rep.add("ambient involutive", "(a*)* = a", np.abs(j @ np.conj(j) - np.eye(pair.ambient_dim)).max(), tol)

    # (x a) y = x (a y):  p1 = x_i . e_j, p2 = e_m . y_k ; q1 = e_j . y_k, q2 = x_i . e_m
    ract_t = np.ascontiguousarray(ract.transpose(1, 0, 2))
    rep.add(
        "left-right associativity",
        "(xa)y = x(ay)",
        triple_product_residual(lact, ract_t, ract_t, lact),
        tol,
    )
    # (a x) y = a (x y):  p1 = e_i . x_j, p2 = e_m . y_k ; q1 = x_j y_k (in A0), q2 = e_i . x_m
    rep.add(
        "right associativity",
        "(ax)y = a(xy)",
        triple_product_residual(ract_t, ract_t, c, ract_t),
        tol,
    )
    # (x y) a = x (y a):  p1 = x_i y_j (in A0), p2 = x_m . e_k ; q1 = y_j . e_k, q2 = x_i . e_m
    rep.add(
        "left associativity",
        "(xy)a = x(ya)",
        triple_product_residual(c, lact, lact, lact),
        tol,
    )
    # (a x)* = x* a* on basis pairs
    lhs = np.einsum("km,ijm->jik", j, np.conj(ract), optimize=True)  # (e_j . x_i)*  indexed [j, i]
    rhs = np.einsum("pi,mj,pmk->jik", s, j, lact, optimize=True)     # x_i* . e_j*
    rep.add("involution reverses products", "(ax)* = x* a*", np.abs(lhs - rhs).max(), tol)

    # ||a*|| = ||a|| for all a  <=>  conj(J^H G J) = G
    g = pair.gram
    iso = np.abs(np.conj(j.conj().T @ g @ j) - g).max() / max(1.0, float(np.abs(g).max()))
    rep.add("involution isometric", "||a*|| = ||a||", iso, tol)

    rank = np.linalg.matrix_rank(e)
    rep.add(
        "density of A0",
        "A0 dense in H (finite model: embedding onto)",
        float(pair.ambient_dim - rank),
        0.0,
        value=rank,
    )
    rmax = max(
        (right_mult_operator(pair.alg.basis(i), pair).norm for i in range(pair.sub_dim)),
        default=0.0,
    )
    rep.add(
        "right multiplications bounded",
        "R_x continuous on H",
        0.0,
        tol,
        passed=bool(np.isfinite(rmax)),
        value=rmax,
    )
    return rep


def verify_hilbert_axioms(pair: QuasiPair, tol=DEFAULT_TOL) -> VerificationReport:
    rep = VerificationReport(f"Hilbert algebra axioms [{pair.name}]")
    c, s = pair.alg.structure_constants, pair.alg.involution
    d = pair.sub_dim
    g0 = pair.sub_gram

    # y -> xy bounded on A0; report the largest bound over basis x
    bounds = []
    for i in range(d):
        m = pair.alg.left_regular(pair.alg.basis(i))
        bounds.append(np.linalg.norm(pair.sub_chol @ m @ pair.sub_chol_inv, 2))
    bound = float(max(bounds))
    rep.add(
        "continuity of y -> xy",
        "||xy|| <= C_x ||y||",
        0.0,
        tol,
        passed=bool(np.isfinite(bound)),
        value=bound,
    )

    # <x_i x_j, x_k> = <x_j, x_i* x_k>
    lhs = np.einsum("ijb,kb->ijk", c, g0.T, optimize=True)
    star = star_products(pair.alg)  # x_i* x_k
    rhs = np.einsum("ika,aj->ijk", np.conj(star), g0, optimize=True)
    rep.add("adjoint invariance", "<xy, z> = <y, x* z>", np.abs(lhs - rhs).max(), tol)

    # <x_i, x_j> = <x_j*, x_i*>
    res3 = np.abs(g0.T - s.conj().T @ g0 @ s).max()
    rep.add("involution symmetry", "<x, y> = <y*, x*>", res3, tol)

    # products x_i x_j span A0
    rank = np.linalg.matrix_rank(c.reshape(d * d, d))
    rep.add("A0^2 total", "span{xy} = A0", float(d - rank), 0.0, value=rank)
    return rep


def verify_pair(pair: QuasiPair, tol=DEFAULT_TOL) -> VerificationReport:
    """The *-algebra, quasi *-algebra and Hilbert algebra suites in one report."""
    rep = VerificationReport(f"axiom suites [{pair.name}]")
    rep.extend(verify_star_algebra(pair.alg, tol), prefix="star: ")
    rep.extend(verify_quasi_axioms(pair, tol), prefix="quasi: ")
    rep.extend(verify_hilbert_axioms(pair, tol), prefix="hilbert: ")
    return rep


def require_valid(pair: QuasiPair, tol=DEFAULT_TOL) -> QuasiPair:
    """Raise InvariantViolation naming the first failed axiom."""
    for e in verify_pair(pair, tol).entries:
        if not e.passed:
            raise InvariantViolation(f"{pair.name}: {e.name}", e.residual, e.axiom)
    return pair
