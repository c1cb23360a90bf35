"""Representable functionals, their forms, GNS triples and Riesz vectors.

A :class:`Functional` stores a covector ``w`` on raw ambient coordinates, so
``omega(xi) = w @ xi``.  The vector representing it through the inner
product, ``omega = <., eta>``, is ``eta = gram^{-1} conj(w)``.

Forms on A0 are stored in orthonormal A0 coordinates as a matrix ``Phi``
with ``phi(x, y) = y^H Phi x``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import DEFAULT_TOL
from .errors import DimensionMismatch, NotRepresentable, QuasiStarError
from .quasi import (
    PositivityResult,
    QuasiPair,
    _positivity,
    boundedness_norm,
    is_weakly_positive,
)
from .report import VerificationReport
from .sampling import random_ambient, random_cone_element, random_self_adjoint, random_sub, rng_for


@dataclass(frozen=True, eq=False)
class Functional:
    covector: np.ndarray
    name: str = "omega"

    def __post_init__(self):
        w = np.array(self.covector, dtype=np.complex128)
        if w.ndim != 1:
            raise DimensionMismatch("a functional covector must be one-dimensional")
        w.setflags(write=False)
        object.__setattr__(self, "covector", w)

    @property
    def dim(self) -> int:
        return self.covector.shape[0]

    def __call__(self, xi):
        return complex(self.covector @ np.asarray(xi, dtype=np.complex128))


def _host(omega: Functional, pair: QuasiPair):
    if omega.dim != pair.ambient_dim:
        raise DimensionMismatch(
            f"functional {omega.name!r} has length {omega.dim}, pair {pair.name!r} "
            f"has ambient dimension {pair.ambient_dim}"
        )
    return omega.covector


def functional_from_vector(eta, pair: QuasiPair, name="omega") -> Functional:
    """omega(xi) = <xi, eta>."""
    eta = pair._amb(eta)
    return Functional(np.conj(pair.gram @ eta), name=name)


def representing_vector(omega: Functional, pair: QuasiPair):
    """The unique eta with omega = <., eta> (no positivity check)."""
    w = _host(omega, pair)
    return np.linalg.solve(pair.gram, np.conj(w))


# -- forms -------------------------------------------------------------------------


def _form_raw(w, pair):
    """N[j, i] = omega(x_j* x_i) over the raw A0 basis."""
    w0 = w @ pair.embed
    return np.einsum("pj,pik,k->ji", pair.alg.involution, pair.alg.structure_constants, w0, optimize=True)


def _form_orthonormal(w, pair):
    t = pair.sub_chol_inv
    return t.conj().T @ _form_raw(w, pair) @ t


@dataclass(frozen=True, eq=False)
class SesqForm:
    matrix: np.ndarray
    domain: str  # "A0" or "A"
    psd: bool
    min_eigenvalue: float
    bound: float = float("nan")
    full_domain: bool = False

    def __call__(self, x, y):
        """phi(x, y) for x, y in orthonormal coordinates of the form's domain."""
        return complex(np.conj(y) @ self.matrix @ x)


def sesquilinear_form(omega: Functional, pair: QuasiPair, tol=DEFAULT_TOL) -> SesqForm:
    """phi(x, y) = omega(y* x) on A0 x A0."""
    phi = _form_orthonormal(_host(omega, pair), pair)
    pos = _positivity(phi, tol)
    return SesqForm(phi, "A0", pos.positive, pos.min_eigenvalue, bound=float(np.linalg.norm(phi, 2)))


def closure_extension(phi: SesqForm, pair: QuasiPair) -> SesqForm:
    """Continuous extension of a positive form on A0 to the whole ambient space.

    In orthonormal coordinates this is ``P Phi P^H`` with P the isometric
    embedding; when A0 is not all of H the form vanishes on the orthogonal
    complement and ``full_domain`` is False.
    """
    if phi.domain != "A0":
        raise QuasiStarError("closure_extension expects a form on A0")
    if not phi.psd:
        raise NotRepresentable("form is not positive semidefinite; no closed extension", phi.min_eigenvalue)
    p = pair.isometry
    ext = p @ phi.matrix @ p.conj().T
    dense = np.linalg.matrix_rank(pair.embed) == pair.ambient_dim
    return SesqForm(
        ext,
        "A",
        True,
        phi.min_eigenvalue,
        bound=float(np.linalg.norm(ext, 2)),
        full_domain=bool(dense),
    )


# -- positivity, symmetry and relative boundedness ---------------------------------


@dataclass
class RepresentabilityReport:
    positivity: PositivityResult  # omega(x* x) >= 0
    symmetry_residual: float  # omega(y* a x) = conj(omega(x* a* y))
    boundedness_passed: bool  # |omega(a* x)| <= gamma_a omega(x* x)^(1/2)
    boundedness_residual: float
    gammas: np.ndarray  # best constants per ambient basis vector a
    tol: float
    form: np.ndarray = field(repr=False, default=None)

    @property
    def representable(self) -> bool:
        return bool(
            self.positivity.positive and self.symmetry_residual <= self.tol and self.boundedness_passed
        )

    def __bool__(self):
        return self.representable

    def as_report(self, title="representability") -> VerificationReport:
        rep = VerificationReport(title)
        rep.add(
            "L1 positivity",
            "omega(x* x) >= 0",
            max(0.0, -self.positivity.min_eigenvalue, self.positivity.antihermitian_residual),
            self.tol,
            passed=self.positivity.positive,
            value=self.positivity.min_eigenvalue,
        )
        rep.add("L2 symmetry", "omega(y* a* x) = conj(omega(x* a y))", self.symmetry_residual, self.tol)
        rep.add(
            "L3 relative boundedness",
            "|omega(a* x)| <= gamma_a omega(x* x)^(1/2)",
            self.boundedness_residual,
            self.tol,
            passed=self.boundedness_passed,
            value=float(self.gammas.max()) if self.gammas.size else 0.0,
        )
        return rep


def _spectral_range(phi, tol):
    """Eigenpairs of the Hermitian part kept above tol * largest eigenvalue."""
    herm = (phi + phi.conj().T) / 2
    lam, vec = np.linalg.eigh(herm)
    top = lam[-1] if lam.size else 0.0
    if top <= tol:
        return lam[:0], vec[:, :0]
    keep = lam > tol * top
    return lam[keep], vec[:, keep]


def check_representable(omega: Functional, pair: QuasiPair, tol=DEFAULT_TOL) -> RepresentabilityReport:
    w = _host(omega, pair)
    s = pair.alg.involution
    lact, ract, j = pair.left_action, pair.right_action, pair.ambient_involution

    phi = _form_orthonormal(w, pair)
    pos = _positivity(phi, tol)

    lw = np.einsum("plk,k->pl", lact, w, optimize=True)  # omega(x_p . e_l)
    rw = np.einsum("xmk,k->xm", ract, w, optimize=True)  # omega(e_m . x_x)
    # omega(y* (a* x)) indexed [y, a, x]
    rj = np.einsum("ma,xml->xal", j, ract, optimize=True)
    t1 = np.einsum("py,pl,xal->yax", s, lw, rj, optimize=True)
    # omega((x* a) y) indexed [x, a, y]
    t2 = np.einsum("px,pal,yl->xay", s, lact, rw, optimize=True)
    sym = float(np.abs(t1 - np.conj(t2).transpose(2, 1, 0)).max())

    # relative boundedness: the covector x -> omega(a* x) must lie in the range of phi
    v = np.einsum("ma,xm->ax", j, rw, optimize=True) @ pair.sub_chol_inv  # rows in orthonormal coordinates
    lam, vec = _spectral_range(phi, tol)
    b = np.conj(v).T  # columns r_a^H
    coef = vec.conj().T @ b
    resid = np.linalg.norm(b - vec @ coef, axis=0)
    gammas = np.linalg.norm(coef / np.sqrt(lam)[:, None], axis=0) if lam.size else np.zeros(b.shape[1])
    scale = np.maximum(1.0, np.linalg.norm(b, axis=0))
    l3_ok = bool(np.all(resid <= tol * scale))
    return RepresentabilityReport(
        pos, sym, l3_ok, float(resid.max()) if resid.size else 0.0, gammas, tol, form=phi
    )


# -- GNS ---------------------------------------------------------------------------


@dataclass(eq=False)
class GnsTriple:
    lambda_map: np.ndarray  # gns_dim x ambient_dim, acts on raw ambient coordinates
    rep_basis: np.ndarray  # rep_basis[j] = pi(e_j)
    cyclic: np.ndarray
    checks: VerificationReport

    @property
    def gns_dim(self) -> int:
        return self.lambda_map.shape[0]

    def rep(self, a):
        a = np.asarray(a, dtype=np.complex128)
        if a.shape != (self.rep_basis.shape[0],):
            raise DimensionMismatch("element does not live in the ambient space of this triple")
        return np.tensordot(a, self.rep_basis, axes=1)

    def expectation(self, a):
        """<pi(a) xi, xi>."""
        return complex(np.conj(self.cyclic) @ self.rep(a) @ self.cyclic)


def gns(omega: Functional, pair: QuasiPair, tol=DEFAULT_TOL) -> GnsTriple:
    """Cyclic representation reproducing omega(a) = <pi(a) xi, xi>.

    The null space of the form is cut at eigenvalues <= tol * largest.
    """
    check = check_representable(omega, pair, tol)
    if not check.representable:
        raise NotRepresentable("functional is not representable", check.positivity.min_eigenvalue)
    w = omega.covector
    n, d = pair.ambient_dim, pair.sub_dim
    t = pair.sub_chol_inv
    lam, vec = _spectral_range(check.form, tol)
    r = lam.size

    # lambda(a) solves <lambda(a), lambda(f_j)> = omega(f_j* a) over the orthonormal basis f_j
    fstar = pair.alg.involution @ np.conj(t)  # column j: f_j* in raw A0 coordinates
    lw = np.einsum("plk,k->pl", pair.left_action, w, optimize=True)
    c = fstar.T @ lw  # c[j, a] = omega(f_j* e_a)
    lam_map = (vec.conj().T @ c) / np.sqrt(lam)[:, None] if r else np.zeros((0, n), complex)

    # pi(a) lambda(x) = lambda(a x), with lambda restricted to A0 inverted on its range
    w_pinv = vec / np.sqrt(lam)[None, :] if r else np.zeros((d, 0), complex)
    right = lam_map @ np.einsum("ijk->jki", pair.right_action)  # right[a] = lambda(e_a . x) over raw x
    rep_basis = np.einsum("arx,xd,ds->ars", right, t, w_pinv, optimize=True) if r else np.zeros((n, 0, 0), complex)
    cyclic = lam_map @ pair.unit

    checks = _gns_checks(pair, omega, lam_map, rep_basis, cyclic, lam, vec, tol)
    return GnsTriple(lam_map, rep_basis, cyclic, checks)


def _gns_checks(pair, omega, lam_map, rep_basis, cyclic, lam, vec, tol):
    rep = VerificationReport(f"GNS construction [{pair.name}]")
    n, d = pair.ambient_dim, pair.sub_dim
    r = lam.size
    w = omega.covector
    if r == 0:
        rep.add("reconstruction", "omega(a) = <pi(a) xi, xi>", np.abs(w).max() if w.size else 0.0, tol)
        return rep
    expect = np.einsum("r,ars,s->a", np.conj(cyclic), rep_basis, cyclic, optimize=True)
    rep.add("reconstruction", "omega(a) = <pi(a) xi, xi>", np.abs(expect - w).max(), tol)

    adj = np.einsum("ma,mrs->ars", pair.ambient_involution, rep_basis, optimize=True)
    rep.add(
        "adjoint",
        "pi(a*) = pi(a)^H",
        np.abs(adj - np.conj(rep_basis).transpose(0, 2, 1)).max(),
        tol,
    )
    lam_sub = lam_map @ pair.embed  # lambda on raw A0 coordinates
    restricted = np.sqrt(lam)[:, None] * vec.conj().T @ pair.sub_chol
    rep.add("lambda consistency", "lambda on A0 from the form", np.abs(lam_sub - restricted).max(), tol)
    # pi(a) lambda(x) = lambda(a x)
    lhs = np.einsum("ars,sx->arx", rep_basis, lam_sub, optimize=True)
    rhs = np.einsum("rk,xak->arx", lam_map, pair.right_action, optimize=True)
    rep.add("intertwining", "pi(a) lambda(x) = lambda(ax)", np.abs(lhs - rhs).max(), tol)
    # pi(a x) = pi(a) pi(x) on basis pairs
    pi_sub = np.einsum("mx,mrs->xrs", pair.embed, rep_basis, optimize=True)
    prod = np.einsum("ars,xst->axrt", rep_basis, pi_sub, optimize=True)
    ax = np.einsum("xak,krs->axrs", pair.right_action, rep_basis, optimize=True)
    rep.add("multiplicativity", "pi(ax) = pi(a) pi(x)", np.abs(prod - ax).max(), tol)
    rep.add("unit", "pi(1) = I", np.abs(np.tensordot(pair.unit, rep_basis, axes=1) - np.eye(r)).max(), tol)
    span = np.einsum("xrs,s->rx", pi_sub, cyclic, optimize=True)
    rank = np.linalg.matrix_rank(span, tol=tol * max(1.0, np.abs(span).max()))
    rep.add("cyclicity", "span pi(A0) xi = H_omega", float(r - rank), 0.0, value=rank)
    return rep


# -- Riesz correspondence ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RieszVector:
    vector: np.ndarray
    min_eigenvalue: float  # of the compression of x -> eta x
    bound: float  # ||L_eta||
    condition: float  # of the gram solve


def riesz_vector(omega: Functional, pair: QuasiPair, tol=DEFAULT_TOL) -> RieszVector:
    """The weakly positive bounded eta with omega = <., eta>.

    Refuses (NotRepresentable) when eta is not weakly positive.
    """
    eta = representing_vector(omega, pair)
    pos = is_weakly_positive(eta, pair, tol)
    if not pos.positive:
        raise NotRepresentable("representing vector is not weakly positive", pos.min_eigenvalue)
    return RieszVector(eta, pos.min_eigenvalue, boundedness_norm(eta, pair), float(np.linalg.cond(pair.gram)))


# -- cones, sufficiency, full representability -------------------------------------


@dataclass(frozen=True)
class ConeDecision:
    member: bool
    selfadjoint_residual: float
    min_eigenvalue: float

    def __bool__(self):
        return self.member


def positive_cone_test(a, pair: QuasiPair, tol=DEFAULT_TOL) -> ConeDecision:
    """a in A+ iff a = a* and the compression of x -> a x to A0 is positive.

    Exact for the shipped group-algebra, matrix-algebra and grid-function models.
    """
    a = pair._amb(a)
    sa = pair.norm(a - pair.involute(a))
    pos = is_weakly_positive(a, pair, tol)
    return ConeDecision(bool(sa <= tol and pos.positive), sa, pos.min_eigenvalue)


def default_family(pair: QuasiPair, size=8, seed=12345):
    """Fixed pseudo-random functionals <., eta> with eta a sum of squares."""
    rng = rng_for(seed)
    return [
        functional_from_vector(random_cone_element(pair, rng), pair, name=f"family[{k}]")
        for k in range(size)
    ]


@dataclass
class SufficiencyResult:
    status: str  # "pass", "fail" or "undecided"
    witnesses: list = field(default_factory=list)  # (sample index, functional name, omega(a))
    offending: np.ndarray | None = None
    functionals: dict = field(default_factory=dict, repr=False)

    @property
    def sufficient(self):
        return self.status == "pass"


def check_sufficiency(pair: QuasiPair, cone_samples=100, tol=DEFAULT_TOL, seed=0, family=None) -> SufficiencyResult:
    """For sampled nonzero a in A+, find a representable continuous omega with omega(a) > 0.

    With ``family=None`` the self-witness <., a> is tried first, then a fixed
    pseudo-random family.  An explicitly empty family cannot decide anything.
    """
    if family is not None and len(family) == 0:
        return SufficiencyResult("undecided")
    rng = rng_for(seed)
    representable = {}

    def ok(om):
        key = id(om)
        if key not in representable:  # keep om alive so its id stays unique
            representable[key] = (om, check_representable(om, pair, tol).representable)
        return representable[key][1]

    tail = default_family(pair) if family is None else []
    result = SufficiencyResult("pass")
    for k in range(cone_samples):
        a = random_cone_element(pair, rng)
        if family is None:
            candidates = [functional_from_vector(a, pair, name=f"<., a_{k}>")] + tail
        else:
            candidates = list(family)
        found = None
        for om in candidates:
            val = om(a)
            if val.real > tol and abs(val.imag) <= tol and ok(om):
                found = (k, om.name, val.real)
                result.functionals[om.name] = om
                break
        if found is None:
            return SufficiencyResult("fail", result.witnesses, offending=a, functionals=result.functionals)
        result.witnesses.append(found)
    return result


@dataclass
class FullRepresentability:
    status: str
    sufficiency: SufficiencyResult
    domain_certified: bool
    max_extension_bound: float


def is_fully_representable(pair: QuasiPair, tol=DEFAULT_TOL, cone_samples=100, seed=0, family=None):
    """Sufficiency of the representable continuous functionals plus A_R = A.

    The second half is certified by extending the form of every witness to
    the whole space.
    """
    suff = check_sufficiency(pair, cone_samples, tol, seed, family)
    if suff.status == "undecided":
        return FullRepresentability("undecided", suff, False, float("nan"))
    domain_ok = True
    bound = 0.0
    for om in suff.functionals.values():
        ext = closure_extension(sesquilinear_form(om, pair, tol), pair)
        domain_ok &= ext.full_domain and np.isfinite(ext.bound)
        bound = max(bound, ext.bound)
    if not suff.functionals:
        domain_ok = False
    status = "pass" if suff.sufficient and domain_ok else "fail"
    return FullRepresentability(status, suff, bool(domain_ok), bound)


# -- *-semisimplicity --------------------------------------------------------------


@dataclass
class SemisimplicityResult:
    status: str
    form_checks: VerificationReport
    witnesses: list  # Omega(a, a) per probe


def inner_product_form_checks(pair: QuasiPair, tol=DEFAULT_TOL, samples=200, seed=0) -> VerificationReport:
    """Verify that the ambient inner product belongs to S_{A0}(A)."""
    rep = VerificationReport(f"inner product as an invariant form [{pair.name}]")
    g = pair.gram
    lo = float(np.linalg.eigvalsh((g + g.conj().T) / 2)[0])
    rep.add("positivity", "Omega(a, a) >= 0", max(0.0, -lo), tol, value=lo)

    ract, j, e = pair.right_action, pair.ambient_involution, pair.embed
    ax = ract.transpose(1, 0, 2)  # [a, x, :] = e_a . x
    asy = np.einsum("ma,yml->ayl", j, ract, optimize=True)  # [a, y, :] = e_a* . y
    lhs = np.einsum("ly,lk,axk->axy", np.conj(e), g, ax, optimize=True)
    rhs = np.einsum("ayl,lk,kx->axy", np.conj(asy), g, e, optimize=True)
    basis_res = float(np.abs(lhs - rhs).max())

    rng = rng_for(seed)
    sampled = 0.0
    cs = 0.0
    for _ in range(samples):
        a = random_ambient(pair, rng)
        x = random_sub(pair, rng)
        y = random_sub(pair, rng)
        l = pair.inner(pair.right_multiply(a, x), pair.embedded(y))
        r = pair.inner(pair.embedded(x), pair.right_multiply(pair.involute(a), y))
        sampled = max(sampled, abs(l - r))
        b = random_ambient(pair, rng)
        cs = max(cs, abs(pair.inner(a, b)) - pair.norm(a) * pair.norm(b))
    rep.add("invariance", "Omega(ax, y) = Omega(x, a* y)", max(basis_res, sampled), tol)
    rep.add("contractivity", "|Omega(a, b)| <= ||a|| ||b||", max(0.0, cs), tol)
    return rep


def is_star_semisimple(pair: QuasiPair, probes, tol=DEFAULT_TOL, samples=200, seed=0) -> SemisimplicityResult:
    checks = inner_product_form_checks(pair, tol, samples, seed)
    witnesses = []
    for k, a in enumerate(probes):
        nrm = pair.norm(a)
        if nrm <= tol:
            raise QuasiStarError(f"probe {k} has norm {nrm:.3e} <= tol; probes must be nonzero")
        witnesses.append(nrm**2)
    ok = checks.passed and all(v > 0 for v in witnesses)
    return SemisimplicityResult("pass" if ok else "fail", checks, witnesses)


# -- positivity detection ----------------------------------------------------------


@dataclass
class ConditionPResult:
    status: str
    samples: int
    premise_held: int
    counterexample: np.ndarray | None = None
    note: str = "sampled check, not exhaustive"


def _premise(a, omega, pair, tol):
    """omega(x* a x) >= 0 for every x in A0, via the form x -> omega(x* a x)."""
    w = omega.covector
    lw = np.einsum("plk,k->pl", pair.left_action, w, optimize=True)
    axm = np.einsum("m,iml->il", a, pair.right_action, optimize=True)  # a . x_i
    m_raw = np.einsum("pj,pl,il->ji", pair.alg.involution, lw, axm, optimize=True)
    t = pair.sub_chol_inv
    return _positivity(t.conj().T @ m_raw @ t, tol).positive


def check_condition_P(pair: QuasiPair, samples=200, tol=DEFAULT_TOL, seed=0, family_size=4) -> ConditionPResult:
    rng = rng_for(seed)
    family = [functional_from_vector(pair.unit, pair, name="<., 1>")]
    family += default_family(pair, size=family_size, seed=rng)
    for om in family:
        if not check_representable(om, pair, tol).representable:
            raise QuasiStarError(f"family member {om.name} is not representable")
    held = 0
    for k in range(samples):
        kind = k % 3
        if kind == 0:
            a = random_cone_element(pair, rng)
        elif kind == 1:
            a = random_self_adjoint(pair, rng)
        else:
            a = random_ambient(pair, rng)
            a = a / pair.norm(a)
        if all(_premise(a, om, pair, tol) for om in family):
            held += 1
            if not positive_cone_test(a, pair, tol).member:
                return ConditionPResult("fail", k + 1, held, counterexample=a)
    return ConditionPResult("pass", samples, held)
