"""Tensor products of finite Hilbert quasi *-algebras.

Every Kronecker construction uses first-factor-major ordering: the basis
vector e_i (x) f_j of the product has index ``i * dim2 + j``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .algebra import DEFAULT_TOL, AlgebraStructure
from .errors import DimensionMismatch, InvariantViolation, NotRepresentable
from .functionals import (
    Functional,
    check_representable,
    representing_vector,
    riesz_vector,
)
from .quasi import (
    OperatorMatrix,
    QuasiPair,
    boundedness_norm,
    compression,
    is_weakly_positive,
    left_mult_operator,
    vector_left_operator,
    require_valid,
)
from .report import VerificationReport
from .sampling import random_ambient, random_cone_element, rng_for

KRONECKER_ORDER = "first-factor-major"


def _kron3(t1, t2):
    a1, b1, c1 = t1.shape
    a2, b2, c2 = t2.shape
    return np.einsum("ijk,lmn->iljmkn", t1, t2, optimize=True).reshape(a1 * a2, b1 * b2, c1 * c2)


@dataclass(frozen=True, eq=False)
class TensorPair(QuasiPair):
    @property
    def first(self) -> QuasiPair:
        return self.factors[0]

    @property
    def second(self) -> QuasiPair:
        return self.factors[1]


def build_tensor_pair(p1: QuasiPair, p2: QuasiPair, tol=DEFAULT_TOL, verify=True) -> TensorPair:
    """(x (x) y)(x' (x) y') = xx' (x) yy', (xi (x) eta)* = xi* (x) eta*, gram = gram1 (x) gram2."""
    if verify:
        require_valid(p1, tol)
        require_valid(p2, tol)
    a1, a2 = p1.alg, p2.alg
    alg = AlgebraStructure(
        _kron3(a1.structure_constants, a2.structure_constants),
        np.kron(a1.involution, a2.involution),
        np.kron(a1.unit, a2.unit),
    )
    return TensorPair(
        alg,
        np.kron(p1.embed, p2.embed),
        np.kron(p1.gram, p2.gram),
        left_action=_kron3(p1.left_action, p2.left_action),
        right_action=_kron3(p1.right_action, p2.right_action),
        ambient_involution=np.kron(p1.ambient_involution, p2.ambient_involution),
        name=f"{p1.name} (x) {p2.name}",
        factors=(p1, p2),
    )


def tensor_elements(xi, eta, tp: TensorPair, space="ambient"):
    """Coordinates of xi (x) eta; ``space`` is "ambient" or "sub"."""
    p1, p2 = tp.factors
    dims = (p1.ambient_dim, p2.ambient_dim) if space == "ambient" else (p1.sub_dim, p2.sub_dim)
    xi = np.asarray(xi, dtype=np.complex128)
    eta = np.asarray(eta, dtype=np.complex128)
    if xi.shape != (dims[0],) or eta.shape != (dims[1],):
        raise DimensionMismatch(f"factor vectors must have lengths {dims}, got {xi.shape}, {eta.shape}")
    return np.kron(xi, eta)


def tensor_operator(s: OperatorMatrix, t: OperatorMatrix) -> OperatorMatrix:
    return OperatorMatrix(np.kron(s.entries, t.entries))


def canonical_tensor_map(n1, n2):
    """The bilinear map (xi, eta) -> xi (x) eta as a tensor R[mu, nu, :] in orthonormal coordinates."""
    return np.eye(n1 * n2).reshape(n1, n2, n1 * n2)


def _random_unitary(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _schmidt_matrix(r):
    v = r.reshape(-1, r.shape[2])  # rows are R(e_mu, e_nu)
    return v.T @ np.conj(v)  # sum of v v^H


def schmidt_norm(r, tol=DEFAULT_TOL, seed=0) -> float:
    """sup over unit z of sum_{mu, nu} |<R(e_mu, e_nu), z>|^2 for a bilinear map H x K -> L.

    ``r[mu, nu, :]`` holds R(e_mu, e_nu) in orthonormal coordinates of L.  The
    value is recomputed in randomly rotated orthonormal bases of H and K and
    the two must agree.
    """
    r = np.asarray(r, dtype=np.complex128)
    if r.ndim != 3:
        raise DimensionMismatch("a bilinear map is stored as a 3-index tensor")
    if r.size == 0:
        return 0.0
    value = float(np.linalg.eigvalsh(_schmidt_matrix(r))[-1])
    rng = rng_for(seed)
    q1 = _random_unitary(rng, r.shape[0])
    q2 = _random_unitary(rng, r.shape[1])
    rotated = np.einsum("am,bn,abl->mnl", q1, q2, r, optimize=True)
    again = float(np.linalg.eigvalsh(_schmidt_matrix(rotated))[-1])
    diff = abs(again - value)
    if diff > tol * max(1.0, value):
        raise InvariantViolation("schmidt norm basis independence", diff)
    return max(value, 0.0)


def gram_schmidt(vectors, tol=1e-12):
    """Modified Gram-Schmidt on the columns of ``vectors``.

    Returns (q, r) with orthonormal columns q and vectors = q @ r; columns that
    fall below tol (relative) are dropped from q.
    """
    v = np.array(vectors, dtype=np.complex128)
    n, k = v.shape
    scale = max(1.0, float(np.abs(v).max())) if v.size else 1.0
    qs, coeffs = [], np.zeros((k, k), dtype=np.complex128)
    for i in range(k):
        w = v[:, i].copy()
        for j, q in enumerate(qs):
            coeffs[j, i] = np.conj(q) @ w
            w -= coeffs[j, i] * q
        nrm = np.linalg.norm(w)
        if nrm > tol * scale:
            coeffs[len(qs), i] = nrm
            qs.append(w / nrm)
    q = np.array(qs).T if qs else np.zeros((n, 0), dtype=np.complex128)
    r = coeffs[: q.shape[1]]
    ortho = np.abs(q.conj().T @ q - np.eye(q.shape[1])).max() if qs else 0.0
    if ortho > 1e-10:
        raise InvariantViolation("gram-schmidt orthonormality", ortho)
    return q, r


def _psd_sqrt(h):
    lam, vec = np.linalg.eigh(h)
    return (vec * np.sqrt(np.clip(lam, 0.0, None))) @ vec.conj().T


def positivity_by_orthogonalization(c1, c2, xs, ys):
    """<(C1 (x) C2) z, z> for z = sum_i x_i (x) y_i, computed as in the product argument.

    With x'_i = C1^(1/2) x_i and y'_i = C2^(1/2) y_i, orthonormalize the x'_i and
    regroup z so the cross terms vanish; the value is then a sum of squared norms.
    Returns (direct value, regrouped value).
    """
    z = sum(np.kron(x, y) for x, y in zip(xs.T, ys.T))
    direct = np.conj(z) @ np.kron(c1, c2) @ z
    xp = _psd_sqrt(c1) @ xs
    yp = _psd_sqrt(c2) @ ys
    q, r = gram_schmidt(xp)
    ypp = yp @ r.T  # column k: sum_i r[k, i] y'_i
    regrouped = float(np.sum(np.abs(ypp) ** 2))
    return complex(direct), regrouped


def check_wb_inclusions(tp: TensorPair, samples=100, tol=DEFAULT_TOL, seed=0) -> VerificationReport:
    """Products of weakly positive (bounded) elements stay weakly positive (bounded)."""
    p1, p2 = tp.factors
    rng = rng_for(seed)
    rep = VerificationReport(f"weak positivity and boundedness of products [{tp.name}]")

    worst, fails, gs_res, comp_res = 0.0, 0, 0.0, 0.0
    for _ in range(samples):
        e1 = random_cone_element(p1, rng)
        e2 = random_cone_element(p2, rng)
        wp = is_weakly_positive(np.kron(e1, e2), tp, tol)
        worst = min(worst, wp.min_eigenvalue)
        fails += not wp.positive

        c1 = compression(vector_left_operator(e1, p1), p1)
        c2 = compression(vector_left_operator(e2, p2), p2)
        ctp = compression(vector_left_operator(np.kron(e1, e2), tp), tp)
        comp_res = max(comp_res, float(np.abs(ctp - np.kron(c1, c2)).max()))
        h1 = (c1 + c1.conj().T) / 2
        h2 = (c2 + c2.conj().T) / 2
        terms = int(rng.integers(1, 4))
        xs = rng.standard_normal((p1.sub_dim, terms)) + 1j * rng.standard_normal((p1.sub_dim, terms))
        ys = rng.standard_normal((p2.sub_dim, terms)) + 1j * rng.standard_normal((p2.sub_dim, terms))
        direct, regrouped = positivity_by_orthogonalization(h1, h2, xs, ys)
        gs_res = max(gs_res, abs(direct - regrouped) / max(1.0, abs(direct)))

    rep.add(
        "weak positivity transfer",
        "(H1)+w (x) (H2)+w in (H1 (x) H2)+w",
        max(0.0, -worst),
        tol,
        passed=fails == 0,
        value=worst,
    )
    rep.add("compression factorizes", "C(eta1 (x) eta2) = C(eta1) (x) C(eta2)", comp_res, tol)
    rep.add("orthogonalized expansion", "<z, R z> = sum |x''_i|^2 |y''_i|^2", gs_res, tol)

    excess, eq_res = 0.0, 0.0
    for _ in range(samples):
        x1 = random_ambient(p1, rng)
        x2 = random_ambient(p2, rng)
        n1, n2 = boundedness_norm(x1, p1), boundedness_norm(x2, p2)
        ntp = boundedness_norm(np.kron(x1, x2), tp)
        prod = n1 * n2
        excess = max(excess, (ntp - prod) / prod)
        eq_res = max(eq_res, abs(ntp - prod) / prod)
    rep.add("boundedness transfer", "||L_(chi1 (x) chi2)|| <= ||L_chi1|| ||L_chi2||", max(0.0, excess), tol)
    rep.add("boundedness norms multiply", "||L_(chi1 (x) chi2)|| = ||L_chi1|| ||L_chi2||", eq_res, tol)
    return rep


def tensor_functional(omega1: Functional, omega2: Functional, tp: TensorPair, tol=DEFAULT_TOL) -> Functional:
    """Omega(sum xi_i (x) eta_i) = sum omega1(xi_i) omega2(eta_i) on the product."""
    p1, p2 = tp.factors
    for om, p in ((omega1, p1), (omega2, p2)):
        chk = check_representable(om, p, tol)
        if not chk.representable:
            raise NotRepresentable(f"{om.name} is not representable on {p.name}", chk.positivity.min_eigenvalue)
    return Functional(np.kron(omega1.covector, omega2.covector), name=f"{omega1.name} (x) {omega2.name}")


def tensor_functional_checks(omega1, omega2, tp: TensorPair, tol=DEFAULT_TOL) -> VerificationReport:
    p1, p2 = tp.factors
    big = tensor_functional(omega1, omega2, tp, tol)
    rep = VerificationReport(f"tensor functional [{big.name}]")
    chk = check_representable(big, tp, tol)
    rep.extend(chk.as_report(), prefix="product ")
    chi = np.kron(riesz_vector(omega1, p1, tol).vector, riesz_vector(omega2, p2, tol).vector)
    eta = riesz_vector(big, tp, tol).vector
    rep.add(
        "riesz vector factorizes",
        "riesz(w1 (x) w2) = riesz(w1) (x) riesz(w2)",
        tp.norm(eta - chi) / max(1.0, tp.norm(chi)),
        tol,
    )
    return rep


def restrict_functional(big: Functional, tp: TensorPair, factor: int) -> Functional:
    """omega1(xi) = Omega(xi (x) 1) or omega2(eta) = Omega(1 (x) eta)."""
    p1, p2 = tp.factors
    if big.dim != tp.ambient_dim:
        raise DimensionMismatch("functional does not live on this product")
    w = big.covector.reshape(p1.ambient_dim, p2.ambient_dim)
    if factor == 1:
        return Functional(w @ p2.unit, name=f"{big.name}|1")
    if factor == 2:
        return Functional(p1.unit @ w, name=f"{big.name}|2")
    raise ValueError("factor must be 1 or 2")


def retensor_residual(big: Functional, tp: TensorPair) -> float:
    """Distance between Omega and the product of its two restrictions (reported, not asserted)."""
    w1 = restrict_functional(big, tp, 1).covector
    w2 = restrict_functional(big, tp, 2).covector
    diff = Functional(np.kron(w1, w2) - big.covector)
    return tp.norm(representing_vector(diff, tp))


def density_rank(tp: QuasiPair) -> int:
    """Rank of the embedded A0 (x) B0 inside the product ambient space."""
    return int(np.linalg.matrix_rank(tp.embed))


def crt_bijection(m, n):
    """Index map Z_m x Z_n -> Z_mn: tensor index a * n + b goes to k = a (mod m) = b (mod n)."""
    if gcd(m, n) != 1:
        raise ValueError("Z_m x Z_n is cyclic only for coprime m, n")
    perm = np.empty(m * n, dtype=int)
    for k in range(m * n):
        perm[(k % m) * n + (k % n)] = k
    return perm


def isomorphism_residual(p: QuasiPair, q: QuasiPair, perm) -> float:
    """Largest entrywise mismatch between p and q after relabelling p's basis i as q's perm[i].

    Requires square embeddings on both sides (ambient basis = algebra basis).
    """
    perm = np.asarray(perm, dtype=int)
    d = p.sub_dim
    if q.sub_dim != d or p.ambient_dim != d or q.ambient_dim != d:
        raise DimensionMismatch("isomorphism check needs equal, square models")
    if sorted(perm.tolist()) != list(range(d)):
        raise ValueError("perm must be a permutation")
    pm = np.zeros((d, d))
    pm[perm, np.arange(d)] = 1.0
    ix = np.ix_(perm, perm, perm)
    res = [
        np.abs(q.alg.structure_constants[ix] - p.alg.structure_constants).max(),
        np.abs(pm @ p.alg.involution @ pm.T - q.alg.involution).max(),
        np.abs(pm @ p.alg.unit - q.alg.unit).max(),
        np.abs(pm.T @ q.gram @ pm - p.gram).max(),
        np.abs(pm @ p.embed @ pm.T - q.embed).max(),
        np.abs(q.left_action[ix] - p.left_action).max(),
        np.abs(q.right_action[ix] - p.right_action).max(),
        np.abs(pm @ p.ambient_involution @ pm.T - q.ambient_involution).max(),
    ]
    return float(max(res))


def check_elementary_tensors(tp: TensorPair, samples=200, tol=1e-12, seed=0) -> VerificationReport:
    """Inner product and norm of elementary tensors, product unit, and L_(x (x) y) = L_x (x) L_y."""
    p1, p2 = tp.factors
    rng = rng_for(seed)
    rep = VerificationReport(f"elementary tensors [{tp.name}]")
    ip_res = cn_res = 0.0
    for _ in range(samples):
        x, x2 = random_ambient(p1, rng), random_ambient(p1, rng)
        y, y2 = random_ambient(p2, rng), random_ambient(p2, rng)
        lhs = tp.inner(np.kron(x, y), np.kron(x2, y2))
        rhs = p1.inner(x, x2) * p2.inner(y, y2)
        ip_res = max(ip_res, abs(lhs - rhs) / max(abs(rhs), p1.norm(x) * p1.norm(x2) * p2.norm(y) * p2.norm(y2)))
        nrm = p1.norm(x) * p2.norm(y)
        cn_res = max(cn_res, abs(tp.norm(np.kron(x, y)) - nrm) / nrm)
    rep.add("inner product factorizes", "<x (x) y, x' (x) y'> = <x, x'> <y, y'>", ip_res, tol)
    rep.add("cross-norm", "||x (x) y|| = ||x|| ||y||", cn_res, tol)
    rep.add(
        "product unit",
        "1 (x) 1 is the unit",
        float(np.abs(tp.alg.unit - np.kron(p1.alg.unit, p2.alg.unit)).max()),
        tol,
    )
    lm_res = 0.0
    for _ in range(min(samples, 20)):
        a = rng.standard_normal(p1.sub_dim) + 1j * rng.standard_normal(p1.sub_dim)
        b = rng.standard_normal(p2.sub_dim) + 1j * rng.standard_normal(p2.sub_dim)
        direct = left_mult_operator(np.kron(a, b), tp).entries
        split = np.kron(left_mult_operator(a, p1).entries, left_mult_operator(b, p2).entries)
        lm_res = max(lm_res, float(np.abs(direct - split).max()) / max(1.0, float(np.abs(split).max())))
    rep.add("left multiplication factorizes", "L_(x (x) y) = L_x (x) L_y", lm_res, max(tol, 1e-12))
    return rep


def operator_norm_residual(s: OperatorMatrix, t: OperatorMatrix) -> float:
    """| ||S (x) T|| - ||S|| ||T|| | / (||S|| ||T||), with the product norm computed from the Kronecker matrix."""
    prod = s.norm * t.norm
    if prod == 0.0:
        return tensor_operator(s, t).norm
    return abs(tensor_operator(s, t).norm - prod) / prod
