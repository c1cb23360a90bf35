"""The acceptance suite: eleven property checks at fixed tolerances.

Each criterion returns a :class:`VerificationReport`; :func:`run_suite`
collects them into a deterministic document.  Wall-clock timings are kept
out of the document so that identical seeds give identical bytes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .algebra import verify_star_algebra
from .functionals import (
    check_representable,
    functional_from_vector,
    gns,
    is_fully_representable,
    is_star_semisimple,
    riesz_vector,
)
from .models import (
    build_function_model,
    build_group_algebra,
    build_matrix_algebra,
    build_symmetric_group_algebra,
    dyadic_family,
    truncation_scan,
)
from .quasi import OperatorMatrix, verify_hilbert_axioms
from .report import VerificationReport
from .sampling import complex_normal, random_ambient, random_cone_element, rng_for
from .tensor import (
    build_tensor_pair,
    check_elementary_tensors,
    check_wb_inclusions,
    crt_bijection,
    isomorphism_residual,
    operator_norm_residual,
    tensor_functional_checks,
)

GRID_WEIGHTS_6 = [0.1, 0.15, 0.2, 0.25, 0.2, 0.1]


def _factor_models():
    return [
        build_group_algebra(2),
        build_group_algebra(5),
        build_symmetric_group_algebra(3),
        build_matrix_algebra(2),
        build_function_model(6, GRID_WEIGHTS_6),
    ]


def _product_models():
    return [
        build_tensor_pair(build_group_algebra(2), build_group_algebra(3)),
        build_tensor_pair(build_function_model(3, [0.5, 0.25, 0.25]), build_function_model(4)),
    ]


def _seeded(seed, k):
    return rng_for(np.random.SeedSequence([seed, k]))


def criterion_1(seed=0, tol=1e-10):
    rep = VerificationReport("axiom suites on shipped builders")
    for label, pairs in (
        ("C[Z_n], n = 1..8", [build_group_algebra(n) for n in range(1, 9)]),
        ("function models, m = 1..64", [build_function_model(m) for m in range(1, 65)]),
    ):
        worst, ok = 0.0, True
        for p in pairs:
            for r in (verify_star_algebra(p.alg, tol), verify_hilbert_axioms(p, tol)):
                worst = max(worst, r.max_residual)
                ok &= r.passed
        rep.add(label, "*-algebra and Hilbert algebra axioms", worst, tol, passed=ok)
    return rep


def criterion_2(seed=0, tol=1e-9, per_model=50):
    rng = _seeded(seed, 2)
    rep = VerificationReport("GNS reconstruction")
    for p in _factor_models():
        expect = adjoint = 0.0
        for _ in range(per_model):
            omega = functional_from_vector(random_cone_element(p, rng), p)
            g = gns(omega, p, tol)
            for j in range(p.ambient_dim):
                e = np.zeros(p.ambient_dim, dtype=complex)
                e[j] = 1.0
                expect = max(expect, abs(omega(e) - g.expectation(e)))
                adjoint = max(adjoint, float(np.abs(g.rep(p.involute(e)) - g.rep(e).conj().T).max(initial=0.0)))
        rep.add(f"{p.name}: omega(a) = <pi(a) xi, xi>", "cyclic vector reproduces omega", expect, tol)
        rep.add(f"{p.name}: pi(a*) = pi(a)^*", "*-representation", adjoint, tol)
    return rep


def criterion_3(seed=0, tol=1e-10, per_model=100):
    rng = _seeded(seed, 3)
    rep = VerificationReport("Riesz correspondence")
    for p in _factor_models():
        fwd = back = 0.0
        lowest = np.inf
        for _ in range(per_model):
            eta = random_cone_element(p, rng) * rng.uniform(0.5, 2.0)
            omega = functional_from_vector(eta, p)
            rv = riesz_vector(omega, p, tol)
            fwd = max(fwd, p.norm(rv.vector - eta) / p.norm(eta))
            again = functional_from_vector(rv.vector, p).covector
            back = max(back, float(np.abs(again - omega.covector).max() / np.abs(omega.covector).max()))
            lowest = min(lowest, rv.min_eigenvalue)
        rep.add(f"{p.name}: eta -> omega -> eta", "riesz(<., eta>) = eta", fwd, tol)
        rep.add(f"{p.name}: omega -> eta -> omega", "<., riesz(omega)> = omega", back, tol)
        rep.add(
            f"{p.name}: riesz vectors weakly positive",
            "smallest eigenvalue >= -tol",
            max(0.0, -lowest),
            tol,
            value=float(lowest),
        )
    return rep


def criterion_4(seed=0, tol=1e-12, samples=200):
    rep = VerificationReport("cross-norm and inner product factorization")
    for k, tp in enumerate(_product_models()):
        chk = check_elementary_tensors(tp, samples=samples, tol=tol, seed=_seeded(seed, 40 + k))
        for name in ("inner product factorizes", "cross-norm"):
            e = chk[name]
            rep.add(f"{tp.name}: {name}", e.axiom, e.residual, tol)
    return rep


def criterion_5(seed=0, tol=1e-10, pairs=50, max_dim=12):
    rng = _seeded(seed, 5)
    worst = 0.0
    for _ in range(pairs):
        a, b, c, d = rng.integers(1, max_dim + 1, size=4)
        s = OperatorMatrix(complex_normal(rng, (a, b)))
        t = OperatorMatrix(complex_normal(rng, (c, d)))
        worst = max(worst, operator_norm_residual(s, t))
    rep = VerificationReport("operator norm of tensor products")
    rep.add(f"{pairs} random pairs up to {max_dim}x{max_dim}", "||S (x) T|| = ||S|| ||T||", worst, tol)
    return rep


def criterion_6(seed=0, tol=1e-10, samples=100):
    rep = VerificationReport("weak positivity and boundedness transfer")
    models = _product_models() + [build_tensor_pair(build_matrix_algebra(2), build_group_algebra(2))]
    for k, tp in enumerate(models):
        chk = check_wb_inclusions(tp, samples=samples, tol=tol, seed=_seeded(seed, 60 + k))
        for name in ("weak positivity transfer", "boundedness norms multiply"):
            e = chk[name]
            rep.add(f"{tp.name}: {name}", e.axiom, e.residual, tol, passed=e.passed, value=e.value)
    return rep


def criterion_7(seed=0, tol=1e-10, pairs=50):
    rng = _seeded(seed, 7)
    rep = VerificationReport("representability of product functionals")
    for tp in _product_models():
        p1, p2 = tp.factors
        riesz_res, all_repr = 0.0, True
        for _ in range(pairs):
            w1 = functional_from_vector(random_cone_element(p1, rng), p1, name="omega1")
            w2 = functional_from_vector(random_cone_element(p2, rng), p2, name="omega2")
            chk = tensor_functional_checks(w1, w2, tp, tol)
            riesz_res = max(riesz_res, chk["riesz vector factorizes"].residual)
            all_repr &= all(e.passed for e in chk.entries if e.name.startswith("product "))
        rep.add(f"{tp.name}: riesz factorizes", "riesz(w1 (x) w2) = riesz(w1) (x) riesz(w2)", riesz_res, tol)
        rep.add(f"{tp.name}: product functionals representable", "L1, L2, L3", 0.0, tol, passed=all_repr)
    return rep


def criterion_8(seed=0, tol=1e-10, cone_samples=100, random_probes=20):
    rng = _seeded(seed, 8)
    rep = VerificationReport("*-semisimplicity and full representability of products")
    combos = [
        (build_group_algebra(2), build_group_algebra(3)),
        (build_function_model(3, [0.5, 0.25, 0.25]), build_group_algebra(2)),
        (build_matrix_algebra(2), build_group_algebra(2)),
        (build_symmetric_group_algebra(3), build_function_model(2)),
    ]
    for p1, p2 in combos:
        tp = build_tensor_pair(p1, p2)
        probes = list(np.eye(tp.ambient_dim, dtype=complex))
        probes += [random_ambient(tp, rng) for _ in range(random_probes)]
        ss = is_star_semisimple(tp, probes, tol, samples=200, seed=rng)
        rep.add(
            f"{tp.name}: *-semisimple",
            "inner product is an invariant form separating points",
            ss.form_checks.max_residual,
            tol,
            passed=ss.status == "pass",
            value=float(min(ss.witnesses)),
        )
        fr = is_fully_representable(tp, tol, cone_samples=cone_samples, seed=rng)
        rep.add(
            f"{tp.name}: fully representable",
            "witnesses for sampled cone elements, A_R = A",
            0.0,
            tol,
            passed=fr.status == "pass",
            value=len(fr.sufficiency.witnesses),
        )
    return rep


def criterion_9(seed=0):
    tp = build_tensor_pair(build_group_algebra(2), build_group_algebra(3))
    res = isomorphism_residual(tp, build_group_algebra(6), crt_bijection(2, 3))
    rep = VerificationReport("group isomorphism oracle")
    rep.add("C[Z_2] (x) C[Z_3] = C[Z_6]", "basis bijection (a, b) -> k, k = a mod 2 = b mod 3", res, 0.0)
    return rep


def criterion_10(seed=0, max_level=10, plateau_from=3):
    rep = VerificationReport("truncation scans")
    spike = [r["operator_norm"] for r in truncation_scan(dyadic_family("spike", max_level))]
    steps = np.diff(spike)
    rep.add(
        "spike profile strictly increasing",
        f"{len(spike)} dyadic levels",
        max(0.0, -float(steps.min(initial=np.inf))),
        0.0,
        passed=len(spike) >= 5 and bool(np.all(steps > 0)),
        value=len(spike),
    )
    rep.add(
        "spike profile exceeds 4x initial",
        "||L_f|| at the finest level / at the first",
        0.0,
        0.0,
        passed=spike[-1] > 4 * spike[0],
        value=spike[-1] / spike[0],
    )
    smooth = np.array([r["operator_norm"] for r in truncation_scan(dyadic_family("smooth", max_level))])
    tail = smooth[plateau_from:]
    variation = float((tail.max() - tail.min()) / tail.max())
    rep.add("smooth profile plateaus", f"relative variation after level {plateau_from}", variation, 0.01)
    return rep


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
}

TITLES = {
    1: "axiom suite on builders",
    2: "GNS reconstruction",
    3: "Riesz correspondence",
    4: "cross-norm and inner product factorization",
    5: "operator norm multiplicativity",
    6: "weak positivity and boundedness transfer",
    7: "representability of product functionals",
    8: "*-semisimple and fully representable products",
    9: "group isomorphism oracle",
    10: "truncation scan",
    11: "determinism",
}


@dataclass
class CriterionResult:
    number: int
    title: str
    report: VerificationReport

    @property
    def passed(self) -> bool:
        return self.report.passed

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] criterion {self.number:>2}: {self.title} (max residual {self.report.max_residual:.3e})"

    def as_dict(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed, **self.report.as_dict()}


def run_criterion(number: int, seed=0) -> CriterionResult:
    if number == 11:
        return determinism(seed)
    return CriterionResult(number, TITLES[number], CRITERIA[number](seed=seed))


def _document(results) -> str:
    return json.dumps([r.as_dict() for r in results], indent=1)


def determinism(seed=0, numbers=tuple(CRITERIA)) -> CriterionResult:
    first = _document([run_criterion(n, seed) for n in numbers])
    second = _document([run_criterion(n, seed) for n in numbers])
    rep = VerificationReport("determinism")
    rep.add(
        "two runs give identical bytes",
        f"criteria {min(numbers)}..{max(numbers)}, seed {seed}",
        0.0 if first == second else 1.0,
        0.0,
        value=len(first),
    )
    return CriterionResult(11, TITLES[11], rep)


def run_suite(seed=0, numbers=None) -> list[CriterionResult]:
    numbers = sorted(numbers or list(TITLES))
    return [run_criterion(n, seed) for n in numbers]
