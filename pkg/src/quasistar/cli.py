"""Command line front end.

Every command emits one report document (JSON by default, ``--format text``
for a rendering) to stdout or ``--out``.  Exit status: 0 when every check in
the report passes, 1 when a check fails (the report is still written), 2 for
usage and input errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .acceptance import run_suite
from .errors import DimensionMismatch, InvariantViolation, NotRepresentable, QuasiStarError, SpecError
from .functionals import (
    Functional,
    check_condition_P,
    check_representable,
    functional_from_vector,
    gns,
    is_fully_representable,
    is_star_semisimple,
    riesz_vector,
)
from .models import PROBES, dyadic_family, truncation_scan
from .quasi import is_weakly_positive, verify_pair
from .report import VerificationReport
from .sampling import random_ambient, rng_for
from .specfile import (
    dumps_spec,
    encode_matrix,
    encode_vector,
    parse_spec_bytes,
    read_spec_bytes,
    tensor_pair_from_spec,
)
from .tensor import (
    build_tensor_pair,
    check_elementary_tensors,
    check_wb_inclusions,
    density_rank,
    restrict_functional,
    retensor_residual,
    tensor_functional,
    tensor_functional_checks,
)

TOOL = "quasistar"


class UsageError(Exception):
    pass


# -- inputs --------------------------------------------------------------------------


class _Loaded:
    def __init__(self, path, validate, tol):
        self.path = path
        self.raw = read_spec_bytes(path)
        self.digest = hashlib.sha256(self.raw).hexdigest()
        self.spec = parse_spec_bytes(self.raw, validate=validate, tol=tol)

    @property
    def pair(self):
        return self.spec.pair

    def describe(self):
        return {"path": str(self.path), "sha256": self.digest}


class _Selector(argparse.Action):
    """Collect --functional / --covector / --vector in command-line order."""

    def __call__(self, parser, namespace, values, option_string=None):
        items = list(getattr(namespace, self.dest) or [])
        items.append((option_string.lstrip("-"), values))
        setattr(namespace, self.dest, items)


def _parse_numbers(text, flag):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--{flag}: not valid JSON ({exc.msg})") from None
    if not isinstance(data, list):
        raise UsageError(f"--{flag}: expected a JSON list")
    out = []
    for v in data:
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            out.append(complex(v))
        elif isinstance(v, list) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v):
            out.append(complex(v[0], v[1]))
        else:
            raise UsageError(f"--{flag}: entries must be numbers or [re, im] pairs")
    return np.array(out, dtype=np.complex128)


def _functional(selector, loaded: _Loaded) -> Functional:
    pair, named = loaded.pair, loaded.spec.functionals
    if selector is None:
        if len(named) == 1:
            return next(iter(named.values()))
        if not named:
            raise UsageError(f"{loaded.path} lists no functionals; pass --functional, --covector or --vector")
        raise UsageError(f"{loaded.path} lists several functionals; choose one with --functional")
    kind, value = selector
    if kind == "functional":
        if value not in named:
            raise UsageError(f"no functional named {value!r} in {loaded.path}; known: {sorted(named)}")
        return named[value]
    vec = _parse_numbers(value, kind)
    if vec.shape != (pair.ambient_dim,):
        raise UsageError(f"--{kind} needs {pair.ambient_dim} entries, got {vec.size}")
    if kind == "covector":
        return Functional(vec, name="covector")
    return functional_from_vector(vec, pair, name="<., vector>")


def _single_selector(args):
    sel = args.select or []
    if len(sel) > 1:
        raise UsageError("give at most one of --functional, --covector, --vector")
    return sel[0] if sel else None


# -- commands ------------------------------------------------------------------------


def _not_representable(rep, exc: NotRepresentable):
    rep.add(
        "weak positivity of the representing vector",
        "L_eta positive on A0",
        max(0.0, -(exc.eigenvalue or 0.0)),
        0.0,
        passed=False,
        value=exc.eigenvalue,
    )


def cmd_verify(args):
    src = _Loaded(args.spec, False, args.tol)
    rep = verify_pair(src.pair, args.tol)
    payload = {
        "name": src.pair.name,
        "sub_dim": src.pair.sub_dim,
        "ambient_dim": src.pair.ambient_dim,
        "functionals": sorted(src.spec.functionals),
    }
    return [src], rep, payload


def cmd_representable(args):
    src = _Loaded(args.spec, True, args.tol)
    om = _functional(_single_selector(args), src)
    chk = check_representable(om, src.pair, args.tol)
    payload = {
        "functional": om.name,
        "min_eigenvalue": chk.positivity.min_eigenvalue,
        "gammas": [float(g) for g in chk.gammas],
        "representable": chk.representable,
    }
    return [src], chk.as_report(f"representability of {om.name}"), payload


def cmd_gns(args):
    src = _Loaded(args.spec, True, args.tol)
    om = _functional(_single_selector(args), src)
    chk = check_representable(om, src.pair, args.tol)
    rep = chk.as_report(f"GNS construction for {om.name}")
    payload = {"functional": om.name}
    if chk.representable:
        g = gns(om, src.pair, args.tol)
        rep.extend(g.checks, prefix="gns: ")
        payload.update(
            gns_dim=g.gns_dim,
            cyclic=encode_vector(g.cyclic),
            representation=[encode_matrix(m) for m in g.rep_basis],
        )
    return [src], rep, payload


def cmd_riesz(args):
    src = _Loaded(args.spec, True, args.tol)
    pair = src.pair
    om = _functional(_single_selector(args), src)
    rep = VerificationReport(f"Riesz vector of {om.name}")
    payload = {"functional": om.name}
    try:
        rv = riesz_vector(om, pair, args.tol)
    except NotRepresentable as exc:
        _not_representable(rep, exc)
        payload["min_eigenvalue"] = exc.eigenvalue
        return [src], rep, payload
    pos = is_weakly_positive(rv.vector, pair, args.tol)
    rep.add(
        "weak positivity of the representing vector",
        "L_eta positive on A0",
        max(0.0, -pos.min_eigenvalue),
        args.tol,
        passed=pos.positive,
        value=pos.min_eigenvalue,
    )
    back = functional_from_vector(rv.vector, pair).covector
    scale = max(1.0, float(np.abs(om.covector).max()))
    rep.add("round trip", "<., riesz(omega)> = omega", float(np.abs(back - om.covector).max()) / scale, args.tol)
    payload.update(
        riesz_vector=encode_vector(rv.vector),
        min_eigenvalue=rv.min_eigenvalue,
        bound=rv.bound,
        gram_condition=rv.condition,
    )
    return [src], rep, payload


def _probes(pair, args):
    rng = rng_for(args.seed)
    return list(np.eye(pair.ambient_dim, dtype=complex)) + [random_ambient(pair, rng) for _ in range(args.probes)]


def cmd_semisimple(args):
    src = _Loaded(args.spec, True, args.tol)
    res = is_star_semisimple(src.pair, _probes(src.pair, args), args.tol, args.samples, args.seed)
    rep = VerificationReport(f"*-semisimplicity [{src.pair.name}]")
    rep.extend(res.form_checks)
    low = float(min(res.witnesses))
    rep.add("probes separated", "Omega(a, a) > 0 for every probe", 0.0, args.tol, passed=low > 0, value=low)
    return [src], rep, {"status": res.status, "probes": len(res.witnesses), "min_witness": low}


def cmd_fully_representable(args):
    src = _Loaded(args.spec, True, args.tol)
    res = is_fully_representable(src.pair, args.tol, cone_samples=args.cone_samples, seed=args.seed)
    suff = res.sufficiency
    rep = VerificationReport(f"full representability [{src.pair.name}]")
    rep.add(
        "sufficiency",
        "some representable omega has omega(a) > 0, for sampled a in A+",
        0.0,
        args.tol,
        passed=suff.status == "pass",
        value=len(suff.witnesses),
    )
    rep.add(
        "domain",
        "every witness form extends to the whole space",
        0.0,
        args.tol,
        passed=res.domain_certified,
        value=res.max_extension_bound,
    )
    payload = {
        "status": res.status,
        "sufficiency": suff.status,
        "witness_functionals": sorted(suff.functionals),
        "offending": None if suff.offending is None else encode_vector(suff.offending),
    }
    return [src], rep, payload


def cmd_condition_p(args):
    src = _Loaded(args.spec, True, args.tol)
    res = check_condition_P(src.pair, args.samples, args.tol, args.seed)
    rep = VerificationReport(f"positivity detection [{src.pair.name}]")
    rep.add(
        "positivity detection",
        "omega(x* a x) >= 0 for all omega, x implies a in A+",
        0.0,
        args.tol,
        passed=res.status == "pass",
        value=res.premise_held,
    )
    payload = {
        "status": res.status,
        "samples": res.samples,
        "premise_held": res.premise_held,
        "counterexample": None if res.counterexample is None else encode_vector(res.counterexample),
        "note": res.note,
    }
    return [src], rep, payload


def cmd_tensor(args):
    a = _Loaded(args.spec1, True, args.tol)
    b = _Loaded(args.spec2, True, args.tol)
    tp = build_tensor_pair(a.pair, b.pair, args.tol)
    rep = VerificationReport(f"tensor product [{tp.name}]")
    rep.extend(verify_pair(tp, args.tol), prefix="product ")
    rep.extend(check_elementary_tensors(tp, args.samples, max(args.tol * 1e-3, 1e-12), args.seed))
    rep.extend(check_wb_inclusions(tp, args.samples, args.tol, args.seed))
    rank = density_rank(tp)
    rep.add("density", "A0 (x) B0 spans the product space", float(tp.ambient_dim - rank), 0.0, value=rank)

    products = []
    for f1 in a.spec.functionals.values():
        for f2 in b.spec.functionals.values():
            try:
                products.append(tensor_functional(f1, f2, tp, args.tol))
            except NotRepresentable:
                continue
    text = dumps_spec(tp, products)
    payload = {
        "name": tp.name,
        "sub_dim": tp.sub_dim,
        "ambient_dim": tp.ambient_dim,
        "kronecker_order": "first-factor-major",
        "functionals": [f.name for f in products],
        "product_sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
    }
    if args.out_spec:
        Path(args.out_spec).write_text(text, encoding="utf-8")
        payload["out_spec"] = str(args.out_spec)
    return [a, b], rep, payload


def cmd_tensor_functional(args):
    a = _Loaded(args.spec1, True, args.tol)
    b = _Loaded(args.spec2, True, args.tol)
    sel = args.select or []
    if len(sel) not in (0, 2):
        raise UsageError("give one functional selector per factor (two in total), or none")
    w1 = _functional(sel[0] if sel else None, a)
    w2 = _functional(sel[1] if sel else None, b)
    tp = build_tensor_pair(a.pair, b.pair, args.tol)
    rep = VerificationReport(f"tensor functional {w1.name} (x) {w2.name}")
    payload = {"functionals": [w1.name, w2.name]}
    try:
        rep.extend(tensor_functional_checks(w1, w2, tp, args.tol))
    except NotRepresentable as exc:
        _not_representable(rep, exc)
        payload["refused"] = exc.reason
        return [a, b], rep, payload
    big = tensor_functional(w1, w2, tp, args.tol)
    payload.update(
        covector=encode_vector(big.covector),
        riesz_vector=encode_vector(riesz_vector(big, tp, args.tol).vector),
        retensor_residual=retensor_residual(big, tp),
    )
    return [a, b], rep, payload


def cmd_restrict(args):
    src = _Loaded(args.spec, True, args.tol)
    tp = tensor_pair_from_spec(src.spec, args.tol)
    big = _functional(_single_selector(args), src)
    factors = (1, 2) if args.factor == "both" else (int(args.factor),)
    chk = check_representable(big, tp, args.tol)
    rep = chk.as_report(f"restrictions of {big.name}")
    payload = {"functional": big.name, "restrictions": {}}
    for k in factors:
        part = restrict_functional(big, tp, k)
        payload["restrictions"][str(k)] = encode_vector(part.covector)
        if chk.representable:
            rep.extend(check_representable(part, tp.factors[k - 1], args.tol).as_report(), prefix=f"factor {k} ")
    payload["retensor_residual"] = retensor_residual(big, tp)
    return [src], rep, payload


def cmd_scan(args):
    family = dyadic_family(args.probe, args.max_level, args.length)
    rows = truncation_scan(family)
    norms = np.array([r["operator_norm"] for r in rows])
    rep = VerificationReport(f"truncation scan [{args.probe}]")
    cross = [r["cross_check"] for r in rows if r["cross_check"] is not None]
    rep.add("generic and diagonal norms agree", "||L_f|| = max |f_k|", max(cross, default=0.0), args.tol)
    expect = args.expect or ("diverging" if args.probe == "spike" else "bounded")
    if expect == "diverging":
        steps = np.diff(norms)
        rep.add(
            "profile strictly increasing",
            "||L_f|| grows with the level",
            max(0.0, -float(steps.min(initial=np.inf))),
            0.0,
            passed=len(norms) >= 5 and bool(np.all(steps > 0)),
            value=len(norms),
        )
        rep.add("growth", "finest / first > 4", 0.0, 0.0, passed=norms[-1] > 4 * norms[0], value=norms[-1] / norms[0])
    else:
        tail = norms[args.plateau_from :]
        var = float((tail.max() - tail.min()) / tail.max()) if tail.size else 0.0
        rep.add("profile plateaus", f"relative variation after level {args.plateau_from}", var, 0.01)
    return [], rep, {"probe": args.probe, "expect": expect, "rows": rows}


def cmd_acceptance(args):
    numbers = None
    if args.criteria:
        try:
            numbers = [int(t) for t in args.criteria.split(",")]
        except ValueError:
            raise UsageError("--criteria takes a comma separated list of integers") from None
        if any(n < 1 or n > 11 for n in numbers):
            raise UsageError("criteria are numbered 1..11")
    results = run_suite(args.seed, numbers)
    rep = VerificationReport("acceptance suite")
    for r in results:
        rep.extend(r.report, prefix=f"C{r.number} ")
    return [], rep, {"criteria": [r.line() for r in results]}


COMMANDS = {
    "verify": cmd_verify,
    "gns": cmd_gns,
    "riesz": cmd_riesz,
    "representable": cmd_representable,
    "semisimple": cmd_semisimple,
    "fully-representable": cmd_fully_representable,
    "condition-p": cmd_condition_p,
    "tensor": cmd_tensor,
    "tensor-functional": cmd_tensor_functional,
    "restrict": cmd_restrict,
    "scan": cmd_scan,
    "acceptance": cmd_acceptance,
}


# -- parser and report ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="check tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled sweeps (default 0)")
    common.add_argument("--samples", type=int, default=200, help="samples per sweep (default 200)")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")

    select = argparse.ArgumentParser(add_help=False)
    for flag, text in (
        ("--functional", "name of a functional listed in the model file"),
        ("--covector", "JSON list: omega(xi) = sum w_k xi_k"),
        ("--vector", "JSON list: omega = <., eta>"),
    ):
        select.add_argument(flag, dest="select", action=_Selector, metavar="VALUE", help=text)

    parser = argparse.ArgumentParser(prog=TOOL, description="Finite Hilbert quasi *-algebra verifier.")
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_text, spec=True, functional=False):
        parents = [common] + ([select] if functional else [])
        p = sub.add_parser(name, parents=parents, help=help_text)
        if spec:
            p.add_argument("spec", help="model spec (JSON)")
        return p

    add("verify", "run the axiom suites")
    add("gns", "GNS triple of a functional", functional=True)
    add("riesz", "representing vector of a functional", functional=True)
    add("representable", "check a functional's representability conditions", functional=True)
    p = add("semisimple", "*-semisimplicity with basis and random probes")
    p.add_argument("--probes", type=int, default=20, help="random probes on top of the basis (default 20)")
    p = add("fully-representable", "sufficiency and full representability")
    p.add_argument("--cone-samples", type=int, default=100)
    add("condition-p", "sampled check that representable functionals detect the positive cone")
    p = add("tensor", "tensor product of two specs", spec=False)
    p.add_argument("spec1")
    p.add_argument("spec2")
    p.add_argument("--out-spec", help="write the product spec here")
    p = add("tensor-functional", "product of one functional per factor", spec=False, functional=True)
    p.add_argument("spec1")
    p.add_argument("spec2")
    p = add("restrict", "restrict a functional on a product spec to its factors", functional=True)
    p.add_argument("--factor", choices=("1", "2", "both"), default="both")
    p = add("scan", "norm profile of a probe over dyadic grids", spec=False)
    p.add_argument("--probe", choices=sorted(PROBES), default="spike")
    p.add_argument("--max-level", type=int, default=10)
    p.add_argument("--length", type=float, default=1.0)
    p.add_argument("--expect", choices=("diverging", "bounded"))
    p.add_argument("--plateau-from", type=int, default=3)
    p = add("acceptance", "run the acceptance suite", spec=False)
    p.add_argument("--criteria", help="comma separated subset, e.g. 1,4,9")
    return parser


def _parameters(args):
    skip = {"command", "out", "format", "select", "spec", "spec1", "spec2", "out_spec"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def report_document(args, inputs, rep: VerificationReport, payload) -> dict:
    return {
        "tool": TOOL,
        "version": __version__,
        "command": args.command,
        "inputs": [i.describe() for i in inputs],
        "parameters": _parameters(args),
        "passed": rep.passed,
        "title": rep.title,
        "checks": [e.as_dict() for e in rep.entries],
        "payload": payload,
    }


def render(doc, fmt) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=1, sort_keys=False) + "\n"
    lines = [f"{doc['tool']} {doc['version']}  {doc['command']}"]
    for i in doc["inputs"]:
        lines.append(f"  input {i['path']}  sha256 {i['sha256']}")
    lines.append(f"== {doc['title']} ==")
    for e in doc["checks"]:
        flag = "PASS" if e["passed"] else "FAIL"
        extra = f" value={e['value']:.6g}" if "value" in e else ""
        lines.append(f"  [{flag}] {e['name']:<40} residual={e['residual']:.3e} tol={e['tol']:.1e}{extra}  ({e['anchor']})")
    lines.append("overall: " + ("PASS" if doc["passed"] else "FAIL"))
    lines.append("payload:")
    lines.append(json.dumps(doc["payload"], indent=1))
    return "\n".join(lines) + "\n"


def _emit(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    try:
        inputs, rep, payload = COMMANDS[args.command](args)
    except (UsageError, SpecError, DimensionMismatch) as exc:
        print(f"{TOOL}: error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        rep = VerificationReport(f"{args.command}: input refused")
        rep.add(exc.invariant, "invariant enforced at load", exc.residual, args.tol, passed=False)
        doc = report_document(args, [], rep, {"error": str(exc)})
        _emit(render(doc, args.format), args.out)
        print(f"{TOOL}: {exc}", file=sys.stderr)
        return 1
    except QuasiStarError as exc:
        print(f"{TOOL}: error: {exc}", file=sys.stderr)
        return 2
    doc = report_document(args, inputs, rep, payload)
    _emit(render(doc, args.format), args.out)
    return 0 if rep.passed else 1
