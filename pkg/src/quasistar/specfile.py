"""JSON model files: loading, validation and writing.

A file holds either explicit data::

    {
      "name": "C[Z_2]",
      "sub_dim": 2, "ambient_dim": 2,
      "structure_constants": [[i, j, k, re, im], ...],   # nonzero c[i, j, k]
      "involution": [[[re, im], ...], ...],              # sub_dim x sub_dim
      "unit": [[re, im], ...],
      "embedding": [[[re, im], ...], ...],               # ambient_dim x sub_dim
      "gram": [[[re, im], ...], ...],                    # ambient_dim x ambient_dim
      "ambient_involution": ..., "left_action": [...], "right_action": [...],  # optional
      "functionals": [{"name": "omega", "covector": [[re, im], ...]}],       # optional
      "tensor": {"kronecker_order": "first-factor-major", "factors": [...]}   # optional
    }

or a builder shortcut ``{"builder": "cyclic_group", "params": [4]}`` (optionally
with "name" and "functionals"), never both.  Real entries may be written as
plain numbers instead of pairs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .algebra import DEFAULT_TOL, AlgebraStructure
from .errors import InvariantViolation, QuasiStarError, SpecError
from .functionals import Functional
from .models import build
from .quasi import QuasiPair, require_valid

EXPLICIT_FIELDS = (
    "sub_dim",
    "ambient_dim",
    "structure_constants",
    "involution",
    "unit",
    "embedding",
    "gram",
    "ambient_involution",
    "left_action",
    "right_action",
)
KNOWN_FIELDS = set(EXPLICIT_FIELDS) | {"name", "functionals", "builder", "params", "tensor"}


@dataclass
class ParsedSpec:
    pair: QuasiPair
    functionals: dict[str, Functional] = field(default_factory=dict)
    tensor: dict | None = None


# -- decoding ----------------------------------------------------------------------


def _scalar(v, where):
    if isinstance(v, bool):
        raise SpecError(where, "expected a number or a [re, im] pair")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in v):
        return complex(v[0], v[1])
    raise SpecError(where, "expected a number or a [re, im] pair")


def _vector(data, where, n):
    if not isinstance(data, list) or len(data) != n:
        raise SpecError(where, f"expected a list of {n} entries")
    return np.array([_scalar(v, f"{where}[{i}]") for i, v in enumerate(data)], dtype=np.complex128)


def _matrix(data, where, rows, cols):
    if not isinstance(data, list) or len(data) != rows:
        raise SpecError(where, f"expected {rows} rows")
    return np.array([_vector(r, f"{where}[{i}]", cols) for i, r in enumerate(data)], dtype=np.complex128)


def _sparse3(data, where, shape):
    if not isinstance(data, list):
        raise SpecError(where, "expected a list of [i, j, k, re, im] entries")
    out = np.zeros(shape, dtype=np.complex128)
    for n, entry in enumerate(data):
        loc = f"{where}[{n}]"
        if not isinstance(entry, list) or len(entry) != 5:
            raise SpecError(loc, "expected [i, j, k, re, im]")
        idx = entry[:3]
        if not all(isinstance(t, int) and not isinstance(t, bool) for t in idx):
            raise SpecError(loc, "indices must be integers")
        if any(not 0 <= t < s for t, s in zip(idx, shape)):
            raise SpecError(loc, f"index out of range for shape {shape}")
        out[tuple(idx)] += _scalar(entry[3:], loc)
    return out


def _dim(doc, key):
    v = doc.get(key)
    if not isinstance(v, int) or isinstance(v, bool) or v < 1:
        raise SpecError(key, "expected a positive integer")
    return v


def _functionals(doc, n):
    items = doc.get("functionals", [])
    if not isinstance(items, list):
        raise SpecError("functionals", "expected a list")
    out = {}
    for i, item in enumerate(items):
        where = f"functionals[{i}]"
        if not isinstance(item, dict) or not isinstance(item.get("name"), str):
            raise SpecError(where, "expected an object with a string 'name'")
        if item["name"] in out:
            raise SpecError(where, f"duplicate functional name {item['name']!r}")
        w = _vector(item.get("covector"), f"{where}.covector", n)
        out[item["name"]] = Functional(w, name=item["name"])
    return out


def spec_from_dict(doc, validate=True, tol=DEFAULT_TOL) -> ParsedSpec:
    if not isinstance(doc, dict):
        raise SpecError("<root>", "expected a JSON object")
    unknown = sorted(set(doc) - KNOWN_FIELDS)
    if unknown:
        raise SpecError(unknown[0], "unknown field")

    if "builder" in doc:
        explicit = [k for k in EXPLICIT_FIELDS if k in doc]
        if explicit:
            raise SpecError(explicit[0], "explicit data cannot be combined with a builder shortcut")
        name = doc["builder"]
        params = doc.get("params", [])
        if not isinstance(name, str):
            raise SpecError("builder", "expected a builder name")
        if not isinstance(params, list) or not all(isinstance(p, int) and not isinstance(p, bool) for p in params):
            raise SpecError("params", "expected a list of integers")
        try:
            pair = build(name, params)
        except TypeError as exc:
            raise SpecError("params", f"wrong number of parameters for {name!r}: {exc}") from None
        except QuasiStarError as exc:
            raise SpecError("builder", str(exc)) from None
        if "name" in doc:
            pair = _renamed(pair, doc["name"])
    else:
        if "params" in doc:
            raise SpecError("params", "'params' requires 'builder'")
        d = _dim(doc, "sub_dim")
        n = _dim(doc, "ambient_dim")
        for key in ("structure_constants", "involution", "unit", "embedding", "gram"):
            if key not in doc:
                raise SpecError(key, "missing required field")
        alg = AlgebraStructure(
            _sparse3(doc["structure_constants"], "structure_constants", (d, d, d)),
            _matrix(doc["involution"], "involution", d, d),
            _vector(doc["unit"], "unit", d),
        )
        opt = {}
        if "ambient_involution" in doc:
            opt["ambient_involution"] = _matrix(doc["ambient_involution"], "ambient_involution", n, n)
        for key in ("left_action", "right_action"):
            if key in doc:
                opt[key] = _sparse3(doc[key], key, (d, n, n))
        name = doc.get("name", "pair")
        if not isinstance(name, str):
            raise SpecError("name", "expected a string")
        pair = QuasiPair(
            alg,
            _matrix(doc["embedding"], "embedding", n, d),
            _matrix(doc["gram"], "gram", n, n),
            name=name,
            **opt,
        )
    tensor = doc.get("tensor")
    if tensor is not None and not isinstance(tensor, dict):
        raise SpecError("tensor", "expected an object")
    funcs = _functionals(doc, pair.ambient_dim)
    if validate:
        require_valid(pair, tol)
    return ParsedSpec(pair, funcs, tensor)


def _renamed(pair, name):
    if not isinstance(name, str):
        raise SpecError("name", "expected a string")
    return QuasiPair(
        pair.alg,
        pair.embed,
        pair.gram,
        left_action=pair.left_action,
        right_action=pair.right_action,
        ambient_involution=pair.ambient_involution,
        name=name,
    )


def read_spec_bytes(path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise SpecError(str(path), f"cannot read file: {exc.strerror}") from None


def parse_spec_bytes(raw: bytes, validate=True, tol=DEFAULT_TOL) -> ParsedSpec:
    try:
        doc = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError:
        raise SpecError("<file>", "not valid UTF-8") from None
    except json.JSONDecodeError as exc:
        raise SpecError("<file>", f"malformed JSON at line {exc.lineno}: {exc.msg}") from None
    return spec_from_dict(doc, validate=validate, tol=tol)


def parse_spec(path, validate=True, tol=DEFAULT_TOL) -> ParsedSpec:
    return parse_spec_bytes(read_spec_bytes(path), validate=validate, tol=tol)


# -- encoding ----------------------------------------------------------------------


def encode_complex(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


def encode_vector(v):
    return [encode_complex(z) for z in v]


def encode_matrix(m):
    return [encode_vector(r) for r in m]


def encode_sparse3(t):
    return [[int(i), int(j), int(k), *encode_complex(t[i, j, k])] for i, j, k in zip(*np.nonzero(t))]


def spec_to_dict(pair: QuasiPair, functionals=(), tensor_meta=None) -> dict:
    """Explicit encoding of a pair; every array is written so parsing reproduces it exactly.

    Products remember their factors (full explicit data) and the Kronecker
    ordering under "tensor"; pass ``tensor_meta=False`` to omit it.
    """
    doc = {
        "name": pair.name,
        "sub_dim": pair.sub_dim,
        "ambient_dim": pair.ambient_dim,
        "structure_constants": encode_sparse3(pair.alg.structure_constants),
        "involution": encode_matrix(pair.alg.involution),
        "unit": encode_vector(pair.alg.unit),
        "embedding": encode_matrix(pair.embed),
        "gram": encode_matrix(pair.gram),
        "ambient_involution": encode_matrix(pair.ambient_involution),
        "left_action": encode_sparse3(pair.left_action),
        "right_action": encode_sparse3(pair.right_action),
        "functionals": [{"name": f.name, "covector": encode_vector(f.covector)} for f in functionals],
    }
    if tensor_meta is None and len(pair.factors) == 2:
        from .tensor import KRONECKER_ORDER

        tensor_meta = {
            "kronecker_order": KRONECKER_ORDER,
            "factors": [spec_to_dict(f, tensor_meta=False) for f in pair.factors],
        }
    if tensor_meta:
        doc["tensor"] = tensor_meta
    return doc


def dumps_spec(pair: QuasiPair, functionals=(), tensor_meta=None) -> str:
    return json.dumps(spec_to_dict(pair, functionals, tensor_meta), indent=1) + "\n"


def write_spec(path, pair: QuasiPair, functionals=(), tensor_meta=None) -> None:
    Path(path).write_text(dumps_spec(pair, functionals, tensor_meta), encoding="utf-8")


def pair_difference(p: QuasiPair, q: QuasiPair) -> float:
    """Largest entrywise difference between the data of two pairs of equal shape."""
    arrays = [
        (p.alg.structure_constants, q.alg.structure_constants),
        (p.alg.involution, q.alg.involution),
        (p.alg.unit, q.alg.unit),
        (p.embed, q.embed),
        (p.gram, q.gram),
        (p.ambient_involution, q.ambient_involution),
        (p.left_action, q.left_action),
        (p.right_action, q.right_action),
    ]
    if any(a.shape != b.shape for a, b in arrays):
        return float("inf")
    return float(max(np.abs(a - b).max() if a.size else 0.0 for a, b in arrays))


def tensor_pair_from_spec(parsed: ParsedSpec, tol=DEFAULT_TOL, match_tol=1e-12):
    """Rebuild the product of the factors recorded in a product spec and check it matches the stored data."""
    from .tensor import KRONECKER_ORDER, build_tensor_pair

    meta = parsed.tensor
    if not meta:
        raise SpecError("tensor", "not a product spec (no tensor metadata)")
    if meta.get("kronecker_order") != KRONECKER_ORDER:
        raise SpecError("tensor.kronecker_order", f"expected {KRONECKER_ORDER!r}")
    facs = meta.get("factors")
    if not isinstance(facs, list) or len(facs) != 2:
        raise SpecError("tensor.factors", "expected two factor specs")
    p1 = spec_from_dict(facs[0], validate=False).pair
    p2 = spec_from_dict(facs[1], validate=False).pair
    tp = build_tensor_pair(p1, p2, tol)
    diff = pair_difference(tp, parsed.pair)
    if diff > match_tol:
        raise InvariantViolation("product data matches its factors", diff)
    return tp
