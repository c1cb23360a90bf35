import json

import numpy as np
import pytest

from quasistar.errors import InvariantViolation, SpecError
from quasistar.functionals import Functional
from quasistar.models import build_function_model, build_group_algebra, build_matrix_algebra
from quasistar.specfile import (
    dumps_spec,
    pair_difference,
    parse_spec,
    parse_spec_bytes,
    spec_from_dict,
    spec_to_dict,
    tensor_pair_from_spec,
    write_spec,
)
from quasistar.tensor import build_tensor_pair

Z2_EXPLICIT = {
    "name": "C[Z_2] by hand",
    "sub_dim": 2,
    "ambient_dim": 2,
    "structure_constants": [[0, 0, 0, 1, 0], [0, 1, 1, 1, 0], [1, 0, 1, 1, 0], [1, 1, 0, 1, 0]],
    "involution": [[1, 0], [0, 1]],
    "unit": [1, 0],
    "embedding": [[1, 0], [0, 1]],
    "gram": [[0.5, 0], [0, 0.5]],
    "functionals": [{"name": "trace", "covector": [[0.5, 0], [0, 0]]}],
}


def _doc(**changes):
    doc = json.loads(json.dumps(Z2_EXPLICIT))
    for k, v in changes.items():
        if v is None:
            doc.pop(k)
        else:
            doc[k] = v
    return doc


def test_builder_shortcut():
    parsed = spec_from_dict({"builder": "cyclic_group", "params": [4]})
    assert pair_difference(parsed.pair, build_group_algebra(4)) == 0.0
    assert parsed.pair.name == "C[Z_4]"
    assert parsed.functionals == {}
    named = spec_from_dict({"builder": "cyclic_group", "params": [2], "name": "two"})
    assert named.pair.name == "two"


def test_explicit_data_matches_builder():
    parsed = spec_from_dict(Z2_EXPLICIT)
    assert pair_difference(parsed.pair, build_group_algebra(2)) == 0.0
    np.testing.assert_array_equal(parsed.functionals["trace"].covector, [0.5, 0])


@pytest.mark.parametrize(
    "pair",
    [build_group_algebra(3), build_matrix_algebra(2), build_function_model(4, [0.1, 0.2, 0.3, 0.4])],
    ids=lambda p: p.name,
)
def test_round_trip_is_exact(pair, tmp_path):
    f = Functional(np.array([1.0 + 0.25j] + [0.0] * (pair.ambient_dim - 1)), name="w")
    path = tmp_path / "p.json"
    write_spec(path, pair, [f])
    back = parse_spec(path)
    assert pair_difference(back.pair, pair) == 0.0
    np.testing.assert_array_equal(back.functionals["w"].covector, f.covector)
    assert dumps_spec(back.pair, [f]) == path.read_text()


def test_gram_defect_refused_with_residual():
    doc = _doc(gram=[[0.5, [1e-6, 0]], [0, 0.5]])
    with pytest.raises(InvariantViolation) as err:
        spec_from_dict(doc)
    assert "gram hermitian" in err.value.invariant
    assert err.value.residual == pytest.approx(1e-6)


def test_invariant_failure_names_the_axiom():
    # a non-invariant metric loads structurally but fails validation
    doc = _doc(gram=[[0.5, 0], [0, 1.0]])
    with pytest.raises(InvariantViolation, match="adjoint invariance"):
        spec_from_dict(doc)
    assert spec_from_dict(doc, validate=False).pair.gram[1, 1] == 1.0


@pytest.mark.parametrize(
    "doc,field",
    [
        (_doc(sub_dim=None), "sub_dim"),
        (_doc(sub_dim=0), "sub_dim"),
        (_doc(gram=None), "gram"),
        (_doc(unit=[1]), "unit"),
        (_doc(involution=[[1, 0], [0, "x"]]), "involution[1][1]"),
        (_doc(structure_constants=[[0, 0, 5, 1, 0]]), "structure_constants[0]"),
        (_doc(structure_constants=[[0, 0, 0, 1]]), "structure_constants[0]"),
        (_doc(functionals=[{"name": "a", "covector": [1]}]), "functionals[0].covector"),
        (_doc(functionals=[{"covector": [1, 0]}]), "functionals[0]"),
        (_doc(functionals=[{"name": "a", "covector": [1, 0]}, {"name": "a", "covector": [1, 0]}]), "functionals[1]"),
        (_doc(colour="red"), "colour"),
        (_doc(params=[2]), "params"),
        (_doc(builder="cyclic_group"), "sub_dim"),
        ({"builder": "cyclic_group", "params": [2, 3]}, "params"),
        ({"builder": "nope", "params": [2]}, "builder"),
        ({"builder": "cyclic_group", "params": ["2"]}, "params"),
        ([1, 2], "<root>"),
    ],
)
def test_schema_errors_name_the_field(doc, field):
    with pytest.raises(SpecError) as err:
        spec_from_dict(doc)
    assert err.value.field == field


def test_malformed_bytes():
    with pytest.raises(SpecError, match="malformed JSON"):
        parse_spec_bytes(b"{")
    with pytest.raises(SpecError, match="UTF-8"):
        parse_spec_bytes(b"\xff\xfe")
    with pytest.raises(SpecError, match="cannot read"):
        parse_spec("/nonexistent/spec.json")


def test_empty_functional_list():
    parsed = spec_from_dict(_doc(functionals=[]))
    assert parsed.functionals == {}


def test_tensor_spec_round_trip():
    tp = build_tensor_pair(build_group_algebra(2), build_group_algebra(3))
    doc = json.loads(dumps_spec(tp))
    assert doc["tensor"]["kronecker_order"] == "first-factor-major"
    parsed = spec_from_dict(doc)
    assert pair_difference(parsed.pair, tp) <= 1e-15
    again = tensor_pair_from_spec(parsed)
    assert pair_difference(again, tp) == 0.0
    assert [f.name for f in again.factors] == ["C[Z_2]", "C[Z_3]"]


def test_tensor_spec_tampering_detected():
    tp = build_tensor_pair(build_group_algebra(2), build_group_algebra(2))
    doc = spec_to_dict(tp)
    doc["tensor"]["factors"][1] = spec_to_dict(build_function_model(2))
    with pytest.raises(InvariantViolation, match="matches its factors"):
        tensor_pair_from_spec(spec_from_dict(doc))
    with pytest.raises(SpecError):
        tensor_pair_from_spec(spec_from_dict({"builder": "cyclic_group", "params": [2]}))
