import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hardyconj.antilinear import PointConjugation
from hardyconj.circfield import CircleField, OperatorSymbol, random_field, random_symbol
from hardyconj.verify_cli import SymbolFileError, parse_symbol_file, serialize

Z_E11 = """{
  "dim": 2,
  "terms": [{"n": 1, "re": [[1, 0], [0, 0]], "im": [[0, 0], [0, 0]]}]
}"""


def test_z_times_matrix_unit():
    spec = parse_symbol_file(Z_E11)
    assert spec.role == "symbol"
    U = spec.to_symbol()
    assert U.n_min == U.n_max == 1
    np.testing.assert_array_equal(U.coeff(1), [[1, 0], [0, 0]])


def test_diag_z_z2_round_trip():
    theta = OperatorSymbol.diagonal(OperatorSymbol.scalar({1: 1}), OperatorSymbol.scalar({2: 1}))
    back = parse_symbol_file(serialize(theta)).to_symbol()
    assert back.distance(theta) == 0.0


@given(st.integers(1, 3), st.integers(-4, 4), st.integers(0, 4), st.integers(0, 2**32 - 1))
def test_round_trip_is_exact(d, lo, width, seed):
    F = random_symbol(d, (lo, lo + width), seed)
    assert parse_symbol_file(serialize(F)).to_symbol().distance(F) == 0.0
    f = random_field(d, (lo, lo + width), seed)
    assert parse_symbol_file(serialize(f)).to_field().distance(f) == 0.0


def test_point_round_trip_and_role_mismatch():
    J = PointConjugation.random(3, 5)
    spec = parse_symbol_file(serialize(J))
    np.testing.assert_array_equal(spec.to_point().K, J.K)
    with pytest.raises(TypeError):
        spec.to_field()
    with pytest.raises(TypeError):
        parse_symbol_file(serialize(CircleField.monomial(0, [1]))).to_symbol()


def test_file_path(tmp_path):
    p = tmp_path / "u.json"
    p.write_text(Z_E11)
    assert parse_symbol_file(str(p)).dim == 2
    with pytest.raises(SymbolFileError) as err:
        parse_symbol_file(str(tmp_path / "missing.json"))
    assert "missing.json" in err.value.position


def _doc(**kw):
    base = {"dim": 1, "terms": [{"n": 0, "re": [[1]], "im": [[0]]}]}
    base.update(kw)
    return json.dumps(base)


@pytest.mark.parametrize(
    "text, position",
    [
        ('{"dim": 1,\n "terms": [}', "2:12"),
        (_doc(dim=0), "$.dim"),
        (_doc(role="matrix"), "$.role"),
        (_doc(extra=1), "$"),
        (_doc(terms={}), "$.terms"),
        (_doc(terms=[{"n": 0, "re": [[1]]}]), "$.terms[0]"),
        (_doc(terms=[{"n": 0.5, "re": [[1]], "im": [[0]]}]), "$.terms[0].n"),
        (_doc(terms=[{"n": 1, "re": [[1]], "im": [[0]]}, {"n": 1, "re": [[0]], "im": [[1]]}]), "$.terms[1].n"),
        (_doc(dim=2, terms=[{"n": 0, "re": [[1, 0], [0]], "im": [[0, 0], [0, 0]]}]), "$.terms[0].re[1]"),
        (_doc(terms=[{"n": 0, "re": [["1"]], "im": [[0]]}]), "$.terms[0].re[0][0]"),
        (_doc(role="conjugation-K", terms=[{"n": 1, "re": [[1]], "im": [[0]]}]), "$.terms"),
    ],
)
def test_errors_are_positioned(text, position):
    with pytest.raises(SymbolFileError) as err:
        parse_symbol_file(text)
    assert err.value.position == position
    assert str(err.value).startswith(position + ": ")
