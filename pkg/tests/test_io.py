import json
from fractions import Fraction

import pytest

from lagcubic.errors import SchemaError
from lagcubic.io import (cubic_file_from_json, mirror_config_from_json, period_map_from_json,
                         period_map_to_json, rational_str, read_json, section_from_json,
                         section_to_json, tensor_from_polynomial)
from lagcubic.lagrangian import SectionCandidate
from lagcubic.period import hessian_period_map
from lagcubic.series import FormalSeries


def test_rational_str():
    assert rational_str(Fraction(-5, 12)) == "-5/12" and rational_str(3) == "3"


def test_period_map_round_trip():
    f = FormalSeries.variable(0, 2, 5) ** 3 + FormalSeries.variable(1, 2, 5) ** 4
    p = hessian_period_map(f, [1, 2], [[1, 0], [0, 2]])
    back, frame, anchor = period_map_from_json(json.loads(json.dumps(period_map_to_json(p))))
    assert back == p and frame is None and anchor is None


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("entries"),
    lambda d: d.update(g="2"),
    lambda d: d.update(divisors=[2, 3]),
    lambda d: d["entries"].pop(),
    lambda d: d.update(base_point_imag=[["x", "0"], ["0", "1"]]),
])
def test_period_map_schema_errors(mutate):
    p = hessian_period_map(FormalSeries.variable(0, 2, 4) ** 3)
    doc = period_map_to_json(p)
    mutate(doc)
    with pytest.raises(SchemaError):
        period_map_from_json(doc)


def test_sections_round_trip():
    for s in (SectionCandidate.translation([1, -2], [0, 1], [3]),
              SectionCandidate.general([FormalSeries.variable(0, 1, 3)])):
        assert section_from_json(section_to_json(s)) == s
    with pytest.raises(SchemaError):
        section_from_json({"kind": "rotation"})
    with pytest.raises(SchemaError):
        section_from_json({"kind": "translation", "m": [1.5], "n": [0]})


def test_tensor_from_polynomial():
    t = tensor_from_polynomial(2, [((2, 1), Fraction(3))])
    # x^2 y = sum over the three orderings of (0, 0, 1)
    assert t[0][0][1] == t[0][1][0] == t[1][0][0] == 1
    with pytest.raises(SchemaError):
        tensor_from_polynomial(2, [((1, 1), Fraction(1))])


def test_cubic_file():
    tensor, degrees, quadrics = cubic_file_from_json(
        {"g": 1, "polynomial": [{"exp": [3], "coef": "2"}], "quadrics": [[["1"]]]})
    assert tensor == [[[2]]] and degrees == [2] and quadrics == [[[1]]]
    with pytest.raises(SchemaError):
        cubic_file_from_json({"g": 2})


def test_mirror_config():
    doc = {"operator": {"coefficients": [["0", "-1"], ["1"]]},
           "algebraic_yukawa": {"num": ["1"], "den": ["1"]}, "classical_triple": 1}
    cfg = mirror_config_from_json(doc)
    assert cfg.truncation_order == 12 and cfg.operator.order == 1
    doc["operator"]["order"] = 3
    with pytest.raises(SchemaError):
        mirror_config_from_json(doc)


def test_read_json_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(SchemaError):
        read_json(str(bad))
    with pytest.raises(SchemaError):
        read_json(str(tmp_path / "missing.json"))
