import json
import math

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from gcww.serialize import csv_lines, fmt_float, to_json


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_fmt_float_round_trips(x):
    assert float(fmt_float(x)) == x


def test_fmt_float_non_finite():
    assert fmt_float(math.nan) == "nan"
    assert fmt_float(-math.inf) == "-inf"


def test_to_json_is_valid_and_deterministic():
    obj = {"a": 0.1, "b": [1, 2.5], "z": complex(1.0, -2.0), "n": None, "t": np.bool_(True), "bad": math.inf}
    text = to_json(obj)
    assert text == to_json(obj)
    back = json.loads(text)
    assert back["a"] == 0.1
    assert back["z"] == [1.0, -2.0]
    assert back["t"] is True
    assert back["bad"] is None


def test_to_json_integral_floats_stay_floats():
    assert json.loads(to_json({"x": 2.0}))["x"] == 2.0
    assert "2.0" in to_json({"x": 2.0})


def test_csv_lines():
    text = csv_lines(["a", "b"], [(0.1, "s"), (np.float64(2.0), 3)])
    assert text == "a,b\n0.10000000000000001,s\n2,3\n"
