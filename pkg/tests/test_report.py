import csv
import io
import json
import re

import numpy as np
import pytest

from levygeo.errors import EmptyData
from levygeo.report import csv_text, emit_csv, emit_json, emit_svg, json_text, svg_bytes

X = np.linspace(-3, 3, 61)
SERIES = [(X, np.exp(-X * X / 2), "p_t")]


def test_svg_is_byte_stable():
    a = svg_bytes(SERIES, "x", "p_t(x)")
    b = svg_bytes(SERIES, "x", "p_t(x)")
    assert a == b
    text = a.decode()
    assert "<dc:date>" not in text
    assert ">x<" in text and ">p_t(x)<" in text  # labels kept as text
    assert text.count("<path") >= 1
    assert len(re.findall(r'id="line2d_\d+"', text)) >= 1


def test_svg_one_polyline_per_series():
    text = svg_bytes(SERIES, "x", "p_t(x)").decode()
    # the data polyline has one vertex per sample
    paths = re.findall(r'<path d="M ([^"]*)"', text)
    assert sum(p.count("\nL ") == X.size - 1 for p in paths) == 1


def test_empty_inputs_raise_and_write_nothing(tmp_path):
    with pytest.raises(EmptyData):
        emit_svg([(np.array([]), np.array([]), "none")], tmp_path / "a.svg", "x", "y")
    with pytest.raises(EmptyData):
        emit_csv([], tmp_path / "a.csv", {})
    assert list(tmp_path.iterdir()) == []


def test_csv_layout():
    rows = [{"r": 0.1, "v(r)": 0.2, "v(2r)": 0.8, "ratio": 4.0}]
    text = csv_text(rows, {"model": {"kind": "stable"}, "seed": 0})
    lines = text.split("\r\n")
    assert lines[0] == '# model: {"kind": "stable"}'
    assert lines[1] == "# seed: 0"
    assert lines[2] == "r,v(r),v(2r),ratio"
    parsed = list(csv.reader(io.StringIO("\n".join(lines[2:]))))
    assert [float(v) for v in parsed[1]] == [0.1, 0.2, 0.8, 4.0]


def test_csv_floats_round_trip():
    vals = [1 / 3, 1e-300, 2.0**0.5]
    text = csv_text([{"v": v} for v in vals], {})
    got = [float(r[0]) for r in list(csv.reader(io.StringIO(text)))[1:]]
    assert got == vals


def test_json_sorted_and_deterministic(tmp_path):
    obj = {"b": np.float64(1.5), "a": [np.int64(2), float("inf")]}
    assert json.loads(json_text(obj)) == {"a": [2, "inf"], "b": 1.5}
    p1 = emit_json(obj, tmp_path / "x.json").read_bytes()
    p2 = emit_json(obj, tmp_path / "y.json").read_bytes()
    assert p1 == p2
    assert list(json.loads(p1)) == ["a", "b"]
