import csv
import io
import json

import pytest

from levygeo.cli import COMMANDS, main


def _csv(path):
    text = path.read_bytes().decode("utf-8")
    meta = {}
    body = []
    for line in text.split("\r\n"):
        if line.startswith("# "):
            k, _, v = line[2:].partition(": ")
            meta[k] = v
        elif line:
            body.append(line)
    return meta, list(csv.DictReader(io.StringIO("\n".join(body))))


def test_diagonal_cauchy(tmp_path, capsys):
    assert main(["diagonal", "--model", "cauchy", "--t", "1", "--out", str(tmp_path)]) == 0
    meta, rows = _csv(tmp_path / "diagonal.csv")
    assert float(rows[0]["direct"]) == pytest.approx(0.3183099, abs=5e-8)
    assert float(rows[0]["volume_formula"]) == pytest.approx(0.3183099, abs=5e-8)
    assert json.loads(meta["model"]) == {"kind": "cauchy", "dim": 1}
    assert "diagonal_agreement" in json.loads(meta["tolerances"])


def test_classify_stable_expect_fail(tmp_path, capsys):
    code = main(["classify", "--model", "stable:1.5", "--t", "1", "--expect-fail", "--out", str(tmp_path)])
    assert code == 0
    assert "NOT_CLASS_N" in capsys.readouterr().out


def test_classify_stable_without_expect_fail_exits_2(tmp_path):
    assert main(["classify", "--model", "stable:1.5", "--out", str(tmp_path)]) == 2


def test_verify_table_all_rows(tmp_path, capsys):
    assert main(["verify-table", "--rows", "all", "--out", str(tmp_path)]) == 0
    _, rows = _csv(tmp_path / "verify_table.csv")
    assert {r["row"] for r in rows} >= {"gh", "normal", "cauchy", "laplace", "hyperbolic", "relativistic", "meixner", "sinh1", "sinh2"}
    assert all(r["passed"] == "true" for r in rows)


def test_doubling_csv_columns_and_exit_codes(tmp_path):
    assert main(["doubling", "--model", "stable:1.5", "--out", str(tmp_path)]) == 0
    _, rows = _csv(tmp_path / "doubling.csv")
    assert list(rows[0]) == ["r", "v(r)", "v(2r)", "ratio"]
    assert main(["doubling", "--model", "logcauchy", "--out", str(tmp_path)]) == 2
    assert main(["doubling", "--model", "logcauchy", "--expect-fail", "--out", str(tmp_path)]) == 0


def test_density_svg_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["density", "--model", "cauchy", "--grid", "0.02,20", "--format", "svg", "--out", str(d)]) == 0
    assert (a / "density.svg").read_bytes() == (b / "density.svg").read_bytes()
    assert (a / "density.csv").read_bytes() == (b / "density.csv").read_bytes()
    svg = (a / "density.svg").read_text()
    assert ">x<" in svg and ">p_t(x)<" in svg


def test_json_format(tmp_path):
    assert main(["mixture", "--format", "json", "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "mixture.json").read_text())
    assert doc["passed"] is True
    assert set(doc) == {"header", "report", "passed"}


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["density", "--model", "bogus"], "model.kind"),
        (["density", "--model", "cauchy", "--grid", "0.5,10"], "use h <="),
        (["density", "--grid", "oops"], "--grid"),
        (["sub15", "--bf", "warp"], "--bf"),
    ],
)
def test_errors_exit_1(tmp_path, capsys, argv, needle):
    assert main(argv + ["--out", str(tmp_path)]) == 1
    assert needle in capsys.readouterr().err


def test_every_command_is_wired(tmp_path):
    quick = {
        "density": ["--grid", "0.05,10"],
        "diagonal": [],
        "metric-check": [],
        "doubling": [],
        "classify": ["--model", "gaussian"],
        "verify-table": ["--rows", "cauchy"],
        "sub15": ["--bf", "linear"],
        "mixture": [],
    }
    assert set(quick) == set(COMMANDS)
    for cmd, extra in quick.items():
        assert main([cmd, *extra, "--out", str(tmp_path / cmd)]) == 0, cmd
