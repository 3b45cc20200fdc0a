import io
import json
import subprocess
import sys

import pytest

from polypoisson import affinechart as ac
from polypoisson import catalog, cli
from polypoisson.cli import EXIT_NOT_NILPOTENT, EXIT_OK, EXIT_PARSE, EXIT_STRUCTURAL, main

from conftest import ALL_IDS


@pytest.fixture
def files(tmp_path):
    out = {}
    for k in ALL_IDS:
        p = tmp_path / f"{k}.json"
        p.write_text(json.dumps(catalog.export_algebra_file(catalog.load(k))), encoding="utf-8")
        out[k] = str(p)
    return out


def _write(tmp_path, doc, name="a.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc), encoding="utf-8")
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_g1(files, capsys):
    code, out, _ = run(capsys, "validate", files["g1"], "--format", "json")
    rep = json.loads(out)
    assert code == EXIT_OK
    assert rep["flags"]["unimodular"] is True and rep["flags"]["nilpotent"] == 3
    assert all(c["ok"] for c in rep["checks"].values())


def test_validate_aff2_is_not_a_failure(files, capsys):
    code, out, _ = run(capsys, "validate", files["aff2"], "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["flags"]["unimodular"] is False


def test_duplicate_bracket_is_parse_error(tmp_path, capsys):
    doc = {"dim": 2, "brackets": [{"i": 1, "j": 2, "coeffs": {"2": "1"}}, {"i": 1, "j": 2, "coeffs": {"1": "1"}}],
           "omega": [{"i": 1, "j": 2, "value": "1"}]}
    code, _, err = run(capsys, "validate", _write(tmp_path, doc))
    assert code == EXIT_PARSE
    assert "duplicate bracket (1, 2)" in err


@pytest.mark.parametrize("doc, needle", [
    ('{"dim": 2,\n "brackets": [,]}', "line 2"),
    ({"dim": 2, "brackets": [], "omega": [{"i": 2, "j": 1, "value": "1"}]}, "i < j"),
    ({"dim": 2, "brackets": [], "omega": [{"i": 1, "j": 2, "value": "0.5"}]}, "omega[0].value"),
    ({"dim": 2, "brackets": [], "omega": [[0, 1], [1, 0]]}, "antisymmetric"),
    ({"dim": 2, "brackets": [], "omega": [], "extra": 1}, "unknown field"),
    ({"dim": 2, "brackets": [{"i": 1, "j": 3, "coeffs": {}}], "omega": []}, "brackets[0].j"),
])
def test_parse_errors(tmp_path, capsys, doc, needle):
    code, _, err = run(capsys, "validate", _write(tmp_path, doc))
    assert code == EXIT_PARSE
    assert needle in err


def test_missing_file(tmp_path, capsys):
    code, _, _ = run(capsys, "validate", str(tmp_path / "nope.json"))
    assert code == EXIT_PARSE


def test_structural_failure(tmp_path, capsys):
    # degenerate omega on an abelian plane
    doc = {"dim": 2, "brackets": [], "omega": [[0, 0], [0, 0]]}
    code, out, _ = run(capsys, "validate", _write(tmp_path, doc), "--format", "json")
    assert code == EXIT_STRUCTURAL
    assert json.loads(out)["checks"]["nondegenerate"]["ok"] is False
    code, _, _ = run(capsys, "chart", _write(tmp_path, doc, "b.json"))
    assert code == EXIT_STRUCTURAL


def test_broken_cocycle_exit_2(tmp_path, capsys):
    doc = catalog.export_algebra_file(catalog.load("g1"))
    doc["omega"].append({"i": 1, "j": 3, "value": "1"})
    code, out, _ = run(capsys, "validate", _write(tmp_path, doc), "--format", "json")
    assert code == EXIT_STRUCTURAL
    assert json.loads(out)["checks"]["cocycle"]["ok"] is False


def test_usage_error_is_parse_code(capsys):
    assert main(["chart"]) == EXIT_PARSE
    assert main(["frobnicate"]) == EXIT_PARSE


def test_chart_g1_poisson(files, capsys):
    code, out, _ = run(capsys, "chart", files["g1"], "--poisson", "--vars", "X,Y,Z,T", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["poisson"]["bivector"] == catalog.load("g1").target.pi_plus


def test_chart_abelian_constant(tmp_path, capsys):
    doc = {"dim": 4, "brackets": [], "omega": [{"i": 1, "j": 2, "value": "1"}, {"i": 3, "j": 4, "value": "2"}]}
    code, out, _ = run(capsys, "chart", _write(tmp_path, doc), "--format", "json")
    rep = json.loads(out)
    assert code == EXIT_OK
    assert rep["poisson"]["degree"] == 0 and rep["symplectic"]["degree"] == 0


def test_chart_aff2_marker(files, capsys):
    code, out, _ = run(capsys, "chart", files["aff2"], "--symplectic", "--format", "json")
    sym = json.loads(out)["symplectic"]
    assert code == EXIT_OK
    assert sym["marker"] == "non-polynomial inverse (non-unimodular)"
    assert sym["det_factored"] == "(x2+1)^2"


def test_chart_degree_table_passes(files, capsys):
    for k in ALL_IDS:
        code, out, _ = run(capsys, "chart", files[k], "--degrees", "--format", "json")
        assert code == EXIT_OK
        assert all(row["ok"] for row in json.loads(out)["degrees"])


@pytest.mark.parametrize("entry_id", ALL_IDS)
def test_chart_round_trip_byte_for_byte(files, capsys, entry_id):
    code, out, _ = run(capsys, "chart", files[entry_id], "--format", "json")
    assert code == EXIT_OK
    e = catalog.load(entry_id)
    m = ac.build_chart(e.algebra, e.omega)
    report, _ = cli.chart_report(m, ("poisson", "symplectic", "volume", "degrees"))
    buf = io.StringIO()
    cli.emit(report, "json", buf)
    assert out == buf.getvalue()


def test_output_is_deterministic(files, capsys):
    outs = {run(capsys, "chart", files["g2"], "--format", fmt)[1] for fmt in ("text",) * 3}
    assert len(outs) == 1


def test_latex_format(files, capsys):
    code, out, _ = run(capsys, "chart", files["g1"], "--poisson", "--format", "latex")
    assert code == EXIT_OK
    assert "\\begin{pmatrix}" in out and "\\partial_{x1} \\wedge \\partial_{x2}" in out


def test_fields_right_basis(files, capsys):
    code, out, _ = run(capsys, "fields", files["g1"], "--side", "right", "--basis", "--format", "json")
    items = json.loads(out)["fields"]
    assert code == EXIT_OK
    assert len(items) == 4 and all(it["degree"] <= 1 for it in items)


def test_fields_left_g2_refused(files, capsys):
    code, _, err = run(capsys, "fields", files["g2"], "--side", "left", "--basis")
    assert code == EXIT_NOT_NILPOTENT
    assert "nilpotent" in err


def test_fields_left_central(files, capsys):
    code, out, _ = run(capsys, "fields", files["g4"], "--side", "left", "--vector", "0,0,1,0", "--format", "json")
    item = json.loads(out)["fields"][0]
    assert code == EXIT_OK
    assert item["degree"] == 0 and item["field"] == "∂x2"


def test_fields_multi(files, capsys):
    code, out, _ = run(capsys, "fields", files["g1"], "--side", "left", "--multi", "1,2", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["fields"][0]["label"] == "e1^e2"
    assert main(["fields", files["g1"], "--multi", "1,1"]) == EXIT_PARSE


@pytest.mark.parametrize("entry_id, f, g, want", [
    ("g1", "x1", "x4", "-x2"),
    ("g1", "x1^2 + x3", "5", "0"),
    ("g4", "x1", "x2", "x3"),
])
def test_bracket(files, capsys, entry_id, f, g, want):
    code, out, _ = run(capsys, "bracket", files[entry_id], "-f", f, "-g", g)
    assert code == EXIT_OK
    assert out.strip() == want


def test_bracket_parse_error(files, capsys):
    code, _, _ = run(capsys, "bracket", files["g1"], "-f", "x1 +* x2", "-g", "x1")
    assert code == EXIT_PARSE


@pytest.mark.parametrize("entry_id", ALL_IDS)
def test_catalog_golden_exit_zero(capsys, entry_id):
    code, out, err = run(capsys, "catalog", entry_id, "--golden")
    assert code == EXIT_OK
    if entry_id == "g2":
        assert "paper-table discrepancy" in err and "A(1, 2)" in err
    else:
        assert "discrepancy" not in err


def test_catalog_list_and_unknown(capsys):
    code, out, _ = run(capsys, "catalog", "--format", "json")
    assert code == EXIT_OK
    assert [e["id"] for e in json.loads(out)["entries"]] == list(ALL_IDS)
    code, _, err = run(capsys, "catalog", "g7")
    assert code == EXIT_PARSE and "unknown catalog id" in err


def test_catalog_export_is_valid_input(tmp_path, capsys):
    code, out, _ = run(capsys, "catalog", "g3", "--export")
    assert code == EXIT_OK
    code, _, _ = run(capsys, "validate", _write(tmp_path, out))
    assert code == EXIT_OK


def test_module_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "polypoisson", "bracket", files["g4"], "-f", "x1", "-g", "x2"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.strip() == "x3"
