import io
import json
from pathlib import Path

import pytest

from masseyfp import cli

DATA = Path(__file__).resolve().parent.parent / "data"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def report(*argv):
    code, out, err = run(*argv)
    return code, (json.loads(out) if out else None), err


def test_massey_z4():
    code, rep, _ = report("massey", "--p", 2, "--group", DATA / "z4.json", "--chars", "chi,chi,chi")
    assert code == 0
    res = rep["result"]
    assert res["defined"] and res["contains_zero"]
    assert set(res) >= {"defined", "contains_zero", "witness", "witness_kind", "coset"}
    assert rep["version"]


def test_hstar_translation_group():
    code, rep, _ = report("hstar", "--p", 3, "--group", DATA / "t3.json", "--module", "colvec3")
    assert code == 0 and rep["result"]["h1_star_dim"] == 0


def test_group_info_u4():
    code, rep, _ = report("group-info", "--group", DATA / "u4_f2.json")
    assert code == 0
    assert rep["result"]["order"] == 64
    assert rep["result"]["exponent"] == 4
    assert rep["result"]["generator_count"] == 3


def test_undefined_product_exit_code():
    code, rep, _ = report("massey", "--p", 2, "--group", DATA / "f2cubed.json", "--chars", "e1,e2,e1")
    assert code == 2 and rep["result"]["defined"] is False


def test_embed_surjective_failure_names_reason():
    code, rep, _ = report("embed", "--p", 2, "--group", DATA / "f2cubed.json", "--chars", "e1,e2,e3",
                          "--surjective")
    assert code == 2 and rep["result"]["reason"] == "cup12"


def test_embed_verdicts_agree():
    code, rep, _ = report("embed", "--p", 2, "--group", DATA / "u4_f2.json", "--chars", "x12,x23,x34")
    assert code == 0
    assert rep["result"]["agree"] and rep["result"]["lift_exists"]


def test_budget_exit_code():
    code, out, err = run("cohomology", "--p", 2, "--group", DATA / "u4_f2.json", "--n", 2, "--budget", 1000)
    assert code == 3 and out == "" and "budget" in err


@pytest.mark.parametrize("doc", [
    {"schema": 1, "kind": "cyclic", "n": 4, "colour": "red"},
    {"schema": 2, "kind": "cyclic", "n": 4},
    {"schema": 1, "kind": "hexagon"},
    {"schema": 1, "kind": "cyclic"},
    {"schema": 1, "kind": "cyclic", "n": 4, "characters": {"chi": [1, 1]}},
    {"schema": 1, "kind": "table", "table": [[0, 1], [1, 1]]},
])
def test_bad_inputs_exit_one(tmp_path, doc):
    f = tmp_path / "g.json"
    f.write_text(json.dumps(doc))
    code, out, err = run("cohomology", "--p", 2, "--group", f)
    assert code == 1 and out == "" and err


def test_non_hom_character_rejected(tmp_path):
    f = tmp_path / "g.json"
    f.write_text(json.dumps({"schema": 1, "kind": "cyclic", "n": 3, "characters": {"chi": [1]}}))
    code, _, err = run("cup", "--p", 2, "--group", f, "--chars", "chi,chi")
    assert code == 1 and "homomorphism" in err


def test_argument_errors_exit_one():
    assert run("massey", "--group", DATA / "z4.json", "--chars", "chi,chi,chi")[0] == 1
    assert run("massey", "--p", 4, "--group", DATA / "z4.json", "--chars", "chi")[0] == 1
    assert run("nonsense", "--group", DATA / "z4.json")[0] == 1
    assert run("massey", "--p", 2, "--group", DATA / "z4.json", "--chars", "psi")[0] == 1
    assert run("massey", "--p", 2, "--n", 4, "--group", DATA / "z4.json", "--chars", "chi,chi,chi")[0] == 1


def test_text_format():
    code, out, _ = run("group-info", "--group", DATA / "z4.json", "--format", "text")
    assert code == 0 and "result.order: 4" in out.splitlines()


def test_product_and_table_groups(tmp_path):
    code, rep, _ = report("cohomology", "--p", 2, "--group", DATA / "z2xz4.json", "--n", 2)
    assert code == 0 and rep["result"]["dims"] == {"0": 1, "1": 2, "2": 3}
    f = tmp_path / "z3.json"
    f.write_text(json.dumps({"schema": 1, "kind": "table", "table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]],
                             "generators": [1], "characters": {"c": [1]}}))
    code, rep, _ = report("massey", "--p", 3, "--group", f, "--chars", "c,c,c")
    assert code == 0 and rep["result"]["defined"]


def test_module_file(tmp_path):
    m = tmp_path / "sign.json"
    m.write_text(json.dumps({"schema": 1, "dim": 1, "action": [[[2]]]}))
    g = tmp_path / "z2.json"
    g.write_text(json.dumps({"schema": 1, "kind": "cyclic", "n": 2}))
    code, rep, _ = report("cohomology", "--p", 3, "--group", g, "--module", f"@{m}", "--n", 1)
    assert code == 0 and rep["result"]["dims"] == {"0": 0, "1": 0}


def test_plot_dir_writes_figures(tmp_path):
    code, rep, _ = report("cohomology", "--p", 2, "--group", DATA / "z4.json", "--plot-dir", tmp_path)
    assert code == 0 and rep["figures"] == ["cohomology.png"]
    assert (tmp_path / "cohomology.png").stat().st_size > 0
    code, rep, _ = report("group-info", "--group", DATA / "z4.json", "--plot-dir", tmp_path)
    assert (tmp_path / "cayley.png").exists()


def test_local_global_and_dwyer_commands():
    code, rep, _ = report("local-global", "--p", 2, "--group", DATA / "z4.json", "--chars", "chi,chi,chi")
    assert code == 0 and rep["result"]["consistent"]
    code, rep, _ = report("dwyer", "--p", 2, "--group", DATA / "z4.json", "--chars", "chi,chi,chi,chi")
    assert code == 0 and rep["result"]["witness_kind"] in ("lift", "rho_bar")


def test_emit_report_empty():
    assert json.loads(cli.emit_report({})) == {"version": cli.__version__}
