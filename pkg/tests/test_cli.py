import json
import re

import jsonschema
import pytest

from fpsym.cli import main
from fpsym.report import Claim, Report, schema


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def verify_all():
    import contextlib
    import io

    outputs = {}
    for fmt in ("json", "markdown"):
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = main(["verify", "all", "--format", fmt])
        outputs[fmt] = (code, buf.getvalue())
    return outputs


def test_json_report_validates(verify_all):
    code, out = verify_all["json"]
    doc = json.loads(out)
    jsonschema.validate(doc, schema())
    assert code == doc["exitCode"] == 0
    assert doc["summary"]["total"] == len(doc["claims"])


def test_markdown_lists_the_same_claims(verify_all):
    doc = json.loads(verify_all["json"][1])
    md = verify_all["markdown"][1]
    md_ids = re.findall(r"^\| ([^ |]+) \| (?:pass|fail|unresolved) \|", md, re.M)
    assert sorted(md_ids) == sorted(c["id"] for c in doc["claims"])
    assert "[open question]" in md


def test_report_contents(verify_all):
    doc = json.loads(verify_all["json"][1])
    by_id = {c["id"]: c for c in doc["claims"]}
    assert by_id["gtilde:3"]["status"] == "fail"
    assert by_id["gtilde:3"]["residual"] == "-2*exp(-2*t)*u"
    assert by_id["gtilde:5"]["residual"] == "2*exp(2*t)*u"
    assert by_id["characteristic:fp:quoted"]["openQuestion"]
    assert by_id["p1:4"]["status"] == "unresolved"
    fails = [c for c in doc["claims"] if c["status"] != "pass"]
    assert fails and all(c["discrepancy"] and c["repairVerified"] for c in fails)


def test_strict_mode_fails(capsys):
    code, out, _ = run(capsys, "verify", "symmetries", "--strict")
    assert code == 1 and json.loads(out)["strict"]
    code, _, _ = run(capsys, "verify", "symmetries")
    assert code == 0


def test_exit_code_two_on_usage_errors(capsys):
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "solutions", "map", "--family", "nope")[0] == 2
    code, _, err = run(capsys, "verify", "conslaws", "--characteristic", "x + * y")
    assert code == 2 and "column" in err
    assert run(capsys, "verify", "symmetries", "--basis", "/nonexistent/file")[0] == 2


def test_user_basis_file(capsys, tmp_path):
    f = tmp_path / "basis.txt"
    f.write_text("# two candidates\nt: 1\nx: 1\n", encoding="utf-8")
    code, out, _ = run(capsys, "verify", "symmetries", "--equation", "fp", "--basis", str(f))
    doc = json.loads(out)
    assert code == 1
    assert [c["status"] for c in doc["claims"]] == ["pass", "fail"]
    assert doc["claims"][1]["residual"] == "-u_x"


def test_user_characteristic(capsys):
    code, out, _ = run(capsys, "verify", "conslaws", "--characteristic", "exp(x^2/2)")
    assert code == 0
    code, out, _ = run(capsys, "verify", "conslaws", "--characteristic", "exp(-x^2/2)")
    assert code == 1
    c = json.loads(out)["claims"][0]
    assert c["residual"] == "2*exp(-(1/2)*x^2)*x^2 - 2*exp(-(1/2)*x^2)"


def test_potential_command(capsys, tmp_path):
    f = tmp_path / "gens.txt"
    f.write_text("u: u, vhat: vhat\nt: 1, u: -u\n", encoding="utf-8")
    code, out, _ = run(capsys, "potential", "--characteristic", "exp(t)", "--verify-algebra", str(f))
    doc = json.loads(out)
    assert code == 0
    assert doc["artifacts"]["potential equation"] == "vhat_t = x*vhat_x + vhat_xx"
    code, out, _ = run(capsys, "potential", "--characteristic", "exp(2*t)*x", "--format", "markdown")
    assert code == 0 and "x != 0" in out
    code, _, _ = run(capsys, "potential", "--characteristic", "x")
    assert code == 1


def test_transform_command(capsys):
    code, out, _ = run(capsys, "transform", "--equation", "fp")
    doc = json.loads(out)
    assert code == 0 and doc["artifacts"]["image"] == "w_tau = w_yy on tau > 0"
    code, out, _ = run(capsys, "transform", "--equation", "fp", "--inverse")
    doc = json.loads(out)
    assert code == 0 and doc["artifacts"]["image"] == "u_t = x*u_x + u_xx on tau > 0"


def test_algebra_command(capsys):
    code, out, _ = run(capsys, "algebra", "commutators", "--basis", "builtin:gtilde-pushforward")
    doc = json.loads(out)
    assert code == 0 and len(doc["claims"]) == 15
    assert run(capsys, "algebra", "commutators", "--basis", "builtin:nope")[0] == 2


def test_solutions_command(capsys):
    code, out, _ = run(capsys, "solutions", "map", "--family", "linear", "--to", "fp")
    doc = json.loads(out)
    assert code == 0 and doc["artifacts"]["fp solution"] == "c1*exp(t)*x"


def test_seed_is_reported(capsys, monkeypatch):
    monkeypatch.setenv("FPSYM_SEED", "7")
    code, out, _ = run(capsys, "solutions", "map", "--family", "heatpoly:6")
    doc = json.loads(out)
    assert code == 0 and doc["seed"] == 7
    jsonschema.validate(doc, schema())


def test_report_rejects_duplicates_and_bad_status():
    c = Claim("a", "d", "m", "pass")
    with pytest.raises(ValueError):
        Report([c, c], 0)
    with pytest.raises(ValueError):
        Claim("b", "d", "m", "maybe")
    with pytest.raises(ValueError):
        Claim("b", "d", "m", "fail", residual="")


def test_schema_rejects_fail_with_zero_residual():
    doc = Report([Claim("a", "d", "m", "pass")], 0).to_dict()
    jsonschema.validate(doc, schema())
    doc["claims"][0]["status"] = "fail"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(doc, schema())
