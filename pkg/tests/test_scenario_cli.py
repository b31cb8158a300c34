import json

import pytest

from momenta.cli import main, resolve_seed, run
from momenta.errors import ConsistencyError, MissingSection, ScenarioParseError
from momenta.report import read_report
from momenta.scenario import load_scenario, loads_scenario

TWO_D = """
[algebra]
dim = 2

[manifold]
coords = ["x", "y"]
pi = [["0", "1"], ["-1", "0"]]

[alpha]
e1 = ["1", "0"]
e2 = ["0", "1"]
{extra}
"""


def test_fixture_dims(fixtures_dir):
    sc = load_scenario(fixtures_dir / "heisenberg_identity.scn")
    assert sc.dims == (3, 3)
    assert sc.options.grid == (10,) and sc.options.step == 1e-3
    sc.require("algebra", "group", "manifold", "alpha", "mu")


def test_missing_section():
    sc = loads_scenario(TWO_D.format(extra=""))
    with pytest.raises(MissingSection):
        sc.require("mu")


def test_extra_alpha_form_is_inconsistent():
    with pytest.raises(ConsistencyError) as exc:
        loads_scenario(TWO_D.format(extra='e3 = ["1", "1"]'))
    assert any(sec == "alpha" for sec, _, _ in exc.value.errors)
    assert "alpha" in str(exc.value)


def test_polynomial_syntax_error_is_located():
    text = TWO_D.format(extra="").replace('e2 = ["0", "1"]', 'e2 = ["0", "x+*y"]')
    with pytest.raises(ScenarioParseError) as exc:
        loads_scenario(text)
    err = exc.value
    assert err.line == text.splitlines().index('e2 = ["0", "x+*y"]') + 1
    assert err.column is not None and err.column > 1


def test_toml_error_is_parse_error():
    with pytest.raises(ScenarioParseError):
        loads_scenario("[algebra\ndim = 2")


def test_seed_precedence(monkeypatch):
    monkeypatch.delenv("MOMENTA_SEED", raising=False)
    assert resolve_seed(None, 4) == 4
    assert resolve_seed(None) == 0
    monkeypatch.setenv("MOMENTA_SEED", "9")
    assert resolve_seed(None, 4) == 9
    assert resolve_seed(3, 4) == 3


def test_cli_exit_codes(fixtures_dir, tmp_path, capsys):
    ident = str(fixtures_dir / "heisenberg_identity.scn")
    trans = str(fixtures_dir / "abelian_translation.scn")
    assert main(["validate", ident, "--out", str(tmp_path / "a.json")]) == 0
    assert main(["abelian", trans, "--out", str(tmp_path / "b.json")]) == 1
    assert "check failed: abelian." in capsys.readouterr().err
    doc = read_report((tmp_path / "b.json").read_text())
    assert doc["verdict"] == doc["derived_verdict"] == "fail"
    assert main(["validate", ident, "--out", str(tmp_path / "missing" / "c.json")]) == 2


def test_cli_reports_load_errors(tmp_path):
    bad = tmp_path / "bad.scn"
    bad.write_text("[algebra\n")
    out = tmp_path / "r.json"
    assert main(["validate", str(bad), "--out", str(out)]) == 1
    doc = json.loads(out.read_text())
    assert doc["first_failure"] == "load_scenario"
    assert doc["checks"][0]["code"] == "E015"


def test_cli_text_format(fixtures_dir, capsys):
    assert main(["validate", str(fixtures_dir / "abelian_rotation.scn"), "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("command : validate") and "verdict : PASS" in out


def test_json_round_trip(fixtures_dir, tmp_path, monkeypatch):
    monkeypatch.setenv("MOMENTA_SEED", "5")
    path = tmp_path / "r.json"
    main(["reconstruct", str(fixtures_dir / "heisenberg_identity.scn"), "--grid", "3", "--step", "1e-2",
          "--out", str(path)])
    doc = read_report(path.read_text())
    assert doc["seed"] == 5
    assert doc["verdict"] == doc["derived_verdict"] == "pass"
    assert {c["name"] for c in doc["checks"]} >= {"leaf.path_independence", "leaf.matches_mu"}


def test_run_commands_on_fixtures(fixtures_dir):
    expected = {
        ("abelian_rotation", "abelian"): "pass",
        ("abelian_rotation", "deform"): "pass",
        ("abelian_translation", "obstruction"): "fail",
        ("heisenberg_broken", "heisenberg"): "fail",
        ("heisenberg_broken", "validate"): "pass",
        ("heisenberg_identity", "heisenberg"): "pass",
        ("heisenberg_identity", "deform"): "pass",
    }
    for (name, cmd), verdict in expected.items():
        sc = load_scenario(fixtures_dir / f"{name}.scn")
        rep = run(cmd, sc, grid=3, step=1e-2)
        assert rep.verdict == verdict, (name, cmd, rep.first_failure)
    rep = run("heisenberg", load_scenario(fixtures_dir / "heisenberg_broken.scn"), grid=3, step=1e-2)
    assert rep.first_failure.name.endswith("c_zero")
