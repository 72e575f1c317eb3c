import json

import pytest

from adamson import cli, verify
from adamson.groups import cyclic
from adamson.resolutions import bar_resolution
from adamson.verify import CorruptedResolution, VerifyReport, suite_resolutions


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def degrees(out):
    return [(d["rank"], d["torsion"]) for d in json.loads(out)["degrees"]]


def test_cohomology_example(capsys):
    code, out, _ = run_cli(capsys, "cohomology", "--group", "cyclic:2", "--coeffs", "trivial", "--max-degree", "3",
                           "--json")
    assert code == 0
    assert degrees(out) == [(1, []), (0, []), (0, [2]), (0, [])]


def test_cohomology_text_and_csv(capsys):
    _, text, _ = run_cli(capsys, "cohomology", "--group", "cyclic:2", "--max-degree", "2")
    assert text.splitlines() == ["H^0 = Z", "H^1 = 0", "H^2 = Z/2"]
    _, csv, _ = run_cli(capsys, "cohomology", "--group", "cyclic:2", "--max-degree", "2", "--csv")
    assert csv.splitlines() == ["n,rank,torsion", "0,1,", "1,0,", "2,0,2"]


def test_resolution_choices_agree(capsys):
    outs = []
    for kind in ("dr", "bar", "free"):
        code, out, _ = run_cli(capsys, "cohomology", "--group", "symmetric:3", "--coeffs", "K", "--max-degree", "2",
                               "--resolution", kind, "--json")
        assert code == 0
        outs.append(degrees(out))
    assert outs[0] == outs[1] == outs[2]


def test_adamson_example(capsys):
    code, out, _ = run_cli(capsys, "adamson", "--group", "cyclic:4", "--subgroup", "gen:2", "--coeffs", "trivial",
                           "--max-degree", "4", "--oracle", "quotient", "--oracle", "tensor", "--json")
    assert code == 0
    assert degrees(out) == [(1, []), (0, []), (0, [2]), (0, []), (0, [2])]
    assert json.loads(out)["oracles_agree"] is True


def test_tc_bounds_example(capsys):
    code, out, _ = run_cli(capsys, "tc-bounds", "--pi", "cyclic:2", "--cap", "3", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["secat_lower_bound"] == 3
    assert rep["height_omega"] == 3


def test_bredon_side_by_side(capsys):
    code, out, _ = run_cli(capsys, "bredon", "--group", "symmetric:3", "--subgroup", "gen:1", "--coeffs", "I",
                           "--max-degree", "3", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["all_match"] is True
    assert [d["bredon"]["torsion"] for d in rep["degrees"]] == [[], [3], [], []]


def test_output_is_deterministic(capsys):
    argv = ["spectral", "--group", "cyclic:4", "--subgroup", "gen:2", "--max-degree", "2", "--json"]
    _, first, _ = run_cli(capsys, *argv)
    _, second, _ = run_cli(capsys, *argv)
    assert first == second


def test_warm_cache_matches_cold(capsys, tmp_path):
    argv = ["spectral", "--group", "product:cyclic:2,cyclic:2", "--subgroup", "gen:3", "--max-degree", "2",
            "--json", "--cache-dir", str(tmp_path)]
    _, cold, _ = run_cli(capsys, *argv)
    assert list(tmp_path.glob("*.res"))
    _, warm, _ = run_cli(capsys, *argv)
    assert cold == warm


def test_cache_dir_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("ADAMSON_CACHE_DIR", str(tmp_path))
    code, _, _ = run_cli(capsys, "spectral", "--group", "cyclic:2", "--max-degree", "1", "--json")
    assert code == 0
    assert list(tmp_path.glob("*.res"))


def test_validation_exit_codes(capsys):
    code, _, err = run_cli(capsys, "adamson", "--group", "cyclic:4", "--subgroup", "elements:0,1")
    assert code == 2
    assert "subgroup.elements" in err
    code, _, err = run_cli(capsys, "cohomology", "--group", '{"type": "cyclic", "n": "x"}')
    assert code == 2
    assert "group.n" in err
    code, _, _ = run_cli(capsys, "verify", "--suite", "nonsense")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["cohomology"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_cap_exit_code(capsys):
    code, _, err = run_cli(capsys, "cohomology", "--group", "cyclic:100")
    assert code == 3
    assert "cap" in err
    code, _, _ = run_cli(capsys, "tc-bounds", "--pi", "cyclic:9", "--order-cap", "64")
    assert code == 3


def test_verify_restricted_suite(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "adamson-vs-bredon", "--max-degree", "1", "--json")
    assert code == 0
    rep = json.loads(out)
    names = {p["property"] for p in rep["properties"]}
    assert names == {"bredon_equals_adamson", "psi_phi_identity", "phi_psi_identity", "rho1_u_equals_omega"}


def test_fault_injection_reports_location():
    rep = VerifyReport(["resolutions"])
    bad = CorruptedResolution(bar_resolution(cyclic(2), 3), 1, 0)
    case = verify.Case("Z2", cyclic(2), cyclic(2).trivial())
    suite_resolutions(rep, [], extra=[(case, bad)], degree=2)
    assert not rep.ok
    lines = rep.lines()
    assert lines[0].startswith("FAIL resolution:corrupted-bar: 0 passed, 1 failed")
    assert "d o d != 0" in lines[1] and "('corrupted-bar', 1, 0)" in lines[1]


def test_verify_failure_exit_code(capsys, monkeypatch):
    def corrupted(name, rep, cases=None, seed=None, max_degree=4):
        case = verify.Case("Z2", cyclic(2), cyclic(2).trivial())
        suite_resolutions(rep, [], extra=[(case, CorruptedResolution(bar_resolution(cyclic(2), 3), 1, 0))], degree=2)

    monkeypatch.setattr(verify, "run_suite", corrupted)
    code, out, _ = run_cli(capsys, "verify", "--suite", "resolutions")
    assert code == 4
    assert out.startswith("FAIL resolution:corrupted-bar")
