"""End-to-end acceptance: one test per criterion, each printing a PASS/FAIL line.

Every comparison is exact integer equality. The heavy lifting is done by the
verification suites in :mod:`adamson.verify`, run over the built-in test matrix.
"""
import json
import time

import pytest

from adamson import cli
from adamson.adamson import group_resolution
from adamson.bernstein import bernstein_height
from adamson.cochains import cohomology_groups
from adamson.groups import cyclic, tc_pair
from adamson.lattices import trivial_lattice
from adamson.linalg import AbelianInvariants
from adamson.verify import VerifyReport, run_suite


def announce(capsys, n, title, ok, detail=""):
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {title}" + (f" ({detail})" if detail else ""))


def run_suites(*names, seed=None):
    rep = VerifyReport(list(names))
    t0 = time.perf_counter()
    for name in names:
        run_suite(name, rep, seed=seed)
    return rep, time.perf_counter() - t0


def summary(rep):
    total = sum(p.passed + len(p.failures) for p in rep.results.values())
    return f"{total} checks"


def failures(rep):
    return "\n".join(line for line in rep.lines() if not line.startswith("PASS"))


def test_criterion_01_resolution_soundness(capsys):
    rep, seconds = run_suites("resolutions")
    ok = rep.ok and seconds < 60
    announce(capsys, 1, "resolution soundness through degree 4", ok, f"{summary(rep)}, {seconds:.1f} s")
    assert rep.ok, failures(rep)
    assert seconds < 60


def test_criterion_02_ordinary_oracle(capsys):
    rep, _ = run_suites("ordinary")
    G = cyclic(2)
    classical = [c.invariants for c in cohomology_groups(group_resolution(G, 5, "dr"), trivial_lattice(G), 4)]
    expected = [AbelianInvariants(1), AbelianInvariants(), AbelianInvariants(0, (2,)), AbelianInvariants(),
                AbelianInvariants(0, (2,))]
    ok = rep.ok and classical == expected
    announce(capsys, 2, "dr and bar cohomology agree; H*(Z2, Z) classical", ok, summary(rep))
    assert rep.ok, failures(rep)
    assert classical == expected


def test_criterion_03_relative_oracle(capsys):
    rep, _ = run_suites("relative")
    announce(capsys, 3, "standard, tensor and quotient relative cohomology agree", rep.ok, summary(rep))
    assert rep.ok, failures(rep)
    assert set(rep.results) == {"standard_equals_tensor", "normal_quotient_oracle"}


def test_criterion_04_zero_divisor_model(capsys):
    rep, _ = run_suites("zero-divisor")
    prop = rep.results["zero_divisor_model"]
    # three pairs, two coefficient lattices, degrees 1..3
    ok = rep.ok and prop.passed == 18
    announce(capsys, 4, "zero-divisor model matches relative cohomology", ok, summary(rep))
    assert rep.ok, failures(rep)
    assert prop.passed == 18


def test_criterion_05_canonical_identities(capsys):
    rep, _ = run_suites("canonical")
    announce(capsys, 5, "rho*(phi) = omega, explicit witness, powers = iterated cups", rep.ok, summary(rep))
    assert rep.ok, failures(rep)
    assert set(rep.results) == {"rho_star_phi_equals_omega", "omega_restriction_witness",
                                "power_equals_iterated_cup"}


def test_criterion_06_universality(capsys):
    rep, _ = run_suites("universality", seed=0)
    ok = rep.ok and rep.results["universality"].passed > 0
    announce(capsys, 6, "universality of the canonical class", ok, summary(rep))
    assert rep.ok, failures(rep)
    assert rep.results["universality"].passed > 0


def test_criterion_07_adamson_bredon(capsys):
    rep, _ = run_suites("adamson-vs-bredon")
    announce(capsys, 7, "Adamson and Bredon cohomology agree; rho1(u) = omega", rep.ok, summary(rep))
    assert rep.ok, failures(rep)
    assert set(rep.results) == {"bredon_equals_adamson", "psi_phi_identity", "phi_psi_identity",
                                "rho1_u_equals_omega"}


def test_criterion_08_height_vs_rho(capsys):
    rep, _ = run_suites("height-vs-rho")
    tc = tc_pair(cyclic(2))
    height = bernstein_height(tc.group, tc.diagonal, 3)
    code = cli.main(["tc-bounds", "--pi", "cyclic:2", "--cap", "3", "--json"])
    bound = json.loads(capsys.readouterr().out)["secat_lower_bound"]
    ok = rep.ok and height == 3 and code == 0 and bound >= 3
    announce(capsys, 8, "rho estimate <= height; TC(Z2) >= 3", ok, f"{summary(rep)}, height {height}, bound {bound}")
    assert rep.ok, failures(rep)
    assert height == 3
    assert code == 0 and bound >= 3


def test_criterion_09_spectral_sequence(capsys):
    rep, _ = run_suites("spectral")
    announce(capsys, 9, "page-2 bottom row, collapse and Shapiro", rep.ok, summary(rep))
    assert rep.ok, failures(rep)
    assert rep.results["shapiro"].passed == 4


JOBS = [
    ["cohomology", "--group", "cyclic:2", "--coeffs", "trivial", "--max-degree", "3", "--json"],
    ["adamson", "--group", "cyclic:4", "--subgroup", "gen:2", "--max-degree", "4", "--oracle", "quotient", "--json"],
    ["tc-bounds", "--pi", "cyclic:2", "--cap", "3", "--json"],
    ["secat-bounds", "--group", "symmetric:3", "--subgroup", "gen:1", "--cap", "2", "--csv"],
    ["spectral", "--group", "cyclic:4", "--subgroup", "gen:2", "--max-degree", "2", "--json"],
]


def test_criterion_10_determinism_and_conjugacy(capsys):
    outputs = []
    for argv in JOBS:
        runs = []
        for _ in range(2):
            cli.main(list(argv))
            runs.append(capsys.readouterr().out)
        outputs.append(runs[0] == runs[1] and runs[0])
    rep, _ = run_suites("conjugacy")
    ok = all(outputs) and rep.ok
    announce(capsys, 10, "byte-identical output; conjugate subgroups agree", ok, f"{len(JOBS)} jobs, {summary(rep)}")
    assert all(outputs)
    assert rep.ok, failures(rep)


@pytest.mark.parametrize("argv", JOBS[:2], ids=["cohomology", "adamson"])
def test_cached_runs_match_fresh_runs(argv, tmp_path, capsys):
    cli.main(list(argv))
    fresh = capsys.readouterr().out
    cli.main(list(argv) + ["--cache-dir", str(tmp_path)])
    cold = capsys.readouterr().out
    cli.main(list(argv) + ["--cache-dir", str(tmp_path)])
    assert fresh == cold == capsys.readouterr().out
