"""Cross-oracle verification suites over a fixed test matrix of small groups.

Each suite runs a set of named properties over the matrix and records
pass counts; every failure carries the ``(G, H, M, n)`` tuple where it
occurred.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .groups import (FiniteGroup, Subgroup, coset_space, cyclic, dihedral, direct_product, quaternion,
                     regular_action, subgroup_generated, symmetric, tc_pair)
from .lattices import index_two_subgroup, regular_lattice, sign_lattice, tensor_diagonal, trivial_lattice
from .resolutions import (Resolution, augmentation_ideal, check_resolution, comparison_map_phi,
                          free_resolution, unit_lattice)
from .cochains import CohomologyClass, cochain_model, cohomology_groups

__all__ = ["Case", "PropertyResult", "VerifyReport", "SUITES", "test_matrix", "ordinary_groups", "run_suite",
           "run_verify", "CorruptedResolution"]

SUITES = ("resolutions", "ordinary", "relative", "zero-divisor", "canonical", "universality",
          "adamson-vs-bredon", "height-vs-rho", "spectral", "conjugacy")


@dataclass(frozen=True)
class Case:
    name: str
    group: FiniteGroup
    subgroup: Subgroup

    @property
    def label(self) -> str:
        return f"{self.group.name}/{list(self.subgroup.elements)}"


def _order_two(G: FiniteGroup, central: bool | None = None) -> int:
    for g in G.elements:
        if g and G.element_order(g) == 2:
            c = all(G.mul(g, x) == G.mul(x, g) for x in G.elements)
            if central is None or c == central:
                return g
    raise ValueError(f"{G.name} has no suitable element of order 2")


def ordinary_groups() -> list[FiniteGroup]:
    return [cyclic(2), cyclic(3), cyclic(4), cyclic(6), direct_product(cyclic(2), cyclic(2)),
            symmetric(3), dihedral(4), quaternion()]


def test_matrix() -> list[Case]:
    """Trivial, full and one proper subgroup per group, plus two TC pairs."""
    out = []
    proper = {
        "Z4": lambda G: [2],
        "Z6": lambda G: [3],
        "Z2xZ2": lambda G: [2],  # the first factor
        "S3": lambda G: [_order_two(G)],
        "D4": lambda G: [_order_two(G, central=False)],
        "Q8": lambda G: [_order_two(G)],  # the center
    }
    for G in ordinary_groups():
        out.append(Case(f"{G.name}/e", G, G.trivial()))
        if G.name in proper:
            H = subgroup_generated(G, proper[G.name](G))
            out.append(Case(f"{G.name}/{H.order}", G, H))
        out.append(Case(f"{G.name}/{G.name}", G, G.full()))
    for n in (2, 3):
        tc = tc_pair(cyclic(n))
        out.append(Case(f"TC(Z{n})", tc.group, tc.diagonal))
    return out


@dataclass
class PropertyResult:
    name: str
    passed: int = 0
    failures: list = field(default_factory=list)

    @property
    def failed(self) -> int:
        return len(self.failures)

    def to_json(self) -> dict:
        return {"property": self.name, "passed": self.passed, "failed": self.failed,
                "failures": [list(map(str, f)) for f in self.failures]}


@dataclass
class VerifyReport:
    suites: list
    results: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(not r.failures for r in self.results.values())

    def record(self, prop: str, ok: bool, where: tuple, detail: str = ""):
        r = self.results.setdefault(prop, PropertyResult(prop))
        if ok:
            r.passed += 1
        else:
            r.failures.append(where + ((detail,) if detail else ()))

    def check(self, prop: str, where: tuple, fn):
        """Run ``fn``; exceptions count as failures with their message."""
        try:
            ok = bool(fn())
            detail = ""
        except Exception as e:  # noqa: BLE001 - reported, not swallowed
            ok, detail = False, f"{type(e).__name__}: {e}"
        self.record(prop, ok, where, detail)
        return ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "suites": list(self.suites),
                "properties": [self.results[k].to_json() for k in sorted(self.results)]}

    def lines(self) -> list[str]:
        out = []
        for k in sorted(self.results):
            r = self.results[k]
            out.append(f"{'PASS' if not r.failures else 'FAIL'} {k}: {r.passed} passed, {r.failed} failed")
            for f in r.failures:
                out.append("    at " + ", ".join(map(str, f)))
        return out


# ---------------------------------------------------------------- fault injection


class CorruptedResolution(Resolution):
    """Wraps a resolution and perturbs one differential column (test fixture)."""

    def __init__(self, inner: Resolution, degree: int, index: int):
        self.inner = inner
        self.kind = f"corrupted-{inner.kind}"
        self.group = inner.group
        self.target = inner.target
        self.maxdeg = inner.maxdeg
        self.bad = (degree, index)

    def rank(self, n):
        return self.inner.rank(n)

    def diff(self, n, idx):
        d = dict(self.inner.diff(n, idx))
        if (n, idx) == self.bad:
            d[0] = d.get(0, 0) + 1
            if not d[0]:
                del d[0]
        return d

    def act(self, g, n, idx):
        return self.inner.act(g, n, idx)


# ---------------------------------------------------------------- suites


def _tag(case: Case, M: str = "-", n="-") -> tuple:
    return (case.group.name, list(case.subgroup.elements), M, n)


def suite_resolutions(rep: VerifyReport, cases, extra=(), degree: int = 4):
    """d o d = 0, equivariance and exactness for every resolution kind."""
    from .adamson import group_resolution, relative_resolution
    seen = set()
    resolutions = list(extra)
    for c in cases:
        G = c.group
        if G.fingerprint not in seen:
            seen.add(G.fingerprint)
            resolutions.append((c, group_resolution(G, degree + 1, "bar")))
            resolutions.append((c, group_resolution(G, degree + 1, "dr")))
            resolutions.append((c, free_resolution(unit_lattice(G), degree + 1)))
        resolutions.append((c, relative_resolution(G, c.subgroup, degree + 1, "standard")))
        resolutions.append((c, relative_resolution(G, c.subgroup, degree + 1, "tensor")))
    for c, res in resolutions:
        rep.check(f"resolution:{res.kind}", _tag(c, "Z", f"<={degree}"),
                  lambda res=res: check_resolution(res, degree).ok)


def ordinary_modules(G: FiniteGroup) -> dict:
    K = augmentation_ideal(regular_action(G), 0, "K")
    out = {"Z": trivial_lattice(G), "Z[G]": regular_lattice(G), "K": K, "K(x)K": tensor_diagonal(K, K)}
    S = index_two_subgroup(G)
    if S is not None:
        out["sign"] = sign_lattice(G, S)
    return out


def suite_ordinary(rep: VerifyReport, cases, upto: int = 3):
    from .adamson import group_resolution
    seen = set()
    for c in cases:
        G = c.group
        if G.fingerprint in seen:
            continue
        seen.add(G.fingerprint)
        dr = group_resolution(G, upto + 1, "dr")
        bar = group_resolution(G, upto + 1, "bar")
        for name, M in ordinary_modules(G).items():
            a = cohomology_groups(dr, M, upto)
            b = cohomology_groups(bar, M, upto)
            for n in range(upto + 1):
                rep.record("dr_equals_bar", a[n].invariants == b[n].invariants, _tag(c, name, n),
                           f"{a[n].invariants} vs {b[n].invariants}")


def _relative_modules(c: Case) -> dict:
    X = coset_space(c.group, c.subgroup).action
    return {"Z": trivial_lattice(c.group), "I": augmentation_ideal(X, 0, "I")}


def suite_relative(rep: VerifyReport, cases, upto: int = 3):
    from .adamson import adamson_cohomology, normal_quotient_oracle
    for c in cases:
        for name, M in _relative_modules(c).items():
            s = adamson_cohomology(c.group, c.subgroup, M, upto, "standard")
            t = adamson_cohomology(c.group, c.subgroup, M, upto, "tensor")
            q = normal_quotient_oracle(c.group, c.subgroup, M, upto) if c.subgroup.is_normal() else None
            for n in range(upto + 1):
                rep.record("standard_equals_tensor", s[n].invariants == t[n].invariants, _tag(c, name, n),
                           f"{s[n].invariants} vs {t[n].invariants}")
                if q is not None:
                    rep.record("normal_quotient_oracle", s[n].invariants == q[n], _tag(c, name, n),
                               f"{s[n].invariants} vs {q[n]}")


def zero_divisor_cases() -> list[Case]:
    Z4, S3 = cyclic(4), symmetric(3)
    tc = tc_pair(cyclic(2))
    return [Case("Z4/2", Z4, subgroup_generated(Z4, [2])), Case("TC(Z2)", tc.group, tc.diagonal),
            Case("S3/2", S3, subgroup_generated(S3, [_order_two(S3)]))]


def suite_zero_divisor(rep: VerifyReport, cases=None, degrees=(1, 2, 3)):
    from .adamson import zero_divisor_model
    for c in cases or zero_divisor_cases():
        for name, M in _relative_modules(c).items():
            for n in degrees:
                rep.check("zero_divisor_model", _tag(c, name, n),
                          lambda M=M, n=n: zero_divisor_model(c.group, c.subgroup, M, n).agrees)


def suite_canonical(rep: VerifyReport, cases, upto: int = 3):
    from .adamson import canonical_class, group_resolution, rho_star
    from .bernstein import class_power, is_zero_divisor, iterated_cup
    for c in cases:
        G, H = c.group, c.subgroup
        dr = group_resolution(G, upto + 1, "dr")
        bar = group_resolution(G, 2, "bar")
        om = class_power(dr, H, 1)

        def rho_phi():
            r = rho_star(canonical_class(G, H, 2), bar)
            dr2 = group_resolution(G, 2, "dr")
            om2 = class_power(dr2, H, 1)
            omb = om2.pullback(comparison_map_phi(bar, dr2), cochain_model(bar, om2.coeffs))
            return r == omb

        rep.check("rho_star_phi_equals_omega", _tag(c, "I", 1), rho_phi)
        rep.check("omega_restriction_witness", _tag(c, "I", 1),
                  lambda: is_zero_divisor(om, H, omega=True).explicit_witness)
        for n in range(2, upto + 1):
            rep.check("power_equals_iterated_cup", _tag(c, f"I^{n}", n),
                      lambda n=n: class_power(dr, H, n) == iterated_cup(om, n))


def _sampled(model, n, gens, rng):
    """Generators plus one random integer combination when a seed is given."""
    out = [CohomologyClass(model, n, v, check=False) for _, v in gens]
    if rng is not None and gens:
        comb: dict = {}
        for _, v in gens:
            k = rng.randint(-3, 3)
            for i, x in v.items():
                comb[i] = comb.get(i, 0) + k * x
        out.append(CohomologyClass(model, n, comb, check=False))
    return out


def suite_universality(rep: VerifyReport, cases, upto: int = 2, seed: int | None = None):
    from .adamson import adamson_cohomology, canonical_power, relative_resolution, \
        universality_check
    rng = random.Random(seed) if seed is not None else None
    for c in cases:
        G, H = c.group, c.subgroup
        tens = relative_resolution(G, H, upto + 1, "tensor")
        for name, M in _relative_modules(c).items():
            groups = adamson_cohomology(G, H, M, upto, "standard", representatives=True)
            for n in range(1, upto + 1):
                g = groups[n]
                model = g.generators[0][1].model if g.generators else None
                for lam in (_sampled(model, n, [(d, x.coords) for d, x in g.generators], rng) if model else []):
                    if lam.is_zero():
                        continue
                    rep.check("universality", _tag(c, name, n), lambda lam=lam: universality_check(lam).matches)
                if not g.invariants.is_zero:
                    rep.check("nonzero_group_implies_phi_power_nonzero", _tag(c, name, n),
                              lambda n=n: not canonical_power(tens, n).is_zero())


def suite_bredon(rep: VerifyReport, cases, upto: int = 3):
    from .adamson import adamson_cohomology, group_resolution, relative_resolution
    from .bernstein import class_power
    from .bredon import bredon_canonical_class, bredon_cochain_complex, phi_transfer, principal_evaluation, \
        psi_transfer
    for c in cases:
        G, H = c.group, c.subgroup
        std = relative_resolution(G, H, upto + 1, "standard")
        for name, M in _relative_modules(c).items():
            bc = bredon_cochain_complex(G, H, M, upto)
            adam = adamson_cohomology(G, H, M, upto, "standard")
            model = cochain_model(std, M)
            for n in range(upto + 1):
                rep.record("bredon_equals_adamson", bc.cohomology(n) == adam[n].invariants, _tag(c, name, n),
                           f"{bc.cohomology(n)} vs {adam[n].invariants}")

                def psi_phi(n=n):
                    return all(psi_transfer(bc, std, n, phi_transfer(bc, std, n, {i: 1})) == {i: 1}
                               for i in range(model.complex.dim(n)))

                def phi_psi(n=n):
                    return all(phi_transfer(bc, std, n, psi_transfer(bc, std, n, {k: 1})) == {k: 1}
                               for k in range(bc.dim(n)))

                rep.check("psi_phi_identity", _tag(c, name, n), psi_phi)
                rep.check("phi_psi_identity", _tag(c, name, n), phi_psi)
        bar = group_resolution(G, 2, "bar")
        dr = group_resolution(G, 2, "dr")

        def rho1():
            om = class_power(dr, H, 1)
            omb = om.pullback(comparison_map_phi(bar, dr), cochain_model(bar, om.coeffs))
            return principal_evaluation(bredon_canonical_class(G, H), bar) == omb

        rep.check("rho1_u_equals_omega", _tag(c, "I", 1), rho1)


def suite_height(rep: VerifyReport, cases, cap: int = 2, tc_cap: int = 3):
    from .bernstein import bernstein_height, tc_lower_bound
    from .bredon import rho_invariant_estimate
    for c in cases:
        rep.check("rho_estimate_at_most_height", _tag(c, "I^m", f"<={cap}"),
                  lambda c=c: rho_invariant_estimate(c.group, c.subgroup, cap)
                  <= bernstein_height(c.group, c.subgroup, cap))
    tc = tc_pair(cyclic(2))
    where = (tc.group.name, list(tc.diagonal.elements), "I^m", f"<={tc_cap}")
    rep.check("tc_z2_height_reaches_cap", where, lambda: bernstein_height(tc.group, tc.diagonal, tc_cap) == tc_cap)
    rep.check("tc_z2_bound_reaches_cap", where,
              lambda: tc_lower_bound(cyclic(2), tc_cap, rho=False).secat_lower_bound == tc_cap)


def suite_spectral(rep: VerifyReport, P: int = 3, Q: int = 2):
    from .adamson import adamson_cohomology, group_resolution
    from .spectral import e1_page, e2_page, shapiro_check
    Z4 = cyclic(4)
    tc = tc_pair(cyclic(2))
    for c in (Case("Z4/2", Z4, subgroup_generated(Z4, [2])), Case("TC(Z2)", tc.group, tc.diagonal)):
        G, H = c.group, c.subgroup
        M = trivial_lattice(G)
        e1 = e1_page(G, H, M, P, Q)
        e2 = e2_page(e1)
        adam = adamson_cohomology(G, H, M, P - 1)
        for name, ok in sorted(e1.checks.items()):
            rep.record(f"e1_{name}", ok, _tag(c, "Z"))
        for p in range(P):
            rep.record("e2_row0_equals_adamson", e2.entries[(p, 0)] == adam[p].invariants, _tag(c, "Z", p),
                       f"{e2.entries[(p, 0)]} vs {adam[p].invariants}")
        X = coset_space(G, H).action
        for q in (0, 1):
            rep.check("shapiro", _tag(c, "I", q),
                      lambda q=q: shapiro_check(G, H, augmentation_ideal(X, 0, "I"), M, q).ok)
    # trivial subgroup: page 2 is concentrated on the row q = 0, which is ordinary cohomology
    for G in (cyclic(2), cyclic(4)):
        c = Case(f"{G.name}/e", G, G.trivial())
        M = trivial_lattice(G)
        e2 = e2_page(e1_page(G, c.subgroup, M, P, Q))
        ordinary = cohomology_groups(group_resolution(G, P, "dr"), M, P - 1)
        for (p, q), inv in sorted(e2.entries.items()):
            if q == 0:
                rep.record("e2_collapse_row0", inv == ordinary[p].invariants, _tag(c, "Z", (p, q)),
                           f"{inv} vs {ordinary[p].invariants}")
            else:
                rep.record("e2_collapse_off_row", inv.is_zero, _tag(c, "Z", (p, q)), str(inv))


def suite_conjugacy(rep: VerifyReport, cap: int = 2):
    from .bernstein import secat_lower_bounds
    S3 = symmetric(3)
    subs = [subgroup_generated(S3, [g]) for g in S3.elements if g and S3.element_order(g) == 2]
    reports = [secat_lower_bounds(S3, H, cap).to_json() for H in subs]
    for H, r in zip(subs, reports):
        rep.record("conjugate_reports_identical", r == reports[0], ("S3", list(H.elements), "-", f"<={cap}"))


def run_suite(name: str, rep: VerifyReport, cases=None, seed: int | None = None, max_degree: int = 4):
    cases = test_matrix() if cases is None else cases
    if name == "resolutions":
        suite_resolutions(rep, cases, degree=max_degree)
    elif name == "ordinary":
        suite_ordinary(rep, cases, min(3, max_degree))
    elif name == "relative":
        suite_relative(rep, cases, min(3, max_degree))
    elif name == "zero-divisor":
        suite_zero_divisor(rep)
    elif name == "canonical":
        suite_canonical(rep, cases, min(3, max_degree))
    elif name == "universality":
        suite_universality(rep, cases, min(2, max_degree), seed)
    elif name == "adamson-vs-bredon":
        suite_bredon(rep, cases, min(3, max_degree))
    elif name == "height-vs-rho":
        suite_height(rep, cases)
    elif name == "spectral":
        suite_spectral(rep)
    elif name == "conjugacy":
        suite_conjugacy(rep)
    else:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")


def run_verify(suites=None, cases=None, seed: int | None = None, max_degree: int = 4, progress=None) -> VerifyReport:
    suites = list(SUITES) if not suites else list(suites)
    rep = VerifyReport(suites)
    t0 = time.perf_counter()
    for s in suites:
        run_suite(s, rep, cases, seed, max_degree)
        if progress:
            progress(s)
    rep.seconds = time.perf_counter() - t0
    return rep
