import pytest

from adamson.adamson import group_resolution
from adamson.bernstein import (bernstein_class, bernstein_height, bernstein_map, canonical_subgroup, class_power,
                               is_zero_divisor, iterated_cup, secat_lower_bounds, tc_lower_bound)
from adamson.cochains import CohomologyClass, cochain_model, cohomology_groups, unit_class
from adamson.groups import cyclic, dihedral, subgroup_generated, symmetric, tc_pair
from adamson.lattices import sign_lattice, trivial_lattice
from adamson.linalg import IntMatrix

TC = tc_pair(cyclic(2))
V, DIAG = TC.group, TC.diagonal


def order_two(G):
    return [subgroup_generated(G, [g]) for g in G.elements if g and G.element_order(g) == 2]


def test_omega_full_subgroup_is_zero():
    G = symmetric(3)
    om = bernstein_class(G, G.full())
    assert om.coeffs.rank == 0
    assert om.is_zero()
    assert bernstein_height(G, G.full(), 3) == 0


def test_omega_trivial_subgroup():
    G = cyclic(2)
    assert bernstein_map(G, G.trivial()) == IntMatrix.identity(1)
    om = bernstein_class(G, G.trivial())
    assert not om.is_zero()


def test_omega_diagonal_has_sign_coefficients():
    om = bernstein_class(V, DIAG)
    assert not om.is_zero()
    assert om.coeffs.fingerprint == sign_lattice(V, DIAG).fingerprint


def test_powers_low_degrees():
    res = group_resolution(V, 3, "dr")
    assert class_power(res, DIAG, 0) == unit_class(res)
    assert class_power(res, DIAG, 1) == bernstein_class(V, DIAG, 3)
    assert not class_power(res, DIAG, 2).is_zero()
    with pytest.raises(ValueError):
        class_power(res, DIAG, -1)


@pytest.mark.parametrize("case", ["diag", "z4", "s3"])
def test_power_equals_iterated_cup(case):
    if case == "diag":
        G, H = V, DIAG
    elif case == "z4":
        G = cyclic(4)
        H = subgroup_generated(G, [2])
    else:
        G = symmetric(3)
        H = order_two(G)[0]
    res = group_resolution(G, 4, "dr")
    om = class_power(res, H, 1)
    for n in range(2, 4):
        assert class_power(res, H, n) == iterated_cup(om, n)


def test_zero_divisor_of_zero_class():
    G = cyclic(2)
    res = group_resolution(G, 2, "dr")
    model = cochain_model(res, trivial_lattice(G))
    assert is_zero_divisor(CohomologyClass(model, 1, {}), G.full()).zero_divisor


@pytest.mark.parametrize("G", [cyclic(4), symmetric(3), dihedral(4), V], ids=lambda G: G.name)
def test_omega_is_zero_divisor_with_explicit_witness(G):
    res = group_resolution(G, 2, "dr")
    for H in [G.trivial()] + order_two(G)[:2]:
        check = is_zero_divisor(class_power(res, H, 1), H, omega=True)
        assert check.zero_divisor
        assert check.explicit_witness


def test_nonzero_restriction_is_not_zero_divisor():
    # sign character of V killing the diagonal; the first factor maps onto V / diagonal
    M = sign_lattice(V, DIAG)
    first = subgroup_generated(V, [2])
    res = group_resolution(V, 2, "dr")
    gens = cohomology_groups(res, M, 1, representatives=True)[1].generators
    assert [d for d, _ in gens] == [2]
    check = is_zero_divisor(gens[0][1], first)
    assert not check.zero_divisor
    assert check.cobounding is None


def test_heights():
    assert bernstein_height(V, DIAG, 3) == 3
    G = cyclic(2)
    assert bernstein_height(G, G.trivial(), 4) == 4


def test_height_z4_against_quotient():
    # omega^2 lies in H^2(Z/4, Z) = Z/4 and is inflated from the generator of H^2(Z/2, Z), so it is
    # twice a generator; its square is 4 u^2 = 0 and omega^3 = 2 (omega u) dies in a group of exponent 2
    G = cyclic(4)
    H = subgroup_generated(G, [2])
    res = group_resolution(G, 3, "dr")
    w2 = class_power(res, H, 2)
    gens = cohomology_groups(res, w2.coeffs, 2, representatives=True)[2].generators
    assert [d for d, _ in gens] == [4]
    u = gens[0][1]
    assert w2 == 2 * u
    assert bernstein_height(G, H, 4) == 2


def test_height_is_monotone_in_cap():
    G = cyclic(4)
    H = subgroup_generated(G, [2])
    values = [bernstein_height(G, H, cap) for cap in range(5)]
    assert values == sorted(values)
    assert values == [0, 1, 2, 2, 2]


def test_conjugate_subgroups_give_equal_reports():
    G = symmetric(3)
    subs = order_two(G)
    assert len(subs) == 3
    assert len({bernstein_height(G, H, 3) for H in subs}) == 1
    reports = [secat_lower_bounds(G, H, 2).to_json() for H in subs]
    assert reports[0] == reports[1] == reports[2]
    assert {canonical_subgroup(H).elements for H in subs} == {subs[0].elements}


def test_secat_examples():
    G = cyclic(3)
    assert secat_lower_bounds(G, G.full(), 3).secat_lower_bound == 0
    rep = secat_lower_bounds(V, DIAG, 3)
    assert rep.secat_lower_bound >= 3
    assert rep.height_omega == 3
    Z2 = cyclic(2)
    rep = secat_lower_bounds(Z2, Z2.trivial(), 4)
    assert rep.secat_lower_bound >= 4
    assert "lower bounds only; secat itself is not computed" in rep.notes


def test_report_invariants():
    rep = secat_lower_bounds(symmetric(3), order_two(symmetric(3))[0], 2).to_json()
    assert set(rep) == {"pair", "cap", "height_omega", "rho_estimate", "secat_lower_bound", "notes"}
    assert 0 <= rep["secat_lower_bound"] <= rep["cap"]
    assert rep["height_omega"] >= rep["rho_estimate"]


def test_tc_bounds():
    assert tc_lower_bound(cyclic(1), 3).secat_lower_bound == 0
    rep = tc_lower_bound(cyclic(2), 3)
    assert rep.secat_lower_bound >= 3
    assert rep.notes[0] == "TC(Z2) >= 3"
    rep = tc_lower_bound(cyclic(3), 2)
    # the power check and the iterated cup agree on the diagonal of Z/3 x Z/3
    tc = tc_pair(cyclic(3))
    res = group_resolution(tc.group, 3, "dr")
    om = class_power(res, tc.diagonal, 1)
    assert class_power(res, tc.diagonal, 2) == iterated_cup(om, 2)
    assert rep.height_omega == (0 if om.is_zero() else 1 if iterated_cup(om, 2).is_zero() else 2)
