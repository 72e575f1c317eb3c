import pytest

from adamson.adamson import adamson_cohomology, canonical_class, group_resolution, relative_resolution
from adamson.bernstein import bernstein_height, class_power
from adamson.bredon import (BredonClass, NaturalityError, bredon_canonical_class, bredon_cochain_complex,
                            coefficient_system, orbit_category, phi_transfer, principal_evaluation,
                            psi_transfer, rho_invariant_estimate)
from adamson.cochains import cochain_model, cohomology_groups, unit_class
from adamson.groups import cyclic, subgroup_generated, symmetric, tc_pair
from adamson.lattices import augmentation_sequence, regular_lattice, sign_lattice, trivial_lattice
from adamson.linalg import AbelianInvariants, IntMatrix
from adamson.resolutions import augmentation_ideal, comparison_map_phi

TC = tc_pair(cyclic(2))
V, DIAG = TC.group, TC.diagonal


def z4_pair():
    G = cyclic(4)
    return G, subgroup_generated(G, [2])


def brute_hom_count(G, K, L):
    """Equivariant maps G/K -> G/L are the cosets gL with g^-1 K g inside L."""
    cosets = set()
    for g in G.elements:
        gi = G.inverse[g]
        if all(G.mul(G.mul(gi, k), g) in L.elements for k in K.elements):
            cosets.add(frozenset(G.mul(g, l) for l in L.elements))
    return len(cosets)


def test_orbit_category_trivial_subgroup():
    G = symmetric(3)
    C = orbit_category(G, G.trivial())
    assert len(C.objects) == 1
    assert len(C.hom[(0, 0)]) == G.order
    assert C.check()


def test_orbit_category_diagonal():
    C = orbit_category(V, DIAG)
    assert [K.elements for K in C.objects] == [(0,), DIAG.elements]
    assert len(C.hom[(0, 1)]) == 2
    assert len(C.hom[(1, 0)]) == 0
    for i in range(2):
        e = C.morphisms[C.identity(i)]
        assert (e.source, e.target) == (i, i)
    assert C.check()


@pytest.mark.parametrize("G", [symmetric(3), cyclic(4), V], ids=lambda G: G.name)
def test_hom_sets_are_complete(G):
    H = next(subgroup_generated(G, [g]) for g in G.elements if g and G.element_order(g) == 2)
    C = orbit_category(G, H)
    for i, K in enumerate(C.objects):
        for j, L in enumerate(C.objects):
            assert len(C.hom[(i, j)]) == brute_hom_count(G, K, L)
    assert C.check()


def test_constant_system():
    G, H = z4_pair()
    C = orbit_category(G, H)
    Zc = coefficient_system(trivial_lattice(G), C)
    assert Zc.ranks == [1, 1]
    assert all(m == IntMatrix.identity(1) for m in Zc.matrices.values())


def test_sign_system_on_its_kernel():
    C = orbit_category(V, DIAG)
    S = coefficient_system(sign_lattice(V, DIAG), C)
    assert S.ranks == [1, 1]
    assert S.check()


def test_functoriality_z4():
    G, H = z4_pair()
    C = orbit_category(G, H)
    K = augmentation_sequence(regular_lattice(G)).ideal
    for M in (trivial_lattice(G), regular_lattice(G), K, augmentation_ideal(relative_resolution(G, H, 1).points)):
        assert coefficient_system(M, C).check()


def test_bredon_trivial_subgroup_is_ordinary():
    G = symmetric(3)
    for M in (trivial_lattice(G), regular_lattice(G)):
        bc = bredon_cochain_complex(G, G.trivial(), M, 3)
        bar = group_resolution(G, 4, "bar")
        assert [bc.cohomology(n) for n in range(4)] == [c.invariants for c in cohomology_groups(bar, M, 3)]


def test_bredon_full_subgroup():
    G = symmetric(3)
    R = regular_lattice(G)
    bc = bredon_cochain_complex(G, G.full(), R, 2)
    assert len(bc.category.objects) == 6  # every subgroup of S3
    assert [bc.cohomology(n) for n in range(3)] == [AbelianInvariants(1), AbelianInvariants(), AbelianInvariants()]


def test_bredon_z4():
    G, H = z4_pair()
    bc = bredon_cochain_complex(G, H, trivial_lattice(G), 3)
    expected = [AbelianInvariants(1), AbelianInvariants(), AbelianInvariants(0, (2,)), AbelianInvariants()]
    assert [bc.cohomology(n) for n in range(4)] == expected
    assert [g.invariants for g in adamson_cohomology(G, H, trivial_lattice(G), 3)] == expected
    with pytest.raises(ValueError):
        bc.cohomology(4)


def test_transfer_of_zero():
    G, H = z4_pair()
    bc = bredon_cochain_complex(G, H, trivial_lattice(G), 2)
    std = relative_resolution(G, H, 3)
    assert phi_transfer(bc, std, 1, {}) == {}
    assert psi_transfer(bc, std, 1, {}) == {}


def test_transfer_of_canonical_cocycle():
    phi = canonical_class(V, DIAG, 2)
    std = relative_resolution(V, DIAG, 2)
    phi_std = phi.pullback(comparison_map_phi(std, phi.resolution), cochain_model(std, phi.coeffs))
    bc = bredon_cochain_complex(V, DIAG, phi.coeffs, 1)
    coords = phi_transfer(bc, std, 1, phi_std.coords)
    amb = bc.to_ambient(1, coords)
    assert amb
    assert bc.naturality_defects(1, amb) == []
    assert bc.complex.is_cocycle(1, coords)
    assert psi_transfer(bc, std, 1, coords) == phi_std.coords


def test_round_trip_on_two_cochains():
    G, H = z4_pair()
    std = relative_resolution(G, H, 3)
    for M in (trivial_lattice(G), regular_lattice(G)):
        bc = bredon_cochain_complex(G, H, M, 2)
        model = cochain_model(std, M)
        for i in range(model.dim(2)):
            assert psi_transfer(bc, std, 2, phi_transfer(bc, std, 2, {i: 1})) == {i: 1}
        for k in range(bc.dim(2)):
            assert phi_transfer(bc, std, 2, psi_transfer(bc, std, 2, {k: 1})) == {k: 1}


def test_transfer_commutes_with_differential():
    G, H = z4_pair()
    std = relative_resolution(G, H, 3)
    M = regular_lattice(G)
    bc = bredon_cochain_complex(G, H, M, 2)
    model = cochain_model(std, M)
    for i in range(model.dim(1)):
        lhs = phi_transfer(bc, std, 2, model.complex.apply(1, {i: 1}))
        rhs = bc.complex.apply(1, phi_transfer(bc, std, 1, {i: 1}))
        assert lhs == rhs


def test_psi_rejects_non_natural_input():
    G, H = z4_pair()
    bc = bredon_cochain_complex(G, H, trivial_lattice(G), 1)
    std = relative_resolution(G, H, 2)
    # a value at G/H alone, with nothing at G/e, breaks naturality along G/e -> G/H
    lvl = bc.level(1)
    bad = {lvl.offsets[1]: 1}
    assert bc.naturality_defects(1, bad)
    with pytest.raises(NaturalityError):
        psi_transfer(bc, std, 1, ambient=bad)


def test_canonical_class_full_subgroup():
    G = cyclic(3)
    u = bredon_canonical_class(G, G.full())
    assert u.coords == {}
    assert u.is_zero()


@pytest.mark.parametrize("case", ["diag", "trivial"])
def test_principal_evaluation_of_u_is_omega(case):
    if case == "diag":
        G, H = V, DIAG
    else:
        G = cyclic(3)
        H = G.trivial()
    bar = group_resolution(G, 2, "bar")
    dr = group_resolution(G, 2, "dr")
    om = class_power(dr, H, 1)
    expected = om.pullback(comparison_map_phi(bar, dr), cochain_model(bar, om.coeffs))
    u = bredon_canonical_class(G, H)
    assert not u.is_zero()
    assert principal_evaluation(u, bar) == expected


def test_principal_evaluation_degree_zero():
    G, H = z4_pair()
    bc = bredon_cochain_complex(G, H, trivial_lattice(G), 1)
    (order, coords), = bc.complex.generators(0)
    assert order == 0
    bar = group_resolution(G, 1, "bar")
    one = unit_class(bar)
    image = principal_evaluation(BredonClass(bc, 0, coords), bar)
    assert image == one or image == -1 * one


def test_principal_evaluation_iso_for_trivial_subgroup():
    G = cyclic(2)
    bc = bredon_cochain_complex(G, G.trivial(), trivial_lattice(G), 2)
    bar = group_resolution(G, 3, "bar")
    for n in range(3):
        for _, coords in bc.complex.generators(n):
            assert not principal_evaluation(BredonClass(bc, n, coords), bar).is_zero()


def test_rho_estimates():
    G = symmetric(3)
    assert rho_invariant_estimate(G, G.full(), 2) == 0
    Z2 = cyclic(2)
    assert rho_invariant_estimate(Z2, Z2.trivial(), 2, [trivial_lattice(Z2)]) == 2
    r = rho_invariant_estimate(V, DIAG, 3)
    assert r <= bernstein_height(V, DIAG, 3)
