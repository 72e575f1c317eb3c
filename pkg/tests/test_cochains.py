import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adamson.cochains import (CohomologyClass, bar_cup, cochain_model, cohomology_groups, cup_product,
                              product_lattice, restriction_homomorphism, tensor_class, unit_class)
from adamson.groups import cyclic, subgroup_generated, symmetric
from adamson.lattices import trivial_lattice
from adamson.linalg import IntMatrix
from adamson.resolutions import bar_resolution, dr_resolution

Z2 = cyclic(2)
DR = dr_resolution(Z2, 5)


def omega(res=DR):
    """Degree-1 class with coefficients K whose induced map is the identity of K."""
    K = res.ideal_power(1)
    return tensor_class(res, K, IntMatrix.identity(K.rank), 1)


def x2(res=DR):
    """Generator of H^2(Z/2, Z)."""
    return cohomology_groups(res, trivial_lattice(res.group), 2, representatives=True)[2].generators[0][1]


def swap(rA, rB):
    """Matrix of B (x) A -> A (x) B."""
    rows = [[0] * (rA * rB) for _ in range(rA * rB)]
    for a in range(rA):
        for b in range(rB):
            rows[a * rB + b][b * rA + a] = 1
    return IntMatrix(rows)


def test_sample_classes_are_nonzero():
    assert not omega().is_zero()
    assert not x2().is_zero()
    assert x2() + x2() == 0 * x2()


def test_unit_is_neutral():
    one = unit_class(DR)
    for b in (omega(), x2()):
        ab = cup_product(one, b)
        assert ab.coeffs.fingerprint == b.coeffs.fingerprint
        assert ab.matrix() == b.matrix()


@pytest.mark.parametrize("pair", ["ww", "wx", "xw", "xx"])
def test_graded_commutativity(pair):
    cls = {"w": omega, "x": x2}
    a, b = cls[pair[0]](), cls[pair[1]]()
    p, q = a.degree, b.degree
    ab = cup_product(a, b)
    ba = cup_product(b, a)
    S = swap(a.coeffs.rank, b.coeffs.rank)
    moved = tensor_class(DR, product_lattice(a.coeffs, b.coeffs), S @ ba.matrix(), p + q)
    assert ab == (-1) ** (p * q) * moved


def test_associativity():
    a, b, c = omega(), omega(), x2()
    left = cup_product(cup_product(a, b), c)
    right = cup_product(a, cup_product(b, c))
    assert left.model is right.model
    assert left == right
    assert not left.is_zero()


def test_omega_squared_is_two_torsion():
    w2 = cup_product(omega(), omega())
    assert not w2.is_zero()
    assert (w2 + w2).is_zero()


def test_bar_cup_agrees_on_unit():
    bar = bar_resolution(Z2, 3)
    c = cohomology_groups(bar, trivial_lattice(Z2), 2, representatives=True)[2].generators[0][1]
    assert bar_cup(unit_class(bar), c) == c
    assert bar_cup(c, unit_class(bar)) == c


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_cup_ignores_coboundaries(da, db):
    a, b = omega(), x2()
    moved = []
    for c, coeffs in ((a, da), (b, db)):
        cx = c.model.complex
        pre = {i: v for i, v in enumerate(coeffs[:cx.dim(c.degree - 1)]) if v}
        coords = dict(c.coords)
        for k, v in cx.apply(c.degree - 1, pre).items():
            coords[k] = coords.get(k, 0) + v
        moved.append(CohomologyClass(c.model, c.degree, coords))
    assert moved[0] == a and moved[1] == b
    assert cup_product(*moved) == cup_product(a, b)


def test_restrict_to_whole_group_is_identity():
    c = x2()
    assert restriction_homomorphism(c, Z2.full()) is c


def test_restrict_to_trivial_subgroup_vanishes():
    G = symmetric(3)
    res = dr_resolution(G, 3)
    M = trivial_lattice(G)
    for n in (1, 2):
        for _, c in cohomology_groups(res, M, 2, representatives=True)[n].generators:
            assert restriction_homomorphism(c, G.trivial()).is_zero()
    assert not restriction_homomorphism(unit_class(res), G.trivial()).is_zero()


def test_restriction_is_functorial():
    G = cyclic(4)
    res = dr_resolution(G, 3)
    H = subgroup_generated(G, [2])
    c = cohomology_groups(res, trivial_lattice(G), 2, representatives=True)[2].generators[0][1]
    to_h = restriction_homomorphism(c, H)
    # the generator of H^2(Z/4) restricts to the generator of H^2(Z/2)
    assert not to_h.is_zero()
    assert restriction_homomorphism(to_h, G.trivial()) == restriction_homomorphism(c, G.trivial())
    with pytest.raises(ValueError):
        restriction_homomorphism(restriction_homomorphism(c, G.trivial()), H)


def test_models_are_shared_by_content():
    G = cyclic(3)
    res = dr_resolution(G, 2)
    assert cochain_model(res, trivial_lattice(G)) is cochain_model(res, trivial_lattice(G))


def test_incompatible_classes():
    with pytest.raises(ValueError):
        omega() + x2()
