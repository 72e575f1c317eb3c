from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adamson.groups import (AssociativityError, LatinSquareError, MissingIdentityError,
                            NotAPermutationError, OrderCapError, Subgroup, coset_space, cyclic, dihedral,
                            direct_product, fixed_points, full_family_closure, group_from_cayley,
                            group_from_permutations, is_full_family, quaternion, regular_action,
                            subgroup_generated, symmetric, tc_pair)

# a loop of order 5 with every element an involution: Latin, unital, not associative
LOOP5 = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


def brute_subgroups(G):
    """Every subset closed under the product, by exhaustive search (order <= 8)."""
    out = []
    rest = list(range(1, G.order))
    for mask in range(1 << len(rest)):
        S = {0} | {rest[i] for i in range(len(rest)) if mask >> i & 1}
        if all(G.mul(a, b) in S for a in S for b in S):
            out.append(tuple(sorted(S)))
    return out


def test_cayley_z2():
    G = group_from_cayley([[0, 1], [1, 0]])
    assert G.order == 2
    assert G.inverse == (0, 1)


def test_cayley_errors():
    with pytest.raises(LatinSquareError):
        group_from_cayley([[0, 1], [0, 1]])
    with pytest.raises(AssociativityError):
        group_from_cayley(LOOP5)
    with pytest.raises(MissingIdentityError):
        group_from_cayley([[1, 0], [0, 1]])


def test_permutation_groups():
    assert group_from_permutations(3, [[1, 2, 0]]).order == 3
    S3 = group_from_permutations(3, [[1, 0, 2], [1, 2, 0]])
    assert S3.order == 6
    assert not S3.is_abelian()
    # closure oracle: every permutation of three points is reached
    assert S3.order == len(list(permutations(range(3))))
    assert group_from_permutations(3, []).order == 1
    with pytest.raises(NotAPermutationError):
        group_from_permutations(3, [[0, 0, 1]])
    with pytest.raises(OrderCapError):
        group_from_permutations(6, [[1, 0, 2, 3, 4, 5], [1, 2, 3, 4, 5, 0]], cap=100)


def test_direct_products():
    V = direct_product(cyclic(2), cyclic(2))
    assert V.order == 4
    assert V.exponent() == 2
    G = dihedral(3)
    assert direct_product(cyclic(1), G).table == G.table
    Z6 = direct_product(cyclic(2), cyclic(3))
    assert any(Z6.element_order(g) == 6 for g in Z6.elements)
    with pytest.raises(OrderCapError):
        direct_product(cyclic(10), cyclic(10), cap=64)


def test_named_groups():
    assert dihedral(4).order == 8
    assert not dihedral(4).is_abelian()
    Q = quaternion()
    assert Q.order == 8
    assert sum(1 for g in Q.elements if Q.element_order(g) == 2) == 1
    assert symmetric(4).order == 24


def test_subgroup_generated():
    Z4 = cyclic(4)
    assert subgroup_generated(Z4, [2]).elements == (0, 2)
    assert subgroup_generated(Z4, []).elements == (0,)
    S3 = symmetric(3)
    t = next(g for g in S3.elements if g and S3.element_order(g) == 2)
    assert subgroup_generated(S3, [t]).order == 2
    with pytest.raises(ValueError):
        subgroup_generated(Z4, [7])


def test_subgroup_validation():
    with pytest.raises(ValueError):
        Subgroup(cyclic(4), [0, 1])
    with pytest.raises(ValueError):
        Subgroup(cyclic(4), [2])


def test_coset_spaces():
    Z4 = cyclic(4)
    X = coset_space(Z4, subgroup_generated(Z4, [2]))
    assert X.size == 2
    whole = coset_space(Z4, Z4.full())
    assert whole.size == 1
    assert all(row == (0,) for row in whole.action.table)
    assert coset_space(Z4, Z4.trivial()).action.table == regular_action(Z4).table


def test_family_closure():
    tc = tc_pair(cyclic(2))
    F = full_family_closure(tc.group, tc.diagonal)
    assert [S.elements for S in F] == [(0,), tc.diagonal.elements]
    Z4 = cyclic(4)
    assert [S.elements for S in full_family_closure(Z4, Z4.trivial())] == [(0,)]
    S3 = symmetric(3)
    t = next(g for g in S3.elements if g and S3.element_order(g) == 2)
    F = full_family_closure(S3, subgroup_generated(S3, [t]))
    expected = [S for S in brute_subgroups(S3) if len(S) <= 2]
    assert sorted(S.elements for S in F) == sorted(expected)
    assert len(F) == 4
    assert is_full_family(F)


def test_fixed_points():
    tc = tc_pair(cyclic(2))
    X = tc.cosets.action
    assert fixed_points(X, tc.group.trivial()) == [0, 1]
    # the diagonal is normal in an abelian group, so it fixes every coset
    assert fixed_points(X, tc.diagonal) == [0, 1]
    assert fixed_points(regular_action(cyclic(3)), cyclic(3).full()) == []


def test_tc_pairs():
    tc = tc_pair(cyclic(2))
    assert tc.group.order == 4
    assert tc.diagonal.order == 2
    assert tc.cosets.size == 2
    one = tc_pair(cyclic(1))
    assert one.diagonal == one.group.full()
    assert one.cosets.size == 1
    S3 = symmetric(3)
    tc = tc_pair(S3)
    assert tc.cosets.size == 6
    n = S3.order
    count = 0
    for gh in tc.group.elements:
        g, h = divmod(gh, n)
        for x in range(6):
            assert tc.to_pi[tc.cosets.action.act(gh, x)] == S3.mul(S3.mul(g, tc.to_pi[x]), S3.inverse[h])
            count += 1
    assert count == 36 * 6


@pytest.mark.parametrize("G", [cyclic(6), symmetric(3), dihedral(4), quaternion()], ids=lambda G: G.name)
def test_subgroup_enumeration_matches_brute_force(G):
    assert sorted(S.elements for S in G.full().subgroups()) == sorted(brute_subgroups(G))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["Z6", "S3", "D4", "Q8"]), st.lists(st.integers(0, 7), max_size=3))
def test_generated_subgroup_is_closed(name, elems):
    G = {"Z6": cyclic(6), "S3": symmetric(3), "D4": dihedral(4), "Q8": quaternion()}[name]
    elems = [e % G.order for e in elems]
    H = subgroup_generated(G, elems)
    Subgroup(G, H.elements)  # validates closure
    assert all(e in H for e in elems)
    assert G.order % H.order == 0
    X = coset_space(G, H)
    assert X.size * H.order == G.order
    assert X.action.stabilizer(0) == H
