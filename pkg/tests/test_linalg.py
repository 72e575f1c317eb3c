import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adamson.linalg import (AbelianInvariants, ConstraintKernel, IntMatrix, Sublattice, cokernel_invariants,
                            kernel_basis, smith_normal_form, solve_in_image, sparse_kernel)


def det(rows):
    n = len(rows)
    a = [[Fraction(x) for x in r] for r in rows]
    sign, out = 1, Fraction(1)
    for i in range(n):
        p = next((k for k in range(i, n) if a[k][i]), None)
        if p is None:
            return 0
        if p != i:
            a[i], a[p] = a[p], a[i]
            sign = -sign
        out *= a[i][i]
        for k in range(i + 1, n):
            f = a[k][i] / a[i][i]
            for j in range(i, n):
                a[k][j] -= f * a[i][j]
    return int(sign * out)


def determinantal_divisors(rows, ncols):
    """Invariant factors from gcds of k-minors; independent of any elimination order."""
    m = len(rows)
    out, prev = [], 1
    for k in range(1, min(m, ncols) + 1):
        g = 0
        for r in combinations(range(m), k):
            for c in combinations(range(ncols), k):
                g = math.gcd(g, det([[rows[i][j] for j in c] for i in r]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


small_matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)))


def test_smith_identity():
    snf = smith_normal_form(IntMatrix.identity(3))
    assert snf.S == IntMatrix.identity(3)
    assert snf.divisors == (1, 1, 1)


def test_smith_zero():
    snf = smith_normal_form(IntMatrix.zeros(2, 2))
    assert snf.S == IntMatrix.zeros(2, 2)
    assert snf.divisors == (0, 0)


def test_smith_two_by_two():
    A = IntMatrix([[2, 4], [6, 8]])
    snf = smith_normal_form(A)
    assert snf.divisors == (2, 4)
    assert determinantal_divisors(A.tolist(), 2) == [2, 4]
    assert snf.U @ A @ snf.V == snf.S


def test_cokernel_examples():
    assert cokernel_invariants(IntMatrix.identity(3)) == AbelianInvariants(0, ())
    assert cokernel_invariants(IntMatrix([[2]])) == AbelianInvariants(0, (2,))
    assert cokernel_invariants(IntMatrix([[2, 4], [6, 8]])) == AbelianInvariants(0, (2, 4))


def test_kernel_examples():
    assert kernel_basis(IntMatrix.identity(3)).cols == 0
    K = kernel_basis(IntMatrix.zeros(3, 3))
    assert K.cols == 3
    assert abs(det(K.tolist())) == 1
    K = kernel_basis(IntMatrix([[1, 1]]))
    assert K.cols == 1
    assert K.tolist() in ([[1], [-1]], [[-1], [1]])


def test_solve_examples():
    assert solve_in_image(IntMatrix.identity(3), (4, -1, 7)) == (4, -1, 7)
    assert solve_in_image(IntMatrix([[2]]), (1,)) is None
    assert solve_in_image(IntMatrix([[2]]), (6,)) == (3,)


def test_abelian_invariants_validation():
    with pytest.raises(ValueError):
        AbelianInvariants(0, (2, 3))
    with pytest.raises(ValueError):
        AbelianInvariants(0, (1,))
    assert str(AbelianInvariants(2, (2, 4))) == "Z^2 + Z/2 + Z/4"
    assert str(AbelianInvariants()) == "0"


@settings(max_examples=80, deadline=None)
@given(small_matrices)
def test_smith_matches_minor_gcds(rows):
    A = IntMatrix(rows, cols=len(rows[0]))
    snf = smith_normal_form(A)
    assert snf.U @ A @ snf.V == snf.S
    nonzero = [d for d in snf.divisors if d]
    assert nonzero == determinantal_divisors(rows, A.cols)
    for a, b in zip(nonzero, nonzero[1:]):
        assert b % a == 0


@settings(max_examples=80, deadline=None)
@given(small_matrices)
def test_kernel_is_saturated_basis(rows):
    A = IntMatrix(rows, cols=len(rows[0]))
    K = kernel_basis(A)
    assert A @ K == IntMatrix.zeros(A.rows, K.cols)
    r = len(determinantal_divisors(rows, A.cols))
    assert K.cols == A.cols - r
    if K.cols:
        # saturation: the maximal minors of the basis have gcd 1
        assert set(determinantal_divisors(K.tolist(), K.cols)) == {1}


@settings(max_examples=80, deadline=None)
@given(small_matrices, st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_solve_round_trip(rows, coeffs):
    A = IntMatrix(rows, cols=len(rows[0]))
    x = coeffs[:A.cols]
    b = [sum(A[i, j] * x[j] for j in range(A.cols)) for i in range(A.rows)]
    y = solve_in_image(A, b)
    assert y is not None
    assert [sum(A[i, j] * y[j] for j in range(A.cols)) for i in range(A.rows)] == b


@settings(max_examples=60, deadline=None)
@given(st.lists(st.dictionaries(st.integers(0, 5), st.integers(-2, 2), max_size=4), min_size=1, max_size=5))
def test_constraint_kernel_agrees_with_sparse_kernel(rows):
    rows = [{k: v for k, v in r.items() if v} for r in rows]
    ck = ConstraintKernel(rows, 6)
    # the same kernel, computed as relations among the columns of the transposed system
    cols = [dict() for _ in range(6)]
    for i, r in enumerate(rows):
        for j, v in r.items():
            cols[j][i] = v
    ref = Sublattice(sparse_kernel(cols), 6)
    assert len(ck.basis) == ref.rank
    for v in ck.basis:
        assert ck.satisfies(v)
        assert ref.contains(v)
        assert ck.element(ck.coords(v)) == v
