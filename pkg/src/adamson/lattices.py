"""G-lattices: free abelian groups of finite rank with an integral G-action.

Actions are kept per group element as column-sparse matrices, a list of
``{row: value}`` dicts with column ``j`` the image of basis vector ``j``.
Dense :class:`IntMatrix` views are built on request.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .groups import FiniteGroup, GSetAction, Subgroup
from .linalg import IntMatrix, Sublattice, axpy, sparse_kernel, sparse_matvec

DEFAULT_RANK_CAP = 20000


class RankCapError(RuntimeError):
    """A construction would exceed the configured lattice rank cap."""


def _check_rank(r: int, cap: int | None):
    cap = DEFAULT_RANK_CAP if cap is None else cap
    if r > cap:
        raise RankCapError(f"lattice rank {r} exceeds cap {cap}")


class GLattice:
    def __init__(self, group: FiniteGroup, rank: int, action: Sequence[Sequence[dict]],
                 name: str = "", points: GSetAction | None = None, check: bool = True):
        self.group = group
        self.rank = rank
        self.action = tuple(tuple(dict(c) for c in cols) for cols in action)
        self.name = name
        # set for permutation lattices: the underlying G-set
        self.points = points
        if check:
            self.validate()

    def __repr__(self):
        return f"GLattice({self.name or '?'}, rank={self.rank}, group={self.group.name})"

    def validate(self):
        G, r = self.group, self.rank
        if len(self.action) != G.order or any(len(c) != r for c in self.action):
            raise ValueError("action has the wrong shape")
        for j, col in enumerate(self.action[0]):
            if col != {j: 1}:
                raise ValueError("identity does not act as the identity matrix")
        # multiplicativity against a generating set implies it for all pairs
        for g in G.elements:
            for s in G.generators:
                gs = G.table[g][s]
                for j in range(r):
                    if sparse_matvec(self.action[g], self.action[s][j]) != self.action[gs][j]:
                        raise ValueError(f"action({g})action({s}) != action({gs})")

    @classmethod
    def from_matrices(cls, group: FiniteGroup, mats: Sequence[IntMatrix], name: str = "") -> "GLattice":
        if not mats:
            raise ValueError("need one matrix per group element")
        r = mats[0].rows
        return cls(group, r, [m.sparse_columns() for m in mats], name=name)

    def act(self, g: int, vec: dict) -> dict:
        return sparse_matvec(self.action[g], vec)

    def matrix(self, g: int) -> IntMatrix:
        return IntMatrix.from_sparse_columns(self.action[g], self.rank)

    @cached_property
    def _rows(self) -> tuple:
        out = []
        for cols in self.action:
            rows = [dict() for _ in range(self.rank)]
            for j, col in enumerate(cols):
                for i, v in col.items():
                    rows[i][j] = v
            out.append(tuple(rows))
        return tuple(out)

    def row(self, g: int, i: int) -> dict:
        return self._rows[g][i]

    def restrict(self, H: Subgroup) -> "GLattice":
        return restrict_to_subgroup(self, H)

    @cached_property
    def fingerprint(self) -> str:
        """Content hash: equal for lattices with identical action matrices."""
        h = hashlib.sha256(f"{self.group.fingerprint}|{self.rank}|".encode())
        for cols in self.action:
            h.update(repr([sorted(c.items()) for c in cols]).encode())
        return h.hexdigest()[:24]

    def is_trivial_action(self) -> bool:
        return all(self.action[s][j] == {j: 1} for s in self.group.generators for j in range(self.rank))


@dataclass(frozen=True)
class LatticeMap:
    domain: GLattice
    codomain: GLattice
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.codomain.rank, self.domain.rank):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match "
                             f"{self.codomain.rank}x{self.domain.rank}")

    def is_equivariant(self) -> bool:
        G = self.domain.group
        for g in G.generators:
            if self.matrix @ self.domain.matrix(g) != self.codomain.matrix(g) @ self.matrix:
                return False
        return True

    def compose(self, inner: "LatticeMap") -> "LatticeMap":
        """``self o inner``."""
        return LatticeMap(inner.domain, self.codomain, self.matrix @ inner.matrix)

    def __call__(self, vec):
        if isinstance(vec, dict):
            out: dict = {}
            for j, c in vec.items():
                for i in range(self.matrix.rows):
                    v = self.matrix[i, j]
                    if v:
                        out[i] = out.get(i, 0) + c * v
            return {i: v for i, v in out.items() if v}
        return self.matrix @ vec


# ---------------------------------------------------------------- constructors


def trivial_lattice(G: FiniteGroup, rank: int = 1) -> GLattice:
    cols = [{j: 1} for j in range(rank)]
    return GLattice(G, rank, [cols] * G.order, name="Z" if rank == 1 else f"Z^{rank}", check=False)


def character_lattice(G: FiniteGroup, signs: Sequence[int], name: str = "sign") -> GLattice:
    """Rank-one lattice where ``g`` acts by ``signs[g]`` in ``{+1, -1}``."""
    return GLattice(G, 1, [[{0: int(s)}] for s in signs], name=name)


def sign_lattice(G: FiniteGroup, kernel: Subgroup) -> GLattice:
    """Rank one, elements outside the index-2 subgroup ``kernel`` act by -1."""
    if 2 * kernel.order != G.order:
        raise ValueError("sign lattice needs an index-2 subgroup")
    return character_lattice(G, [1 if g in kernel else -1 for g in G.elements])


def index_two_subgroup(G: FiniteGroup) -> Subgroup | None:
    """The first index-2 subgroup in subgroup enumeration order, if any."""
    if G.order % 2:
        return None
    for S in G.full().subgroups():
        if 2 * S.order == G.order:
            return S
    return None


def permutation_lattice(X: GSetAction, name: str = "") -> GLattice:
    cols = [[{X.table[g][x]: 1} for x in range(X.size)] for g in X.group.elements]
    return GLattice(X.group, X.size, cols, name=name or f"Z[X{X.size}]", points=X, check=False)


def regular_lattice(G: FiniteGroup) -> GLattice:
    from .groups import regular_action

    return permutation_lattice(regular_action(G), name="Z[G]")


@dataclass(frozen=True)
class AugmentationSequence:
    """``0 -> ideal -> L -> Z -> 0`` for a permutation lattice ``L``."""

    ideal: GLattice
    incl: LatticeMap
    eps: LatticeMap


def augmentation_ideal_action(X: GSetAction, basepoint: int = 0) -> list[list[dict]]:
    """Action on the basis ``{x - x0 : x != x0}``, ordered by point index."""
    pos = {}
    for x in range(X.size):
        if x != basepoint:
            pos[x] = len(pos)
    out = []
    for g in X.group.elements:
        tg = X.table[g]
        shift = tg[basepoint]
        cols = []
        for x in pos:
            col = {}
            if tg[x] != basepoint:
                col[pos[tg[x]]] = 1
            if shift != basepoint:
                col[pos[shift]] = col.get(pos[shift], 0) - 1
                if not col[pos[shift]]:
                    del col[pos[shift]]
            cols.append(col)
        out.append(cols)
    return out


def augmentation_sequence(L: GLattice, basepoint: int = 0) -> AugmentationSequence:
    X = L.points
    if X is None:
        raise ValueError("augmentation sequence needs a permutation lattice")
    G = L.group
    ideal = GLattice(G, L.rank - 1, augmentation_ideal_action(X, basepoint), name=f"I({L.name})", check=False)
    others = [x for x in range(X.size) if x != basepoint]
    incl_cols = [{x: 1, basepoint: -1} for x in others]
    incl = LatticeMap(ideal, L, IntMatrix.from_sparse_columns(incl_cols, L.rank))
    eps = LatticeMap(L, trivial_lattice(G), IntMatrix([[1] * L.rank], cols=L.rank))
    return AugmentationSequence(ideal, incl, eps)


def tensor_diagonal(A: GLattice, B: GLattice, cap: int | None = None) -> GLattice:
    """Diagonal action on ``A (x) B``; basis index ``a * rank(B) + b``."""
    if A.group is not B.group and A.group != B.group:
        raise ValueError("lattices over different groups")
    rB = B.rank
    r = A.rank * rB
    _check_rank(r, cap)
    action = []
    for g in A.group.elements:
        ca, cb = A.action[g], B.action[g]
        cols = []
        for a in range(A.rank):
            colA = ca[a]
            for b in range(rB):
                colB = cb[b]
                cols.append({i * rB + j: va * vb for i, va in colA.items() for j, vb in colB.items()})
        action.append(cols)
    return GLattice(A.group, r, action, name=f"{A.name}(x){B.name}", check=False)


def tensor_power(A: GLattice, n: int, cap: int | None = None) -> GLattice:
    out = trivial_lattice(A.group)
    if n == 0:
        return out
    out = A
    for _ in range(n - 1):
        out = tensor_diagonal(out, A, cap=cap)
    if n > 1:
        out.name = f"{A.name}^{n}"
    return out


def hom_diagonal(A: GLattice, B: GLattice, cap: int | None = None) -> GLattice:
    """``Hom_Z(A, B)`` with ``g.f = rho_B(g) f rho_A(g)^-1``; coordinate ``b * rank(A) + a``."""
    rA, rB = A.rank, B.rank
    r = rA * rB
    _check_rank(r, cap)
    G = A.group
    action = []
    for g in G.elements:
        gi = G.inverse[g]
        cb = B.action[g]
        cols = []
        for b in range(rB):
            colB = cb[b]
            for a in range(rA):
                rowA = A.row(gi, a)
                cols.append({i * rA + j: vb * va for i, vb in colB.items() for j, va in rowA.items()})
        action.append(cols)
    return GLattice(G, r, action, name=f"Hom({A.name},{B.name})", check=False)


def restrict_to_subgroup(A: GLattice, H: Subgroup) -> GLattice:
    Hg = H.as_group
    if Hg is A.group:
        return A
    return GLattice(Hg, A.rank, [A.action[h] for h in H.elements], name=f"{A.name}|H", check=False)


@dataclass(frozen=True)
class InvariantSublattice:
    """``A^K`` with its echelon basis; ``lattice`` carries the normalizer action."""

    sublattice: Sublattice
    inclusion: IntMatrix
    lattice: GLattice
    normalizer: Subgroup

    @property
    def rank(self) -> int:
        return self.sublattice.rank


def fixed_sublattice(A: GLattice, K: Subgroup) -> Sublattice:
    r = A.rank
    gens = K.generators
    cols = []
    for j in range(r):
        col = {}
        for t, k in enumerate(gens):
            img = dict(A.action[k][j])
            img[j] = img.get(j, 0) - 1
            for i, v in img.items():
                if v:
                    col[t * r + i] = v
        cols.append(col)
    basis = sparse_kernel(cols) if gens else [{j: 1} for j in range(r)]
    return Sublattice(basis, r)


def invariant_sublattice(A: GLattice, K: Subgroup) -> InvariantSublattice:
    sub = fixed_sublattice(A, K)
    N = K.normalizer()
    NG = N.as_group
    action = []
    for n in N.elements:
        action.append([sub.coords(A.act(n, b)) for b in sub.basis])
    lat = GLattice(NG, sub.rank, action, name=f"{A.name}^K", check=False)
    return InvariantSublattice(sub, sub.matrix(), lat, N)


def hom_constraint_columns(A: GLattice, B: GLattice) -> list[dict]:
    """Columns of the linear map ``f -> (rho_B(s) f - f rho_A(s))_s`` on ``vec(f)``."""
    rA, rB = A.rank, B.rank
    block = rA * rB
    cols = []
    gens = A.group.generators
    for b in range(rB):
        for a in range(rA):
            col: dict = {}
            for t, s in enumerate(gens):
                off = t * block
                for i, v in B.action[s][b].items():
                    key = off + i * rA + a
                    col[key] = col.get(key, 0) + v
                for j, v in A.row(s, a).items():
                    key = off + b * rA + j
                    nv = col.get(key, 0) - v
                    if nv:
                        col[key] = nv
                    else:
                        col.pop(key, None)
            cols.append(col)
    return cols


def equivariant_hom_sublattice(A: GLattice, B: GLattice) -> Sublattice:
    """``Hom_G(A, B)`` inside ``Hom_Z(A, B)``, coordinates ``b * rank(A) + a``."""
    n = A.rank * B.rank
    if not A.group.generators:
        return Sublattice(({k: 1} for k in range(n)), n)
    return Sublattice(sparse_kernel(hom_constraint_columns(A, B)), n)


def equivariant_hom_basis(A: GLattice, B: GLattice) -> list[LatticeMap]:
    sub = equivariant_hom_sublattice(A, B)
    out = []
    for v in sub.basis:
        data = [[0] * A.rank for _ in range(B.rank)]
        for k, x in v.items():
            data[k // A.rank][k % A.rank] = x
        out.append(LatticeMap(A, B, IntMatrix(data, cols=A.rank)))
    return out


def vec_to_matrix(vec: dict, rows: int, cols: int) -> IntMatrix:
    data = [[0] * cols for _ in range(rows)]
    for k, x in vec.items():
        data[k // cols][k % cols] = x
    return IntMatrix(data, cols=cols)


def matrix_to_vec(m: IntMatrix) -> dict:
    out = {}
    for i in range(m.rows):
        for j, v in enumerate(m.row(i)):
            if v:
                out[i * m.cols + j] = v
    return out


def apply_columns(cols: Sequence[dict], vec: dict) -> dict:
    out: dict = {}
    for j, x in vec.items():
        axpy(out, cols[j], x)
    return out
