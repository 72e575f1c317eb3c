"""Exact integer linear algebra.

Everything here works over Python integers. Dense matrices use the
immutable :class:`IntMatrix`; large sparse problems (cochain differentials,
naturality constraints) are handled with dict-based sparse vectors
``{index: value}``, where absent keys are zero.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence


class IntMatrix:
    """Immutable dense integer matrix stored row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable[int]], cols: int | None = None):
        rows = tuple(tuple(int(x) for x in r) for r in data)
        if cols is None:
            if not rows:
                raise ValueError("column count required for a matrix with no rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix rows")
        self.rows = len(rows)
        self.cols = cols
        self._data = rows

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(([int(i == j) for j in range(n)] for i in range(n)), cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(([0] * cols for _ in range(rows)), cols=cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        return cls(([c[i] for c in columns] for i in range(rows)), cols=len(columns))

    @classmethod
    def from_sparse_columns(cls, columns: Sequence[dict], rows: int) -> "IntMatrix":
        data = [[0] * len(columns) for _ in range(rows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                data[i][j] = v
        return cls(data, cols=len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def sparse_columns(self) -> list[dict]:
        cols = [dict() for _ in range(self.cols)]
        for i, r in enumerate(self._data):
            for j, v in enumerate(r):
                if v:
                    cols[j][i] = v
        return cols

    def sparse_rows(self) -> list[dict]:
        return [{j: v for j, v in enumerate(r) if v} for r in self._data]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(zip(*self._data), cols=self.rows) if self.rows else IntMatrix.zeros(self.cols, 0)

    def is_zero(self) -> bool:
        return all(v == 0 for r in self._data for v in r)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = other.sparse_columns()
            out = [[0] * other.cols for _ in range(self.rows)]
            for j, col in enumerate(ocols):
                for i, r in enumerate(self._data):
                    s = 0
                    for k, v in col.items():
                        s += r[k] * v
                    out[i][j] = s
            return IntMatrix(out, cols=other.cols)
        vec = list(other)
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, vec) if a) for r in self._data)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(([a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)), cols=self.cols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(([a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)), cols=self.cols)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(([-a for a in r] for r in self._data), cols=self.cols)

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, self._data))

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r})" if self.rows else f"IntMatrix([], cols={self.cols})"


def kron(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Kronecker product, ``a``-index major."""
    rows = []
    for ra in a._data:
        for rb in b._data:
            rows.append([x * y for x in ra for y in rb])
    return IntMatrix(rows, cols=a.cols * b.cols)


def hstack(mats: Sequence[IntMatrix], rows: int) -> IntMatrix:
    data = [[] for _ in range(rows)]
    for m in mats:
        for i in range(rows):
            data[i].extend(m.row(i))
    return IntMatrix(data, cols=sum(m.cols for m in mats))


def vstack(mats: Sequence[IntMatrix], cols: int) -> IntMatrix:
    return IntMatrix([r for m in mats for r in m._data], cols=cols)


# ---------------------------------------------------------------- sparse vectors


def axpy(dst: dict, src: dict, c: int) -> None:
    """In place ``dst += c * src``."""
    if not c:
        return
    for k, v in src.items():
        nv = dst.get(k, 0) + c * v
        if nv:
            dst[k] = nv
        else:
            dst.pop(k, None)


def sparse_matvec(columns: Sequence[dict], vec: dict) -> dict:
    out: dict = {}
    for j, x in vec.items():
        axpy(out, columns[j], x)
    return out


def sparse_compose(outer: Sequence[dict], inner: Sequence[dict]) -> list[dict]:
    """Columns of ``outer @ inner`` for column-sparse matrices."""
    return [sparse_matvec(outer, col) for col in inner]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    x, nx, y, ny = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
    if a < 0:
        return -x, -y, -a
    return x, y, a


# ---------------------------------------------------------------- abelian groups


@dataclass(frozen=True)
class AbelianInvariants:
    """Isomorphism type of a finitely generated abelian group."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"torsion coefficient {d} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")

    @classmethod
    def from_divisors(cls, divisors: Iterable[int], extra_free: int = 0) -> "AbelianInvariants":
        """Cokernel type of a diagonal map: 0 entries become free rank, 1s vanish."""
        divisors = list(divisors)
        zeros = sum(1 for d in divisors if d == 0)
        return cls(zeros + extra_free, tuple(sorted(d for d in divisors if d > 1)))

    @classmethod
    def from_json(cls, obj: dict) -> "AbelianInvariants":
        return cls(obj["rank"], tuple(obj["torsion"]))

    def to_json(self) -> dict:
        return {"rank": self.free_rank, "torsion": list(self.torsion)}

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> int:
        """Order of the group, 0 when infinite."""
        if self.free_rank:
            return 0
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------- Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    divisors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.divisors if d)


def _as_rows(A) -> list[list[int]]:
    if isinstance(A, IntMatrix):
        return A.tolist()
    return [list(map(int, r)) for r in A]


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transforms, ``U @ A @ V == S``.

    Pivots on an entry of least absolute value, clears its row and column by
    Euclidean steps, and folds in any row whose entries the pivot fails to
    divide, so the diagonal is a divisibility chain.
    """
    S = _as_rows(A)
    m = len(S)
    n = A.cols if isinstance(A, IntMatrix) else (len(S[0]) if S else 0)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in S:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        rs, rd = S[src], S[dst]
        for k in range(n):
            if rs[k]:
                rd[k] += c * rs[k]
        us, ud = U[src], U[dst]
        for k in range(m):
            if us[k]:
                ud[k] += c * us[k]

    def add_col(dst, src, c):  # col_dst += c * col_src
        for r in S:
            if r[src]:
                r[dst] += c * r[src]
        for r in V:
            if r[src]:
                r[dst] += c * r[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = S[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = S[t][t]
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // p))
                    if S[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // p))
                    if S[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, m):
                    if S[i][t] and (best is None or abs(S[i][t]) < best[0]):
                        best = (abs(S[i][t]), i, t)
                for j in range(t, n):
                    if S[t][j] and (best is None or abs(S[t][j]) < best[0]):
                        best = (abs(S[t][j]), t, j)
                _, i, j = best
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if S[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    divisors = tuple(S[i][i] if i < m and i < n else 0 for i in range(min(m, n)))
    return SmithDecomposition(IntMatrix(U, cols=m), IntMatrix(S, cols=n), IntMatrix(V, cols=n), divisors)


def _dense_divisors(rows: list[list[int]], n: int) -> list[int]:
    """Invariant factors of a dense matrix, no transforms kept."""
    S = [r[:] for r in rows if any(r)]
    m = len(S)
    out = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            r = S[i]
            for j in range(t, n):
                v = r[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        S[t], S[i] = S[i], S[t]
        if j != t:
            for r in S:
                r[t], r[j] = r[j], r[t]
        while True:
            p = S[t][t]
            dirty = False
            rt = S[t]
            for i in range(t + 1, m):
                ri = S[i]
                if ri[t]:
                    q = ri[t] // p
                    for k in range(t, n):
                        if rt[k]:
                            ri[k] -= q * rt[k]
                    if ri[t]:
                        dirty = True
            for j in range(t + 1, n):
                if rt[j]:
                    q = rt[j] // p
                    for r in S:
                        if r[t]:
                            r[j] -= q * r[t]
                    if rt[j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, m):
                    if S[i][t] and (best is None or abs(S[i][t]) < best[0]):
                        best = (abs(S[i][t]), i, t)
                for j in range(t, n):
                    if S[t][j] and (best is None or abs(S[t][j]) < best[0]):
                        best = (abs(S[t][j]), t, j)
                _, i, j = best
                S[t], S[i] = S[i], S[t]
                if j != t:
                    for r in S:
                        r[t], r[j] = r[j], r[t]
                continue
            bad = None
            for i in range(t + 1, m):
                ri = S[i]
                for j in range(t + 1, n):
                    if ri[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            rb = S[bad]
            for k in range(t, n):
                S[t][k] += rb[k]
        out.append(abs(S[t][t]))
        t += 1
    return out


def _eliminate_unit_pivots(rows: list[dict]) -> tuple[list[dict], int]:
    """Strip unimodular pivots from a sparse matrix.

    Each step picks a +-1 entry, clears its column with row operations and
    then drops the pivot row and column. Returns what is left together with
    the number of pivots removed; the invariant factors of the input are
    ``[1] * pivots`` followed by those of the remainder.
    """
    rows = [dict(r) for r in rows if r]
    col_index: dict = defaultdict(set)
    for i, r in enumerate(rows):
        for c in r:
            col_index[c].add(i)
    alive = set(range(len(rows)))
    heap = [(len(r), i) for i, r in enumerate(rows)]
    heapq.heapify(heap)
    pivots = 0
    while heap:
        ln, i = heapq.heappop(heap)
        if i not in alive or len(rows[i]) != ln:
            continue
        r = rows[i]
        if not r:
            alive.discard(i)
            continue
        best = None
        for c, v in r.items():
            if v == 1 or v == -1:
                cnt = len(col_index[c])
                if best is None or cnt < best[0]:
                    best = (cnt, c, v)
                    if cnt == 1:
                        break
        if best is None:
            continue
        _, c, v = best
        alive.discard(i)
        for cc in r:
            col_index[cc].discard(i)
        for k in col_index.pop(c):
            rk = rows[k]
            f = rk[c] * v
            for cc, vv in r.items():
                nv = rk.get(cc, 0) - f * vv
                if nv:
                    if cc not in rk:
                        col_index[cc].add(k)
                    rk[cc] = nv
                elif cc in rk:
                    del rk[cc]
                    col_index[cc].discard(k)
            heapq.heappush(heap, (len(rk), k))
        pivots += 1
    return [rows[i] for i in sorted(alive) if rows[i]], pivots


def sparse_divisors(rows: Sequence[dict], ncols: int | None = None) -> list[int]:
    """Nonzero invariant factors of a sparse matrix given by its rows."""
    rest, pivots = _eliminate_unit_pivots(list(rows))
    if not rest:
        return [1] * pivots
    cols = sorted({c for r in rest for c in r})
    where = {c: k for k, c in enumerate(cols)}
    dense = []
    for r in rest:
        row = [0] * len(cols)
        for c, v in r.items():
            row[where[c]] = v
        dense.append(row)
    return [1] * pivots + _dense_divisors(dense, len(cols))


def matrix_divisors(A: IntMatrix) -> list[int]:
    return sparse_divisors(A.sparse_rows(), A.cols)


def rank(A: IntMatrix) -> int:
    return len(matrix_divisors(A))


def cokernel_invariants(A: IntMatrix) -> AbelianInvariants:
    """Type of ``Z^rows / image(A)`` with columns as images of the domain basis."""
    divs = matrix_divisors(A)
    return AbelianInvariants(A.rows - len(divs), tuple(sorted(d for d in divs if d > 1)))


def sparse_cokernel_invariants(columns: Sequence[dict], nrows: int) -> AbelianInvariants:
    divs = sparse_divisors(columns)
    return AbelianInvariants(nrows - len(divs), tuple(sorted(d for d in divs if d > 1)))


# ---------------------------------------------------------------- lattice echelon


class Echelon:
    """Integral echelon basis of the lattice spanned by added vectors.

    Pivots are keyed by leading (smallest) index with positive leading
    coefficient. When ``track`` is set every pivot carries the combination
    of input vectors it came from, and inputs that reduce to zero yield
    relations, which together form a basis of the relation lattice.
    """

    def __init__(self, track: bool = False):
        self.track = track
        self.pivots: dict[int, tuple[dict, dict | None]] = {}
        self.relations: list[dict] = []
        self._count = 0

    def __len__(self):
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, vec: dict, tag=None) -> bool:
        """Insert a vector; returns True when it enlarged the rank."""
        if tag is None:
            tag = self._count
        self._count += 1
        v = dict(vec)
        t = {tag: 1} if self.track else None
        while v:
            lead = min(v)
            piv = self.pivots.get(lead)
            b = v[lead]
            if piv is None:
                if b < 0:
                    v = {k: -x for k, x in v.items()}
                    if t is not None:
                        t = {k: -x for k, x in t.items()}
                self.pivots[lead] = (v, t)
                return True
            pv, pt = piv
            a = pv[lead]
            if b % a == 0:
                q = b // a
                axpy(v, pv, -q)
                if t is not None:
                    axpy(t, pt, -q)
                continue
            x, y, g = xgcd(a, b)
            newp: dict = {}
            axpy(newp, pv, x)
            axpy(newp, v, y)
            other: dict = {}
            axpy(other, pv, b // g)
            axpy(other, v, -(a // g))
            if t is not None:
                newt: dict = {}
                axpy(newt, pt, x)
                axpy(newt, t, y)
                othert: dict = {}
                axpy(othert, pt, b // g)
                axpy(othert, t, -(a // g))
                self.pivots[lead] = (newp, newt)
                v, t = other, othert
            else:
                self.pivots[lead] = (newp, None)
                v = other
        if t is not None:
            self.relations.append(t)
        return False

    def reduce(self, vec: dict) -> tuple[dict, dict]:
        """Reduce ``vec`` as far as the lattice allows.

        Returns ``(residual, combination)`` where combination is in terms
        of pivots (or inputs, when tracking) and ``vec = residual + span``.
        """
        v = dict(vec)
        combo: dict = {}
        while v:
            lead = min(v)
            piv = self.pivots.get(lead)
            if piv is None:
                break
            pv, pt = piv
            a, b = pv[lead], v[lead]
            if b % a:
                break
            q = b // a
            axpy(v, pv, -q)
            if self.track:
                axpy(combo, pt, q)
            else:
                combo[lead] = combo.get(lead, 0) + q
        return v, combo

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[0]

    def solve(self, vec: dict) -> dict | None:
        res, combo = self.reduce(vec)
        return None if res else combo

    def basis(self) -> list[dict]:
        return [self.pivots[k][0] for k in sorted(self.pivots)]


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a basis of ``{x : A x = 0}``."""
    rels = sparse_kernel(A.sparse_columns())
    return IntMatrix.from_sparse_columns(rels, A.cols) if rels else IntMatrix.zeros(A.cols, 0)


def sparse_kernel(columns: Sequence[dict]) -> list[dict]:
    """Basis of the integer relations among the given sparse columns."""
    ech = Echelon(track=True)
    for j, c in enumerate(columns):
        ech.add(c, tag=j)
    return [r for r in ech.relations]


def solve_in_image(A: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """Integer ``x`` with ``A x = b``, or None when there is none."""
    b = list(b)
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {A.rows}")
    solver = ImageSolver(A.sparse_columns())
    x = solver.solve({i: v for i, v in enumerate(b) if v})
    if x is None:
        return None
    return tuple(x.get(j, 0) for j in range(A.cols))


class ImageSolver:
    """Reusable solver for ``A x = b`` given the columns of ``A``."""

    def __init__(self, columns: Sequence[dict]):
        self.ncols = len(columns)
        self._ech = Echelon(track=True)
        for j, c in enumerate(columns):
            self._ech.add(c, tag=j)

    @property
    def rank(self) -> int:
        return self._ech.rank

    def solve(self, b: dict) -> dict | None:
        return self._ech.solve(b)

    def contains(self, b: dict) -> bool:
        return self._ech.contains(b)

    def kernel(self) -> list[dict]:
        return self._ech.relations


class Sublattice:
    """A saturated-or-not sublattice of ``Z^n`` with coordinate extraction.

    The stored basis is the echelon basis of the spanning vectors, so
    coordinates of a member are recovered by forward reduction.
    """

    def __init__(self, vectors: Iterable[dict], ambient: int):
        self.ambient = ambient
        ech = Echelon()
        for v in vectors:
            if v:
                ech.add(v)
        self._leads = sorted(ech.pivots)
        self._pos = {lead: k for k, lead in enumerate(self._leads)}
        self._ech = ech
        self.basis = [ech.pivots[k][0] for k in self._leads]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coords(self, vec: dict) -> dict:
        res, combo = self._ech.reduce(vec)
        if res:
            raise ValueError("vector is not in the sublattice")
        return {self._pos[k]: q for k, q in combo.items() if q}

    def contains(self, vec: dict) -> bool:
        return self._ech.contains(vec)

    def element(self, coords: dict) -> dict:
        out: dict = {}
        for k, c in coords.items():
            axpy(out, self.basis[k], c)
        return out

    def matrix(self) -> IntMatrix:
        return IntMatrix.from_sparse_columns(self.basis, self.ambient)


def dense_to_sparse(vec: Sequence[int]) -> dict:
    return {i: v for i, v in enumerate(vec) if v}


def sparse_to_dense(vec: dict, n: int) -> list[int]:
    out = [0] * n
    for i, v in vec.items():
        out[i] = v
    return out


def content(vec: Iterable[int]) -> int:
    g = 0
    for v in vec:
        g = gcd(g, v)
    return g


def unimodular_inverse(U: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular matrix."""
    solver = ImageSolver(U.sparse_columns())
    cols = []
    for i in range(U.rows):
        x = solver.solve({i: 1})
        if x is None:
            raise ValueError("matrix is not unimodular")
        cols.append(x)
    return IntMatrix.from_sparse_columns(cols, U.cols)



# ---------------------------------------------------------------- constraint kernels


class ConstraintKernel:
    """Integer solutions of a sparse homogeneous system ``rows . x = 0``.

    Unit pivots are eliminated first, which keeps systems of the form
    ``x_u = A x_v`` (one unit variable per row) nearly linear in size.
    Pivot variables are then expressed through the free ones; whatever
    rows have no unit entry left are solved by a lattice kernel on the
    free variables they touch.
    """

    def __init__(self, rows: Sequence[dict], nvars: int):
        self.nvars = nvars
        self._rows = [dict(r) for r in rows if r]
        order, rest = _unit_pivot_order(self._rows)
        pivot_vars = {p for p, _, _ in order}
        expr: dict = {}
        for p, v, row in reversed(order):
            e: dict = {}
            for c, a in row.items():
                if c == p:
                    continue
                axpy(e, expr[c] if c in expr else {c: 1}, -v * a)
            expr[p] = e
        self.free = [x for x in range(nvars) if x not in pivot_vars]
        touched = sorted({c for r in rest for c in r})
        # residual rows only mention free variables
        if touched:
            where = {c: k for k, c in enumerate(touched)}
            cols = [dict() for _ in touched]
            for i, r in enumerate(rest):
                for c, a in r.items():
                    cols[where[c]][i] = a
            rel = sparse_kernel(cols)
            gens = [{touched[k]: a for k, a in r.items()} for r in rel]
        else:
            gens = []
        touched_set = set(touched)
        gens.extend({f: 1} for f in self.free if f not in touched_set)
        uses: dict = defaultdict(dict)
        for p, e in expr.items():
            for f, a in e.items():
                uses[f][p] = a
        basis = []
        for g in gens:
            vec = dict(g)
            for f, a in g.items():
                axpy(vec, uses.get(f, {}), a)
            basis.append(vec)
        self.basis = basis
        self._gens = gens
        self._index = {}
        for k, g in enumerate(gens):
            if len(g) == 1:
                (f, a), = g.items()
                if a == 1:
                    self._index[f] = k
        self._simple = len(self._index) == len(gens)
        self._solver = None
        self._by_var = None

    @property
    def rank(self) -> int:
        return len(self.basis)

    def satisfies(self, vec: dict) -> bool:
        if self._by_var is None:
            self._by_var = defaultdict(list)
            for i, r in enumerate(self._rows):
                for c in r:
                    self._by_var[c].append(i)
        rows = {i for c in vec if vec[c] for i in self._by_var.get(c, ())}
        for i in rows:
            s = 0
            for c, a in self._rows[i].items():
                s += a * vec.get(c, 0)
            if s:
                return False
        return True

    def coords(self, vec: dict, check: bool = True) -> dict:
        """Coordinates of a solution in ``basis``; raises for non-solutions when checking."""
        if check and not self.satisfies(vec):
            raise ValueError("vector does not satisfy the constraints")
        if self._simple:
            return {self._index[f]: v for f in self.free if (v := vec.get(f, 0))}
        part = {f: v for f in self.free if (v := vec.get(f, 0))}
        if self._solver is None:
            self._solver = ImageSolver(self._gens)
        out = self._solver.solve(part)
        if out is None:
            raise ValueError("vector is not an integral combination of the kernel basis")
        return out

    def element(self, coords: dict) -> dict:
        out: dict = {}
        for k, c in coords.items():
            axpy(out, self.basis[k], c)
        return out


def _unit_pivot_order(rows: list[dict]) -> tuple[list, list[dict]]:
    """Gaussian elimination on unit pivots, recording ``(var, coeff, row)``.

    Each recorded row has its pivot variable cleared from all rows chosen
    later, so back substitution in reverse order is valid.
    """
    rows = [dict(r) for r in rows]
    col_index: dict = defaultdict(set)
    for i, r in enumerate(rows):
        for c in r:
            col_index[c].add(i)
    alive = set(range(len(rows)))
    heap = [(len(r), i) for i, r in enumerate(rows)]
    heapq.heapify(heap)
    order = []
    while heap:
        ln, i = heapq.heappop(heap)
        if i not in alive or len(rows[i]) != ln:
            continue
        r = rows[i]
        if not r:
            alive.discard(i)
            continue
        best = None
        for c, v in r.items():
            if v == 1 or v == -1:
                cnt = len(col_index[c])
                if best is None or cnt < best[0] or (cnt == best[0] and c < best[1]):
                    best = (cnt, c, v)
        if best is None:
            continue
        _, c, v = best
        alive.discard(i)
        for cc in r:
            col_index[cc].discard(i)
        for k in col_index.pop(c):
            rk = rows[k]
            f = rk[c] * v
            for cc, vv in r.items():
                nv = rk.get(cc, 0) - f * vv
                if nv:
                    if cc not in rk:
                        col_index[cc].add(k)
                    rk[cc] = nv
                elif cc in rk:
                    del rk[cc]
                    col_index[cc].discard(k)
            heapq.heappush(heap, (len(rk), k))
        order.append((c, v, r))
    return order, [rows[i] for i in sorted(alive) if rows[i]]
