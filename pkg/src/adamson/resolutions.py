"""Resolutions of lattices by permutation or free modules.

Every resolution exposes its chain level sparsely: ``diff(n, i)`` is the
image of basis element ``i`` of ``P_n`` (for ``n = 0`` the augmentation into
the target), ``act(g, n, i)`` the group action on bases, and optionally a
Z-linear contracting homotopy ``contract(n, i)`` into ``P_{n+1}``
(``n = -1`` maps the target into ``P_0``). Terms and differentials are
materialized as :class:`GLattice` / :class:`LatticeMap` only on request.

Kinds:

* ``SimplicialResolution`` on a transitive G-set ``Y``: ``P_n = Z[Y^{n+1}]``
  with alternating face differential. ``Y = G`` gives the bar resolution,
  ``Y = G/H`` the standard relative resolution.
* ``TensorResolution``: ``P_n = Z[Y] (x) I^{(x)n}`` where ``I`` is the
  augmentation ideal of ``Z[Y]``; ``Y = G`` gives the resolution built from
  ``K`` by splicing, ``Y = G/H`` the tensor relative resolution.
* ``FreeResolution``: a generic free resolution of an arbitrary lattice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .groups import FiniteGroup, GSetAction, Subgroup, coset_space, regular_action
from .lattices import (DEFAULT_RANK_CAP, GLattice, LatticeMap, RankCapError,
                       augmentation_ideal_action, tensor_diagonal, trivial_lattice)
from .linalg import Echelon, IntMatrix, Sublattice, axpy, sparse_kernel


class ResolutionError(AssertionError):
    """A resolution axiom failed; ``location`` says where."""

    def __init__(self, message: str, location: tuple = ()):
        super().__init__(f"{message} at {location}" if location else message)
        self.location = location


class RangeError(ValueError):
    """A computation needs degrees beyond the resolution's range."""


def _check_cap(r: int, cap: int | None):
    cap = DEFAULT_RANK_CAP if cap is None else cap
    if r > cap:
        raise RankCapError(f"resolution term of rank {r} exceeds cap {cap}")


class Resolution:
    """Common interface; subclasses fill in the sparse chain-level data."""

    kind = "abstract"
    group: FiniteGroup
    target: GLattice
    maxdeg: int
    # subgroup for which ``contract`` is equivariant, None if no contraction
    splitting_group: Subgroup | None = None
    # differentials are given by a formula valid in every degree
    unbounded = False

    def rank(self, n: int) -> int:
        raise NotImplementedError

    def diff(self, n: int, idx: int) -> dict:
        raise NotImplementedError

    def act(self, g: int, n: int, idx: int) -> dict:
        raise NotImplementedError

    def contract(self, n: int, idx: int) -> dict:
        raise NotImplementedError

    @property
    def has_contraction(self) -> bool:
        return self.splitting_group is not None

    def require(self, n: int):
        if n > self.maxdeg:
            raise RangeError(f"degree {n} exceeds the resolution range {self.maxdeg}")

    # vector-level helpers
    def diff_vec(self, n: int, vec: dict) -> dict:
        out: dict = {}
        for i, c in vec.items():
            axpy(out, self.diff(n, i), c)
        return out

    def act_vec(self, g: int, n: int, vec: dict) -> dict:
        out: dict = {}
        for i, c in vec.items():
            axpy(out, self.act(g, n, i), c)
        return out

    def contract_vec(self, n: int, vec: dict) -> dict:
        out: dict = {}
        for i, c in vec.items():
            axpy(out, self.contract(n, i), c)
        return out

    # materialization
    def term(self, n: int, cap: int | None = None) -> GLattice:
        self.require(n)
        r = self.rank(n)
        _check_cap(r, cap)
        action = [[self.act(g, n, i) for i in range(r)] for g in self.group.elements]
        return GLattice(self.group, r, action, name=f"{self.kind}[{n}]", check=False)

    def differential(self, n: int, cap: int | None = None) -> LatticeMap:
        """``d_n: P_n -> P_{n-1}``; ``n = 0`` gives the augmentation."""
        self.require(n)
        dom = self.term(n, cap)
        cod = self.term(n - 1, cap) if n > 0 else self.target
        cols = [self.diff(n, i) for i in range(dom.rank)]
        return LatticeMap(dom, cod, IntMatrix.from_sparse_columns(cols, cod.rank))

    def augmentation(self) -> LatticeMap:
        return self.differential(0)

    def check(self, upto: int | None = None, method: str = "auto") -> "ResolutionReport":
        return check_resolution(self, upto, method)


# ---------------------------------------------------------------- simplicial


class SimplicialResolution(Resolution):
    """``P_n = Z[Y^{n+1}]``; tuples are encoded base ``|Y|``, first entry most significant."""

    unbounded = True

    def __init__(self, points: GSetAction, maxdeg: int, kind: str = "simplicial",
                 basepoint: int = 0, cap: int | None = None):
        self.points = points
        self.group = points.group
        self.maxdeg = maxdeg
        self.kind = kind
        self.basepoint = basepoint
        self.size = points.size
        self.target = unit_lattice(self.group)
        self.splitting_group = points.stabilizer(basepoint)
        self.cap = cap
        if maxdeg < 0:
            raise ValueError("maxdeg must be non-negative")

    def rank(self, n: int) -> int:
        return self.size ** (n + 1)

    def encode(self, t) -> int:
        m = self.size
        k = 0
        for x in t:
            k = k * m + x
        return k

    def decode(self, idx: int, n: int) -> tuple:
        m = self.size
        out = [0] * (n + 1)
        for i in range(n, -1, -1):
            idx, out[i] = divmod(idx, m)
        return tuple(out)

    def diff(self, n: int, idx: int) -> dict:
        if n == 0:
            return {0: 1}
        t = self.decode(idx, n)
        out: dict = {}
        for i in range(n + 1):
            k = self.encode(t[:i] + t[i + 1:])
            v = out.get(k, 0) + (-1 if i % 2 else 1)
            if v:
                out[k] = v
            else:
                del out[k]
        return out

    def act(self, g: int, n: int, idx: int) -> dict:
        tg = self.points.table[g]
        return {self.encode(tg[x] for x in self.decode(idx, n)): 1}

    def contract(self, n: int, idx: int) -> dict:
        # s(x0..xn) = (y0, x0..xn): prepending the basepoint
        return {self.basepoint * self.size ** (n + 1) + idx: 1}


def bar_resolution(G: FiniteGroup, maxdeg: int) -> SimplicialResolution:
    return SimplicialResolution(regular_action(G), maxdeg, kind="bar")


# ---------------------------------------------------------------- tensor model


class TensorResolution(Resolution):
    """``P_n = Z[Y] (x) I^{(x)n}`` with diagonal action.

    Basis index of ``P_n`` is ``y * R_n + beta`` with ``R_n = (|Y|-1)^n`` and
    ``beta`` the lexicographic index into ``I^{(x)n}``; ``I`` has basis
    ``y - y0`` for ``y != y0`` ordered by point.
    """

    unbounded = True

    def __init__(self, points: GSetAction, maxdeg: int, kind: str = "tensor",
                 basepoint: int = 0, cap: int | None = None):
        self.points = points
        self.group = points.group
        self.maxdeg = maxdeg
        self.kind = kind
        self.basepoint = basepoint
        self.size = points.size
        self.cap = cap
        self.target = unit_lattice(self.group)
        self.ideal = augmentation_ideal(points, basepoint, "K" if kind == "dr" else "I")
        self.others = [y for y in range(self.size) if y != basepoint]
        self.pos = {y: k for k, y in enumerate(self.others)}
        self.splitting_group = points.stabilizer(basepoint)
        if maxdeg < 0:
            raise ValueError("maxdeg must be non-negative")

    def ideal_power(self, n: int) -> GLattice:
        """``I^{(x)n}``, shared between resolutions on the same G-set."""
        return ideal_power(self.points, self.basepoint, n, self.ideal.name, self.cap)

    def width(self, n: int) -> int:
        return (self.size - 1) ** n

    def rank(self, n: int) -> int:
        return self.size * self.width(n)

    def basis_vector(self, y: int) -> dict:
        """``y - y0`` in the basis of ``I``."""
        return {} if y == self.basepoint else {self.pos[y]: 1}

    def diff(self, n: int, idx: int) -> dict:
        if n == 0:
            return {0: 1}
        Rn1 = self.width(n - 1)
        beta = idx % self.width(n)
        xi, rest = divmod(beta, Rn1)
        x = self.others[xi]
        return {x * Rn1 + rest: 1, self.basepoint * Rn1 + rest: -1}

    def act(self, g: int, n: int, idx: int) -> dict:
        Rn = self.width(n)
        y, beta = divmod(idx, Rn)
        gy = self.points.table[g][y]
        col = self.ideal_power(n).action[g][beta] if n else {0: 1}
        return {gy * Rn + gamma: v for gamma, v in col.items()}

    def contract(self, n: int, idx: int) -> dict:
        # y (x) m  ->  y0 (x) (y - y0) (x) m
        if n == -1:
            return {self.basepoint: 1}
        Rn = self.width(n)
        y, beta = divmod(idx, Rn)
        if y == self.basepoint:
            return {}
        return {self.basepoint * Rn * (self.size - 1) + self.pos[y] * Rn + beta: 1}

    # freeness / relative projectivity certificate
    def untwisting(self, n: int, cap: int | None = None) -> "Untwisting":
        """Isomorphism ``Z[Y] (x) N -> Z[G] (x)_S N`` with ``S`` the basepoint stabilizer.

        The induced module has basis ``(y, beta)`` meaning ``r_y (x) e_beta``
        with ``r_y`` the least transporter of the basepoint to ``y``; forward
        is ``y (x) m -> r_y (x) r_y^{-1} m`` and backward
        ``r_y (x) m -> y (x) r_y m``.
        """
        self.require(n)
        G = self.group
        Rn = self.width(n)
        r = self.rank(n)
        _check_cap(r, cap)
        N = self.ideal_power(n)
        tr = self.points.transporters() if self.basepoint == 0 else _transporters(self.points, self.basepoint)
        fwd, bwd = [], []
        for y in range(self.size):
            g = tr[y]
            gi = G.inverse[g]
            for beta in range(Rn):
                fwd.append({y * Rn + k: v for k, v in N.action[gi][beta].items()})
                bwd.append({y * Rn + k: v for k, v in N.action[g][beta].items()})
        # induced action: g (r_y (x) n) = r_{gy} (x) h n with h = r_{gy}^-1 g r_y in S
        induced = []
        for g in G.elements:
            cols = []
            for y in range(self.size):
                gy = self.points.table[g][y]
                h = G.mul(G.inverse[tr[gy]], G.mul(g, tr[y]))
                for beta in range(Rn):
                    cols.append({gy * Rn + k: v for k, v in N.action[h][beta].items()})
            induced.append(cols)
        dom = self.term(n, cap)
        ind = GLattice(G, r, induced, name=f"Ind[{n}]", check=False)
        return Untwisting(LatticeMap(dom, ind, IntMatrix.from_sparse_columns(fwd, r)),
                          LatticeMap(ind, dom, IntMatrix.from_sparse_columns(bwd, r)))


@lru_cache(maxsize=None)
def augmentation_ideal(points: GSetAction, basepoint: int = 0, name: str = "I") -> GLattice:
    """Augmentation ideal of ``Z[Y]`` with basis ``y - y0``; one object per G-set."""
    return GLattice(points.group, points.size - 1, augmentation_ideal_action(points, basepoint),
                    name=name, check=False)


@lru_cache(maxsize=None)
def unit_lattice(G: FiniteGroup) -> GLattice:
    return trivial_lattice(G)


@lru_cache(maxsize=64)
def ideal_power(points: GSetAction, basepoint: int, n: int, name: str = "I", cap: int | None = None) -> GLattice:
    if n == 0:
        return unit_lattice(points.group)
    base = augmentation_ideal(points, basepoint, name)
    if n == 1:
        return base
    out = tensor_diagonal(ideal_power(points, basepoint, n - 1, name, cap), base, cap=cap)
    out.name = f"{name}^{n}"
    return out


def _transporters(X: GSetAction, base: int) -> list[int]:
    out = [None] * X.size
    for g in X.group.elements:
        x = X.table[g][base]
        if out[x] is None:
            out[x] = g
    if any(v is None for v in out):
        raise ValueError("action is not transitive")
    return out


@dataclass(frozen=True)
class Untwisting:
    forward: LatticeMap
    backward: LatticeMap

    def verify(self) -> bool:
        n = self.forward.domain.rank
        ident = IntMatrix.identity(n)
        return (self.forward.matrix @ self.backward.matrix == ident
                and self.backward.matrix @ self.forward.matrix == ident
                and self.forward.is_equivariant() and self.backward.is_equivariant())


def dr_resolution(G: FiniteGroup, maxdeg: int, cap: int | None = None) -> TensorResolution:
    return TensorResolution(regular_action(G), maxdeg, kind="dr", cap=cap)


# ---------------------------------------------------------------- generic free


class FreeResolution(Resolution):
    """Free resolution of a lattice ``M`` by ``Z[G]^{k_n}``.

    Basis index of ``P_n`` is ``j * |G| + g`` for ``g . gen_j``; ``images[n][j]``
    is ``d(gen_j)`` in ``P_{n-1}`` coordinates (``M`` coordinates for n = 0).
    Generators of each kernel are picked greedily from its echelon basis,
    skipping vectors already in the span of the orbits of earlier picks.
    """

    kind = "free"

    def __init__(self, module: GLattice, maxdeg: int, cap: int | None = None,
                 images: list[list[dict]] | None = None):
        self.group = module.group
        self.target = module
        self.maxdeg = maxdeg
        self.cap = cap
        self.order = self.group.order
        if images is not None:
            self.images = [list(map(dict, level)) for level in images]
        else:
            self.images = []
            self._build()

    def _greedy(self, candidates, orbit) -> list[dict]:
        ech = Echelon()
        chosen = []
        for v in candidates:
            if not ech.contains(v):
                chosen.append(v)
                for w in orbit(v):
                    if w:
                        ech.add(w)
        return chosen

    def _build(self):
        G, M = self.group, self.target
        gens0 = self._greedy(({t: 1} for t in range(M.rank)),
                             lambda v: [M.act(g, v) for g in G.elements])
        self.images.append(gens0)
        for n in range(1, self.maxdeg + 1):
            r_prev = self.rank(n - 1)
            _check_cap(r_prev, self.cap)
            cols = [self.diff(n - 1, i) for i in range(r_prev)]
            ker = Sublattice(sparse_kernel(cols), r_prev).basis
            gens = self._greedy(ker, lambda v: [self.act_vec(g, n - 1, v) for g in G.elements])
            self.images.append(gens)

    def generators(self, n: int) -> int:
        return len(self.images[n])

    def rank(self, n: int) -> int:
        return len(self.images[n]) * self.order

    def _translate(self, g: int, n: int, vec: dict) -> dict:
        """``g . vec`` for ``vec`` in ``P_n`` coordinates."""
        N, t = self.order, self.group.table[g]
        return {(k // N) * N + t[k % N]: v for k, v in vec.items()}

    def diff(self, n: int, idx: int) -> dict:
        j, g = divmod(idx, self.order)
        v = self.images[n][j]
        if n == 0:
            return self.target.act(g, v)
        return self._translate(g, n - 1, v)

    def act(self, g: int, n: int, idx: int) -> dict:
        j, h = divmod(idx, self.order)
        return {j * self.order + self.group.table[g][h]: 1}

    def contract(self, n: int, idx: int) -> dict:
        raise NotImplementedError("generic free resolutions carry no contraction")

    def to_json(self) -> dict:
        return {"degrees": [[sorted(v.items()) for v in level] for level in self.images]}


# optional on-disk store consulted by free_resolution; see adamson.cache
_STORE = None


def set_resolution_store(store):
    global _STORE
    prev, _STORE = _STORE, store
    return prev


def free_resolution(M: GLattice, maxdeg: int, cap: int | None = None) -> FreeResolution:
    if _STORE is not None:
        images = _STORE.load(M, "free", maxdeg)
        if images is not None:
            return FreeResolution(M, maxdeg, cap=cap, images=images)
    res = FreeResolution(M, maxdeg, cap=cap)
    if _STORE is not None:
        _STORE.save(M, "free", maxdeg, res.images)
    return res


def standard_relative_resolution(G: FiniteGroup, H: Subgroup, maxdeg: int,
                                 cap: int | None = None) -> SimplicialResolution:
    X = coset_space(G, H)
    return SimplicialResolution(X.action, maxdeg, kind="standard_relative", cap=cap)


def tensor_relative_resolution(G: FiniteGroup, H: Subgroup, maxdeg: int,
                               cap: int | None = None) -> TensorResolution:
    X = coset_space(G, H)
    return TensorResolution(X.action, maxdeg, kind="tensor_relative", cap=cap)


# ---------------------------------------------------------------- checks


@dataclass
class ResolutionReport:
    kind: str
    degrees: int
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def check_resolution(res: Resolution, upto: int | None = None, method: str = "auto") -> ResolutionReport:
    """Verify equivariance, ``d o d = 0`` and exactness through degree ``upto``.

    Exactness uses the contracting homotopy (``d h + h d = id`` checked on
    every basis element) when there is one, otherwise kernels and images are
    compared with exact linear algebra. Raises :class:`ResolutionError`.
    """
    upto = res.maxdeg if upto is None else upto
    res.require(upto)
    G = res.group
    gens = G.generators
    report = ResolutionReport(res.kind, upto)
    for n in range(1, upto + 1):
        for i in range(res.rank(n)):
            if res.diff_vec(n - 1, res.diff(n, i)):
                raise ResolutionError("d o d != 0", (res.kind, n, i))
    report.checks["d_squared_zero"] = True
    for n in range(upto + 1):
        for i in range(res.rank(n)):
            d = res.diff(n, i)
            for s in gens:
                lhs = res.diff_vec(n, res.act(s, n, i))
                rhs = res.target.act(s, d) if n == 0 else res.act_vec(s, n - 1, d)
                if lhs != rhs:
                    raise ResolutionError("differential is not equivariant", (res.kind, n, i, s))
    report.checks["equivariance"] = True
    use_contraction = res.has_contraction and method in ("auto", "contraction")
    if use_contraction:
        _check_contraction(res, upto)
        report.checks["exact_contraction"] = True
    if method == "linalg" or not use_contraction:
        _check_exact_linalg(res, upto)
        report.checks["exact_linalg"] = True
    return report


def _check_contraction(res: Resolution, upto: int):
    S = res.splitting_group
    # target level: eps h_{-1} = id
    for t in range(res.target.rank):
        if res.diff_vec(0, res.contract(-1, t)) != {t: 1}:
            raise ResolutionError("eps o h != id", (res.kind, -1, t))
        for s in S.generators:
            if res.contract_vec(-1, res.target.act(s, {t: 1})) != res.act_vec(s, 0, res.contract(-1, t)):
                raise ResolutionError("contraction is not equivariant", (res.kind, -1, t, s))
    for n in range(upto + 1):
        for i in range(res.rank(n)):
            h = res.contract(n, i)
            total = res.diff_vec(n + 1, h)
            d = res.diff(n, i)
            if n == 0:
                axpy(total, res.contract_vec(-1, d), 1)
            else:
                axpy(total, res.contract_vec(n - 1, d), 1)
            if total != {i: 1}:
                raise ResolutionError("d h + h d != id", (res.kind, n, i))
            for s in S.generators:
                if res.contract_vec(n, res.act(s, n, i)) != res.act_vec(s, n + 1, h):
                    raise ResolutionError("contraction is not equivariant", (res.kind, n, i, s))


def _check_exact_linalg(res: Resolution, upto: int):
    # surjectivity of the augmentation
    aug = Echelon()
    for i in range(res.rank(0)):
        aug.add(res.diff(0, i))
    for t in range(res.target.rank):
        if not aug.contains({t: 1}):
            raise ResolutionError("augmentation is not surjective", (res.kind, 0, t))
    for n in range(upto + 1):
        cols = [res.diff(n, i) for i in range(res.rank(n))]
        ker = sparse_kernel(cols)
        if n + 1 <= res.maxdeg or res.unbounded:
            img = Echelon()
            for i in range(res.rank(n + 1)):
                img.add(res.diff(n + 1, i))
        elif ker:
            raise RangeError(f"exactness at degree {n} needs degree {n + 1}")
        for k, v in enumerate(ker):
            if not img.contains(v):
                raise ResolutionError("homology is nonzero", (res.kind, n, k))


# ---------------------------------------------------------------- chain maps


class ChainMap:
    """Degree-wise sparse map between resolutions, ``maps(n, i)`` on basis elements."""

    def __init__(self, source: Resolution, dest: Resolution, fn, name: str = ""):
        if source.group is not dest.group and source.group != dest.group:
            raise ValueError("chain map between resolutions of different groups")
        self.source = source
        self.dest = dest
        self._fn = fn
        self.name = name
        self._cache: dict = {}

    @property
    def maxdeg(self) -> int:
        return min(self.source.maxdeg, self.dest.maxdeg)

    def __call__(self, n: int, idx: int) -> dict:
        key = (n, idx)
        if key not in self._cache:
            self._cache[key] = self._fn(n, idx)
        return self._cache[key]

    def apply(self, n: int, vec: dict) -> dict:
        out: dict = {}
        for i, c in vec.items():
            axpy(out, self(n, i), c)
        return out

    def matrix(self, n: int) -> IntMatrix:
        cols = [self(n, i) for i in range(self.source.rank(n))]
        return IntMatrix.from_sparse_columns(cols, self.dest.rank(n))

    def verify(self, upto: int | None = None, equivariant_under: Subgroup | None = None) -> bool:
        """Exact check of augmentation, commuting squares and equivariance."""
        upto = self.maxdeg if upto is None else upto
        G = self.source.group
        gens = (equivariant_under.generators if equivariant_under is not None else G.generators)
        for n in range(upto + 1):
            for i in range(self.source.rank(n)):
                img = self(n, i)
                if n == 0:
                    if self.dest.diff_vec(0, img) != self.source.diff(0, i):
                        raise ResolutionError("chain map does not commute with augmentations", (self.name, 0, i))
                elif self.dest.diff_vec(n, img) != self.apply(n - 1, self.source.diff(n, i)):
                    raise ResolutionError("chain map does not commute with differentials", (self.name, n, i))
                for s in gens:
                    if self.apply(n, self.source.act(s, n, i)) != self.dest.act_vec(s, n, img):
                        raise ResolutionError("chain map is not equivariant", (self.name, n, i, s))
        return True


def comparison_map_phi(simp: SimplicialResolution, tens: TensorResolution) -> ChainMap:
    """``(x0..xp) -> x0 (x) (x1 - x0) (x) ... (x) (xp - x_{p-1})``.

    Works for the bar/DR pair and for the standard/tensor relative pair
    (same G-set and basepoint).
    """
    if not isinstance(simp, SimplicialResolution) or not isinstance(tens, TensorResolution):
        raise TypeError("expected a simplicial and a tensor resolution")
    if simp.points != tens.points or simp.basepoint != tens.basepoint:
        raise ValueError("resolutions are built on different G-sets")
    if simp.maxdeg != tens.maxdeg:
        raise RangeError(f"range mismatch: {simp.maxdeg} vs {tens.maxdeg}")
    m = tens.size - 1

    def fn(n, idx):
        t = simp.decode(idx, n)
        vec = {0: 1}
        for a, b in zip(t, t[1:]):
            diffv = tens.basis_vector(b)
            axpy(diffv, tens.basis_vector(a), -1)
            nxt: dict = {}
            for k, v in vec.items():
                for j, w in diffv.items():
                    nxt[k * m + j] = nxt.get(k * m + j, 0) + v * w
            vec = {k: v for k, v in nxt.items() if v}
        Rn = tens.width(n)
        return {t[0] * Rn + k: v for k, v in vec.items()}

    return ChainMap(simp, tens, fn, name="phi")


def comparison_map_psi(tens: TensorResolution, simp: SimplicialResolution) -> ChainMap:
    """Chain map back from the tensor model, lifted through the contraction.

    On ``y0 (x) m`` it is ``s(psi(d(y0 (x) m)))`` with ``s`` the basepoint
    prepending homotopy, which is equivariant for the basepoint stabilizer;
    elsewhere it is extended equivariantly via ``y (x) m = r_y (y0 (x) r_y^-1 m)``.
    """
    if simp.points != tens.points or simp.basepoint != tens.basepoint:
        raise ValueError("resolutions are built on different G-sets")
    if simp.maxdeg != tens.maxdeg:
        raise RangeError(f"range mismatch: {simp.maxdeg} vs {tens.maxdeg}")
    G = tens.group
    tr = _transporters(tens.points, tens.basepoint)
    y0 = tens.basepoint
    base_cache: dict = {}

    def on_base(n, beta):
        key = (n, beta)
        if key not in base_cache:
            if n == 0:
                base_cache[key] = {simp.encode((y0,)): 1}
            else:
                lower = chain.apply(n - 1, tens.diff(n, y0 * tens.width(n) + beta))
                base_cache[key] = simp.contract_vec(n - 1, lower)
        return base_cache[key]

    def fn(n, idx):
        Rn = tens.width(n)
        y, beta = divmod(idx, Rn)
        g = tr[y]
        if n == 0:
            return {simp.encode((y,)): 1}
        pre = tens.ideal_power(n).action[G.inverse[g]][beta]
        out: dict = {}
        for b, c in pre.items():
            axpy(out, on_base(n, b), c)
        return simp.act_vec(g, n, out)

    chain = ChainMap(tens, simp, fn, name="psi")
    return chain
