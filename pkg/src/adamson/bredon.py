"""Bredon cohomology over the orbit category of the family generated by H.

Cochains are families ``alpha_K`` of maps on ``((G/H)^K)^{n+1}`` with values
in ``M(G/K)``, cut out of the product of all such maps by the naturality
constraints of every orbit-category morphism.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from itertools import product

from .cochains import CochainComplex, CohomologyClass, cochain_model
from .groups import FamilyOfSubgroups, FiniteGroup, GSetAction, Subgroup, coset_space, full_family_closure
from .lattices import GLattice, fixed_sublattice
from .linalg import AbelianInvariants, ConstraintKernel, IntMatrix
from .resolutions import DEFAULT_RANK_CAP, RankCapError, SimplicialResolution, comparison_map_phi

__all__ = [
    "Morphism", "OrbitCategory", "orbit_category", "BredonModule", "coefficient_system",
    "BredonComplex", "bredon_cochain_complex", "BredonClass", "phi_transfer", "psi_transfer",
    "bredon_canonical_class", "principal_evaluation", "rho_invariant_estimate", "NaturalityError",
]


class NaturalityError(ValueError):
    pass


# ---------------------------------------------------------------- orbit category


@dataclass(frozen=True)
class Morphism:
    """``G/K -> G/L``, ``xK -> x a L``; ``a`` is the least element of ``aL``."""

    source: int
    target: int
    element: int


class OrbitCategory:
    def __init__(self, G: FiniteGroup, family: FamilyOfSubgroups, max_objects: int = 64):
        if len(family) > max_objects:
            raise ValueError(f"family has {len(family)} members, above the cap {max_objects}")
        self.group = G
        self.family = family
        self.objects = list(family.members)
        self.morphisms: list[Morphism] = []
        self.hom: dict[tuple[int, int], list[int]] = {}
        self._index: dict[tuple[int, int, int], int] = {}
        for i, K in enumerate(self.objects):
            for j, L in enumerate(self.objects):
                found = []
                Lset = set(L.elements)
                for g in G.elements:
                    gi = G.inverse[g]
                    if all(G.mul(G.mul(gi, k), g) in Lset for k in K.generators):
                        a = self._normal(g, j)
                        if (i, j, a) not in self._index:
                            self._index[(i, j, a)] = len(self.morphisms)
                            found.append(len(self.morphisms))
                            self.morphisms.append(Morphism(i, j, a))
                self.hom[(i, j)] = found
        self._compose: dict = {}

    def _normal(self, g: int, j: int) -> int:
        G = self.group
        return min(G.mul(g, l) for l in self.objects[j].elements)

    @property
    def principal(self) -> int:
        return 0  # the trivial subgroup sorts first

    def identity(self, i: int) -> int:
        return self._index[(i, i, self._normal(0, i))]

    def compose(self, h: int, f: int) -> int:
        """Index of ``h o f`` (``f`` first)."""
        key = (h, f)
        if key not in self._compose:
            mf, mh = self.morphisms[f], self.morphisms[h]
            if mf.target != mh.source:
                raise ValueError("morphisms are not composable")
            a = self._normal(self.group.mul(mf.element, mh.element), mh.target)
            self._compose[key] = self._index[(mf.source, mh.target, a)]
        return self._compose[key]

    def generating_morphisms(self) -> list[int]:
        """A set of non-identity morphisms whose composites give every non-identity morphism."""
        idents = {self.identity(i) for i in range(len(self.objects))}
        reached = set(idents)
        gens = []
        for m in range(len(self.morphisms)):
            if m in reached:
                continue
            gens.append(m)
            reached.add(m)
            frontier = list(reached)
            while frontier:
                nxt = []
                for x in frontier:
                    for y in list(reached):
                        for h, f in ((x, y), (y, x)):
                            if self.morphisms[f].target == self.morphisms[h].source:
                                c = self.compose(h, f)
                                if c not in reached:
                                    reached.add(c)
                                    nxt.append(c)
                frontier = nxt
        return gens

    def check(self) -> bool:
        n = len(self.morphisms)
        for i in range(len(self.objects)):
            e = self.identity(i)
            for f in range(n):
                if self.morphisms[f].target == i and self.compose(e, f) != f:
                    return False
                if self.morphisms[f].source == i and self.compose(f, e) != f:
                    return False
        for f in range(n):
            for g in range(n):
                if self.morphisms[f].target != self.morphisms[g].source:
                    continue
                gf = self.compose(g, f)
                for h in range(n):
                    if self.morphisms[g].target == self.morphisms[h].source:
                        if self.compose(h, gf) != self.compose(self.compose(h, g), f):
                            return False
        return True


def orbit_category(G: FiniteGroup, H: Subgroup) -> OrbitCategory:
    return OrbitCategory(G, full_family_closure(G, H))


# ---------------------------------------------------------------- coefficient systems


@dataclass
class BredonModule:
    """Contravariant functor: ``matrices[f]`` maps ``M(target) -> M(source)``."""

    category: OrbitCategory
    ranks: list[int]
    matrices: dict
    name: str = ""
    lattice: GLattice | None = None
    subs: list | None = None  # echelon bases of M^K when built from a lattice

    def matrix(self, f: int) -> IntMatrix:
        return self.matrices[f]

    def check(self) -> bool:
        C = self.category
        for i in range(len(C.objects)):
            if self.matrices[C.identity(i)] != IntMatrix.identity(self.ranks[i]):
                return False
        for f, mf in enumerate(C.morphisms):
            for h in range(len(C.morphisms)):
                if C.morphisms[h].source != mf.target:
                    continue
                if self.matrices[C.compose(h, f)] != self.matrices[f] @ self.matrices[h]:
                    return False
        return True

    def principal_lattice(self) -> GLattice:
        """``M(G/e)`` with ``g`` acting by the matrix of the automorphism ``x -> x g``."""
        if self.lattice is not None:
            return self.lattice
        C = self.category
        G = C.group
        p = C.principal
        mats = []
        for g in G.elements:
            f = C._index[(p, p, g)]
            mats.append(self.matrices[f])
        return GLattice.from_matrices(G, mats, name=self.name or "M(G/e)")


def coefficient_system(M: GLattice, category: OrbitCategory) -> BredonModule:
    """``K -> M^K``; a morphism with element ``a`` acts by ``a`` from ``M^L`` to ``M^K``."""
    subs = [fixed_sublattice(M, K) for K in category.objects]
    mats = {}
    for f, m in enumerate(category.morphisms):
        src, dst = subs[m.source], subs[m.target]
        cols = [src.coords(M.act(m.element, b)) for b in dst.basis]
        mats[f] = IntMatrix.from_sparse_columns(cols, src.rank)
    return BredonModule(category, [s.rank for s in subs], mats, name=f"_{M.name}", lattice=M, subs=subs)


# ---------------------------------------------------------------- cochain complex


class _Level:
    __slots__ = ("offsets", "dim", "kernel")


class BredonComplex:
    """Bredon cochains of the join model with coefficients in ``module``.

    Degrees ``0..upto`` are solved as kernels of the naturality system;
    degree ``upto + 1`` is only used as the ambient target of ``delta``.
    """

    def __init__(self, points: GSetAction, module: BredonModule, upto: int, cap: int | None = None):
        C = module.category
        self.points = points
        self.module = module
        self.category = C
        self.upto = upto
        self.size = points.size
        self.cap = DEFAULT_RANK_CAP * 16 if cap is None else cap
        self.fixed = []
        for K in C.objects:
            self.fixed.append([y for y in range(points.size) if all(points.table[k][y] == y for k in K.generators)])
        self._pos = [{y: i for i, y in enumerate(fx)} for fx in self.fixed]
        self._levels: dict = {}
        self._gens = C.generating_morphisms()
        self.complex = CochainComplex(self.dim, self.delta, name=f"bredon:{module.name}")

    # indexing -----------------------------------------------------------
    def level(self, n: int) -> _Level:
        if n in self._levels:
            return self._levels[n]
        lvl = _Level()
        offs, total = [], 0
        for i, fx in enumerate(self.fixed):
            offs.append(total)
            total += len(fx) ** (n + 1) * self.module.ranks[i]
        if total > self.cap:
            raise RankCapError(f"Bredon cochains in degree {n} have rank {total}, above the cap {self.cap}")
        lvl.offsets, lvl.dim = offs, total
        lvl.kernel = self._solve(n, lvl) if n <= self.upto else None
        self._levels[n] = lvl
        return lvl

    def local(self, i: int, t) -> int:
        pos, m = self._pos[i], len(self.fixed[i])
        k = 0
        for y in t:
            k = k * m + pos[y]
        return k

    def var(self, n: int, i: int, t, c: int, lvl=None) -> int:
        lvl = lvl or self.level(n)
        return lvl.offsets[i] + self.local(i, t) * self.module.ranks[i] + c

    def tuples(self, i: int, n: int):
        return product(self.fixed[i], repeat=n + 1)

    def _constraint_rows(self, n: int, lvl: _Level, morphisms) -> list[dict]:
        C, mod, table = self.category, self.module, self.points.table
        rows = []
        for f in morphisms:
            m = C.morphisms[f]
            i, j = m.source, m.target
            A = mod.matrices[f]
            ta = table[m.element]
            for x in self.tuples(j, n):
                ax = tuple(ta[y] for y in x)
                base_k = lvl.offsets[i] + self.local(i, ax) * mod.ranks[i]
                base_l = lvl.offsets[j] + self.local(j, x) * mod.ranks[j]
                for c in range(mod.ranks[i]):
                    row = {base_k + c: 1}
                    for d in range(mod.ranks[j]):
                        v = A[c, d]
                        if v:
                            row[base_l + d] = row.get(base_l + d, 0) - v
                    row = {k: v for k, v in row.items() if v}
                    if row:
                        rows.append(row)
        return rows

    def _solve(self, n: int, lvl: _Level) -> ConstraintKernel:
        return ConstraintKernel(self._constraint_rows(n, lvl, self._gens), lvl.dim)

    def naturality_defects(self, n: int, vec: dict) -> list[tuple]:
        """Exhaustive check over every morphism; returns ``(morphism, tuple)`` failures."""
        lvl = self.level(n)
        C, mod, table = self.category, self.module, self.points.table
        bad = []
        for f, m in enumerate(C.morphisms):
            A = mod.matrices[f]
            ta = table[m.element]
            for x in self.tuples(m.target, n):
                ax = tuple(ta[y] for y in x)
                lhs = self.value(n, vec, m.source, ax, lvl)
                rhs = _apply(A, self.value(n, vec, m.target, x, lvl))
                if lhs != rhs:
                    bad.append((m, x))
        return bad

    def value(self, n: int, vec: dict, i: int, t, lvl=None) -> dict:
        """``alpha_K(t)`` in coordinates of ``M(G/K)`` from an ambient vector."""
        lvl = lvl or self.level(n)
        base = lvl.offsets[i] + self.local(i, t) * self.module.ranks[i]
        out = {}
        for c in range(self.module.ranks[i]):
            v = vec.get(base + c, 0)
            if v:
                out[c] = v
        return out

    # complex ------------------------------------------------------------
    def dim(self, n: int) -> int:
        lvl = self.level(n)
        return lvl.kernel.rank if lvl.kernel is not None else lvl.dim

    def to_ambient(self, n: int, coords: dict) -> dict:
        return self.level(n).kernel.element(coords)

    def from_ambient(self, n: int, vec: dict) -> dict:
        k = self.level(n).kernel
        if not k.satisfies(vec):
            raise NaturalityError(f"cochain in degree {n} is not natural")
        return k.coords(vec)

    def ambient_delta(self, n: int, vec: dict) -> dict:
        """Face-sum differential at every object, via cofaces of the support."""
        lvl, up = self.level(n), self.level(n + 1)
        mod = self.module
        out: dict = {}
        for i, fx in enumerate(self.fixed):
            r = mod.ranks[i]
            if not r:
                continue
            m = len(fx)
            lo = lvl.offsets[i]
            hi = lo + m ** (n + 1) * r
            for key, v in vec.items():
                if not lo <= key < hi:
                    continue
                loc, c = divmod(key - lo, r)
                t = []
                for _ in range(n + 1):
                    loc, q = divmod(loc, m)
                    t.append(fx[q])
                t.reverse()
                for pos in range(n + 2):
                    sign = -v if pos % 2 else v
                    for y in fx:
                        s = t[:pos] + [y] + t[pos:]
                        k = up.offsets[i] + self.local(i, s) * r + c
                        nv = out.get(k, 0) + sign
                        if nv:
                            out[k] = nv
                        else:
                            del out[k]
        return out

    def delta(self, n: int) -> list[dict]:
        lvl = self.level(n)
        cols = []
        top = n + 1 > self.upto
        nxt = self.level(n + 1)
        for b in lvl.kernel.basis:
            d = self.ambient_delta(n, b)
            # coboundaries of natural cochains are natural
            cols.append(d if top else nxt.kernel.coords(d, check=False))
        return cols

    def cohomology(self, n: int) -> AbelianInvariants:
        if n > self.upto:
            raise ValueError(f"complex was built through degree {self.upto}")
        return self.complex.cohomology(n)


def bredon_cochain_complex(G: FiniteGroup, H: Subgroup, M, upto: int, cap: int | None = None) -> BredonComplex:
    """Bredon complex for ``(G, H)``; ``M`` is a G-lattice or a BredonModule."""
    if isinstance(M, BredonModule):
        module = M
    else:
        module = coefficient_system(M, orbit_category(G, H))
    return BredonComplex(coset_space(G, H).action, module, upto, cap=cap)


# ---------------------------------------------------------------- classes and transfer


@dataclass
class BredonClass:
    complex: BredonComplex
    degree: int
    coords: dict = field(default_factory=dict)

    def is_zero(self) -> bool:
        return self.complex.complex.is_coboundary(self.degree, self.coords)


def _apply(A: IntMatrix, v: dict) -> dict:
    out: dict = {}
    for j, c in v.items():
        for i in range(A.rows):
            x = A[i, j]
            if x:
                out[i] = out.get(i, 0) + c * x
    return {k: x for k, x in out.items() if x}


def _check_std(bc: BredonComplex, std: SimplicialResolution):
    if std.points != bc.points:
        raise ValueError("relative resolution and Bredon complex use different coset sets")
    if bc.module.subs is None:
        raise TypeError("transfer needs a coefficient system built from a lattice")


def _phi_index(bc: BredonComplex, model, n: int) -> dict:
    """For each orbit representative of the Adamson model, the fixed tuples in its orbit.

    Entries are ``(base, r, g)``: ambient offset of the value block, rank of
    the block and the element carrying the representative to the tuple.
    """
    cache = bc.__dict__.setdefault("_phi_index", {})
    key = (id(model), n)
    if key not in cache:
        lvl = bc.level(n)
        index: dict = {}
        for i, sub in enumerate(bc.module.subs):
            r = bc.module.ranks[i]
            if not r:
                continue
            for t in bc.tuples(i, n):
                rep, g = model.locate(n, t)
                index.setdefault(rep, []).append((i, lvl.offsets[i] + bc.local(i, t) * r, g))
        cache[key] = (model, index)
    return cache[key][1]


def phi_transfer(bc: BredonComplex, std: SimplicialResolution, n: int, vec: dict) -> dict:
    """Adamson cochain (standard model coordinates) -> Bredon cochain coordinates.

    ``alpha_K`` is the restriction of ``f`` to ``K``-fixed tuples, written in
    the basis of ``M^K``. Only the orbits meeting the support of ``f`` are
    visited.
    """
    _check_std(bc, std)
    model = cochain_model(std, bc.module.lattice)
    index = _phi_index(bc, model, n)
    offsets = model.level(n).offsets
    reps = sorted({bisect_right(offsets, k) - 1 for k in vec})
    M = model.coeffs
    amb: dict = {}
    for rep in reps:
        base_val = model.value_at_rep(n, vec, rep)
        if not base_val:
            continue
        for i, base, g in index.get(rep, ()):
            val = M.act(g, base_val)
            for c, x in bc.module.subs[i].coords(val).items():
                amb[base + c] = x
    return bc.from_ambient(n, amb)


def psi_transfer(bc: BredonComplex, std: SimplicialResolution, n: int, coords: dict | None = None,
                 ambient: dict | None = None) -> dict:
    """Bredon cochain -> Adamson cochain: read off the principal component."""
    _check_std(bc, std)
    if ambient is None:
        ambient = bc.to_ambient(n, coords or {})
    elif not bc.level(n).kernel.satisfies(ambient):
        raise NaturalityError(f"input to psi is not natural in degree {n}")
    model = cochain_model(std, bc.module.lattice)
    p = bc.category.principal
    sub = bc.module.subs[p]

    def fn(idx):
        return sub.element(bc.value(n, ambient, p, std.decode(idx, n)))

    return model.from_function(n, fn)


def bredon_canonical_class(G: FiniteGroup, H: Subgroup, upto: int = 1):
    """``u``: the transfer of the canonical relative class, with coefficients underline(I)."""
    from .adamson import canonical_class, relative_resolution
    phi = canonical_class(G, H, max(upto + 1, 2))
    tens = phi.resolution
    std = relative_resolution(G, H, tens.maxdeg, "standard")
    phi_std = phi.pullback(comparison_map_phi(std, tens), cochain_model(std, phi.coeffs))
    bc = bredon_cochain_complex(G, H, phi.coeffs, max(upto, 1))
    return BredonClass(bc, 1, phi_transfer(bc, std, 1, phi_std.coords))


def principal_evaluation(c: BredonClass, bar: SimplicialResolution | None = None) -> CohomologyClass:
    """``rho^n``: evaluate at ``G/e`` and read off as a cochain on the bar resolution."""
    from .adamson import group_resolution
    bc, n = c.complex, c.degree
    G = bc.category.group
    if bar is None:
        bar = group_resolution(G, max(n + 1, 1), "bar")
    M = bc.module.principal_lattice()
    model = cochain_model(bar, M)
    amb = bc.to_ambient(n, c.coords)
    p = bc.category.principal
    to_coset = [row[0] for row in bc.points.table]
    sub = bc.module.subs[p] if bc.module.subs is not None else None

    def fn(idx):
        t = tuple(to_coset[g] for g in bar.decode(idx, n))
        v = bc.value(n, amb, p, t)
        return sub.element(v) if sub is not None else v

    return CohomologyClass(model, n, model.from_function(n, fn))


def rho_invariant_estimate(G: FiniteGroup, H: Subgroup, cap: int, samples=None) -> int:
    """Largest ``n <= cap`` with ``rho^n`` nonzero on one of the sample systems.

    Default samples are underline(I^{(x)m}) for ``m <= cap`` and the constant
    system. Only a lower estimate: the invariant ranges over all systems.
    """
    from .adamson import group_resolution
    from .resolutions import ideal_power
    if cap < 0:
        raise ValueError("cap must be non-negative")
    X = coset_space(G, H).action
    if samples is None:
        samples = [ideal_power(X, 0, m) for m in range(cap + 1)]
    cat = orbit_category(G, H)
    modules = [s if isinstance(s, BredonModule) else coefficient_system(s, cat) for s in samples]
    bar = group_resolution(G, cap + 1, "bar")
    best = 0
    for mod in modules:
        if not any(mod.ranks):
            continue
        bc = BredonComplex(X, mod, cap)
        for n in range(cap, best, -1):
            for _, coords in bc.complex.generators(n):
                if not principal_evaluation(BredonClass(bc, n, coords), bar).is_zero():
                    best = n
                    break
            if best == n:
                break
    return best
