"""First two pages of the spectral sequence from relative to ordinary cohomology.

``E_1^{p,q} = Ext^q_G(Z[G/H] (x) I^{(x)p}, M)``, computed through a free
resolution of each module; ``d_1`` is induced by the relative differential,
lifted to a chain map between the free resolutions.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .cochains import CochainModel, cochain_model
from .groups import FiniteGroup, Subgroup, coset_space
from .lattices import GLattice, hom_diagonal, permutation_lattice, restrict_to_subgroup, tensor_diagonal
from .linalg import AbelianInvariants, ImageSolver, IntMatrix, Sublattice, cokernel_invariants, sparse_kernel
from .resolutions import (ChainMap, FreeResolution, ResolutionError, dr_resolution, free_resolution,
                          tensor_relative_resolution)

__all__ = ["lift_module_map", "SpectralPage", "e1_page", "e2_page", "ShapiroReport", "shapiro_check",
           "WindowError"]


class WindowError(ValueError):
    pass


def lift_module_map(A: FreeResolution, B: FreeResolution, D) -> ChainMap:
    """Chain map ``A -> B`` over ``D: A.target -> B.target``.

    ``D(vec)`` maps target coordinates of ``A`` to those of ``B``. Each
    generator is lifted by an exact solve and the map is extended by
    translation.
    """
    if A.group != B.group:
        raise ValueError("resolutions over different groups")
    top = min(A.maxdeg, B.maxdeg)
    lifts: list[list[dict]] = []
    for n in range(top + 1):
        solver = ImageSolver([B.diff(n, i) for i in range(B.rank(n))])
        level = []
        for j, img in enumerate(A.images[n]):
            rhs = D(img) if n == 0 else _apply(B, lifts[n - 1], n - 1, img)
            x = solver.solve(rhs)
            if x is None:
                raise ResolutionError("module map does not lift", (n, j))
            level.append(x)
        lifts.append(level)

    def fn(n, idx):
        j, g = divmod(idx, A.order)
        return B._translate(g, n, lifts[n][j])

    chain = ChainMap(A, B, fn, name="lift")
    chain.lifts = lifts
    return chain


def _apply(B: FreeResolution, level: list[dict], n: int, vec: dict) -> dict:
    out: dict = {}
    N = B.order
    for idx, c in vec.items():
        j, g = divmod(idx, N)
        for k, v in B._translate(g, n, level[j]).items():
            nv = out.get(k, 0) + c * v
            if nv:
                out[k] = nv
            else:
                del out[k]
    return out


@dataclass
class SpectralPage:
    page: int
    window: tuple[int, int]
    entries: dict
    differentials: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    models: list = field(default_factory=list, repr=False)
    chains: list = field(default_factory=list, repr=False)

    def row(self, q: int) -> list[AbelianInvariants]:
        P = max(p for p, _ in self.entries)
        return [self.entries[(p, q)] for p in range(P + 1) if (p, q) in self.entries]

    def to_json(self) -> dict:
        return {
            "page": self.page,
            "window": list(self.window),
            "entries": [{"p": p, "q": q, **self.entries[(p, q)].to_json()} for p, q in sorted(self.entries)],
            "checks": dict(sorted(self.checks.items())),
        }


def e1_page(G: FiniteGroup, H: Subgroup, M: GLattice, P: int, Q: int, cap: int | None = None) -> SpectralPage:
    if P < 0 or Q < 0:
        raise WindowError("window must be non-negative")
    rel = tensor_relative_resolution(G, H, P + 1, cap=cap)
    models: list[CochainModel] = []
    entries = {}
    for p in range(P + 1):
        F = free_resolution(rel.term(p, cap), Q + 1, cap=cap)
        m = cochain_model(F, M)
        models.append(m)
        for q in range(Q + 1):
            entries[(p, q)] = m.cohomology(q)
    chains = []
    for p in range(P):
        A, B = models[p + 1].res, models[p].res

        def D(vec, p=p):
            return rel.diff_vec(p + 1, vec)

        chains.append(lift_module_map(A, B, D))
    page = SpectralPage(1, (P, Q), entries, models=models, chains=chains)
    d1_ok = True
    for p in range(P):
        for q in range(Q + 1):
            Z = models[p].complex.cocycles(q)
            imgs = [models[p + 1].pullback(models[p], chains[p], q, z) for z in Z.basis]
            page.differentials[(p, q)] = imgs
            if not all(models[p + 1].complex.is_cocycle(q, v) for v in imgs):
                d1_ok = False
    page.checks["d1_maps_cocycles"] = d1_ok
    sq = True
    for p in range(P - 1):
        for q in range(Q + 1):
            for v in page.differentials[(p, q)]:
                w = models[p + 2].pullback(models[p + 1], chains[p + 1], q, v)
                if not models[p + 2].complex.is_coboundary(q, w):
                    sq = False
    page.checks["d1_squared_zero"] = sq
    return page


def e2_page(e1: SpectralPage) -> SpectralPage:
    """Row-wise homology of page 1, for columns ``p <= P - 1``."""
    P, Q = e1.window
    if P < 1:
        raise WindowError("page 2 needs at least two columns of page 1")
    models = e1.models
    entries = {}
    for q in range(Q + 1):
        for p in range(P):
            entries[(p, q)] = _row_homology(e1, p, q)
    page = SpectralPage(2, (P - 1, Q), entries, models=models, chains=e1.chains)
    page.checks = dict(e1.checks)
    return page


def _row_homology(e1: SpectralPage, p: int, q: int) -> AbelianInvariants:
    models = e1.models
    here, nxt = models[p].complex, models[p + 1].complex
    Z = here.cocycles(q)
    d1 = e1.differentials[(p, q)]
    k = len(d1)
    cols = list(d1)
    if q > 0:
        cols += [{i: -v for i, v in b.items()} for b in nxt.delta(q - 1)]
    rel = sparse_kernel(cols)
    xs = [{i: v for i, v in r.items() if i < k} for r in rel]
    # kernel of d1 modulo coboundaries, as a sublattice of the cochains
    vecs = []
    for x in xs:
        v: dict = {}
        for i, c in x.items():
            for key, val in Z.basis[i].items():
                v[key] = v.get(key, 0) + c * val
        vecs.append({a: b for a, b in v.items() if b})
    L = Sublattice(vecs, here.dim(q))
    ims = []
    if q > 0:
        ims += here.delta(q - 1)
    if p > 0:
        ims += e1.differentials[(p - 1, q)]
    coords = [L.coords(v) for v in ims if v]
    if not coords:
        return AbelianInvariants(L.rank, ())
    return cokernel_invariants(IntMatrix.from_sparse_columns(coords, L.rank))


# ---------------------------------------------------------------- Shapiro


@dataclass
class ShapiroReport:
    degree: int
    induced: AbelianInvariants
    restricted: AbelianInvariants

    @property
    def ok(self) -> bool:
        return self.induced == self.restricted


def shapiro_check(G: FiniteGroup, H: Subgroup, N: GLattice, M: GLattice, q: int,
                  cap: int | None = None) -> ShapiroReport:
    """``Ext^q_G(Z[G/H] (x) N, M)`` against ``H^q(H; Hom(N, M))``, computed independently."""
    X = coset_space(G, H).action
    A = tensor_diagonal(permutation_lattice(X), N, cap=cap)
    F = free_resolution(A, q + 1, cap=cap)
    lhs = cochain_model(F, M).cohomology(q)
    W = hom_diagonal(restrict_to_subgroup(N, H), restrict_to_subgroup(M, H))
    res = dr_resolution(W.group, q + 1, cap=cap)
    rhs = cochain_model(res, W).cohomology(q)
    return ShapiroReport(q, lhs, rhs)
