"""Relative cohomology of a pair (G, H) and its canonical class.

Both relative resolutions live on the coset set ``G/H`` with basepoint ``H``:
the simplicial one ``Z[(G/H)^{n+1}]`` and the tensor one ``Z[G/H] (x) I^{(x)n}``.
Their cochain complexes are compared through the chain maps in
:mod:`adamson.resolutions`, and cohomology with ``Hom_G(-, M)`` coefficients
is computed with :mod:`adamson.cochains`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .cochains import (CohomologyClass, CohomologyGroup, cochain_model, cohomology_groups,
                       cup_product, tensor_class, unit_class)
from .groups import FiniteGroup, Subgroup, coset_space
from .lattices import GLattice, hom_diagonal, invariant_sublattice, LatticeMap
from .linalg import AbelianInvariants, IntMatrix, Sublattice, cokernel_invariants, sparse_kernel
from .resolutions import (ChainMap, RangeError, Resolution, SimplicialResolution,
                          TensorResolution, bar_resolution, comparison_map_phi, comparison_map_psi,
                          dr_resolution, ideal_power, standard_relative_resolution,
                          tensor_relative_resolution)

__all__ = [
    "standard_relative_resolution", "tensor_relative_resolution", "relative_resolution",
    "group_resolution", "splitting_witness", "SplittingWitness", "adamson_cohomology",
    "adamson_cup", "canonical_class", "canonical_power", "canonical_height", "HeightResult",
    "universality_check", "UniversalityReport", "projection_chain_map", "rho_star",
    "zero_divisor_model", "ZeroDivisorModel", "quotient_group", "normal_quotient_oracle",
]


# ---------------------------------------------------------------- shared resolutions


@lru_cache(maxsize=32)
def relative_resolution(G: FiniteGroup, H: Subgroup, maxdeg: int, model: str = "standard") -> Resolution:
    """Memoized relative resolution; ``model`` is ``"standard"`` or ``"tensor"``."""
    if model == "standard":
        return standard_relative_resolution(G, H, maxdeg)
    if model == "tensor":
        return tensor_relative_resolution(G, H, maxdeg)
    raise ValueError(f"unknown relative model {model!r}")


@lru_cache(maxsize=32)
def group_resolution(G: FiniteGroup, maxdeg: int, model: str = "dr") -> Resolution:
    """Memoized absolute resolution: ``"bar"`` or ``"dr"``."""
    if model == "bar":
        return bar_resolution(G, maxdeg)
    if model == "dr":
        return dr_resolution(G, maxdeg)
    raise ValueError(f"unknown model {model!r}")


def _check_pair(G: FiniteGroup, H: Subgroup):
    if H.group != G:
        raise ValueError("H is not a subgroup of G")


# ---------------------------------------------------------------- H-splitting


@dataclass
class SplittingWitness:
    """``p = d_{n+1} h_n`` restricted to ``ker d_n`` is the identity and H-equivariant."""

    degree: int
    kernel_rank: int
    ok: bool
    failures: list = field(default_factory=list)

    def project(self, res: Resolution, vec: dict) -> dict:
        return res.diff_vec(self.degree + 1, res.contract_vec(self.degree, vec))


def splitting_witness(res: Resolution, n: int) -> SplittingWitness:
    """Certify that ``ker(d_n)`` is an H-direct summand of ``P_n``.

    ``H`` is the splitting group of the resolution; the projection onto the
    kernel is ``d_{n+1} h_n`` built from the H-equivariant contraction.
    """
    if not res.has_contraction:
        raise TypeError("resolution carries no contraction")
    res.require(n + 1)
    cols = [res.diff(n, i) for i in range(res.rank(n))]
    kernel = sparse_kernel(cols)
    w = SplittingWitness(n, len(kernel), True)

    def p(vec):
        return res.diff_vec(n + 1, res.contract_vec(n, vec))

    for z in kernel:
        if p(z) != {k: v for k, v in z.items() if v}:
            w.ok = False
            w.failures.append(("not the identity on the kernel", z))
            break
    for h in res.splitting_group.generators:
        for i in range(res.rank(n)):
            if p(res.act(h, n, i)) != res.act_vec(h, n, p({i: 1})):
                w.ok = False
                w.failures.append(("not equivariant", h, i))
                break
    return w


# ---------------------------------------------------------------- cohomology


def adamson_cohomology(G: FiniteGroup, H: Subgroup, M: GLattice, upto: int,
                       model: str = "standard", representatives: bool = False) -> list[CohomologyGroup]:
    """``H^n(G, H; M)`` for ``n <= upto``."""
    _check_pair(G, H)
    res = relative_resolution(G, H, upto + 1, model)
    return cohomology_groups(res, M, upto, representatives=representatives)


def adamson_cup(a: CohomologyClass, b: CohomologyClass) -> CohomologyClass:
    """Cup product of two relative classes on the tensor relative model."""
    if a.resolution.kind != "tensor_relative":
        raise ValueError("relative cup product is computed on the tensor relative model")
    return cup_product(a, b)


def canonical_class(G: FiniteGroup, H: Subgroup, maxdeg: int = 2) -> CohomologyClass:
    """The class in ``H^1(G, H; I)`` induced by the identity of ``I``."""
    return canonical_power(relative_resolution(G, H, maxdeg, "tensor"), 1)


def canonical_power(res: TensorResolution, n: int) -> CohomologyClass:
    """``phi^n``: induced by the identity of ``I^{(x)n}``."""
    if res.kind != "tensor_relative":
        raise ValueError("expected a tensor relative resolution")
    if n == 0:
        return unit_class(res)
    N = res.ideal_power(n)
    return tensor_class(res, N, IntMatrix.identity(N.rank), n, check=False)


@dataclass
class HeightResult:
    height: int
    cap: int
    saturated: bool  # nonzero all the way up to the cap

    def to_json(self) -> dict:
        return {"height": self.height, "cap": self.cap, "saturated": self.saturated}


def canonical_height(G: FiniteGroup, H: Subgroup, cap: int) -> HeightResult:
    """Largest ``n <= cap`` with ``phi^n != 0``."""
    _check_pair(G, H)
    if cap < 0:
        raise ValueError("cap must be non-negative")
    res = relative_resolution(G, H, cap + 1, "tensor")
    for n in range(1, cap + 1):
        if canonical_power(res, n).is_zero():
            return HeightResult(n - 1, cap, False)
    return HeightResult(cap, cap, True)


# ---------------------------------------------------------------- universality


@dataclass
class UniversalityReport:
    degree: int
    induced: LatticeMap
    equivariant: bool
    matches: bool


def universality_check(lam: CohomologyClass) -> UniversalityReport:
    """Factor a relative class through the canonical power.

    A class on the standard model is first moved to the tensor model; its
    induced map ``h: I^n -> M`` is read off, ``phi^n`` is pushed forward
    along ``h`` and compared with the class (on the model it came from).
    """
    res = lam.resolution
    n = lam.degree
    if res.kind == "standard_relative":
        tens = relative_resolution(res.group, res.points.stabilizer(res.basepoint), res.maxdeg, "tensor")
        if tens.points != res.points:
            tens = TensorResolution(res.points, res.maxdeg, "tensor_relative", res.basepoint)
        moved = lam.pullback(comparison_map_psi(tens, res), cochain_model(tens, lam.coeffs))
    elif res.kind == "tensor_relative":
        tens, moved = res, lam
    else:
        raise ValueError("expected a relative class")
    h = moved.matrix()
    N = tens.ideal_power(n)
    induced = LatticeMap(N, lam.coeffs, h)
    equivariant = induced.is_equivariant()
    phi_n = canonical_power(tens, n)
    target = cochain_model(tens, lam.coeffs)

    def pushed(i):
        return induced(phi_n.model.evaluate_chain(n, phi_n.coords, {i: 1}))

    pushed_class = CohomologyClass(target, n, target.from_function(n, pushed), check=equivariant)
    if res is tens:
        matches = pushed_class == lam
    else:
        back = pushed_class.pullback(comparison_map_phi(res, tens), lam.model)
        matches = back == lam
    return UniversalityReport(n, induced, equivariant, matches)


# ---------------------------------------------------------------- rho^*


def projection_chain_map(bar: SimplicialResolution, std: SimplicialResolution) -> ChainMap:
    """``(g_0..g_n) -> (g_0 H .. g_n H)`` from the bar resolution to the standard relative one."""
    if bar.kind != "bar" or std.kind != "standard_relative" or bar.group != std.group:
        raise ValueError("expected the bar and standard relative resolutions of one group")
    if bar.maxdeg != std.maxdeg:
        raise RangeError(f"range mismatch: {bar.maxdeg} vs {std.maxdeg}")
    to_coset = [row[std.basepoint] for row in std.points.table]

    def fn(n, idx):
        return {std.encode(to_coset[g] for g in bar.decode(idx, n)): 1}

    return ChainMap(bar, std, fn, name="rho")


def rho_star(a: CohomologyClass, bar: SimplicialResolution | None = None) -> CohomologyClass:
    """Image of a relative class in ordinary cohomology, on the bar model."""
    res = a.resolution
    if res.kind == "tensor_relative":
        std = SimplicialResolution(res.points, res.maxdeg, "standard_relative", res.basepoint)
        a = a.pullback(comparison_map_phi(std, res), cochain_model(std, a.coeffs))
        res = std
    if res.kind != "standard_relative":
        raise ValueError("expected a relative class")
    if bar is None:
        bar = group_resolution(res.group, res.maxdeg, "bar")
    return a.pullback(projection_chain_map(bar, res), cochain_model(bar, a.coeffs))


# ---------------------------------------------------------------- zero-divisor model


@dataclass
class ZeroDivisorModel:
    degree: int
    kernel: AbelianInvariants
    relative: AbelianInvariants

    @property
    def agrees(self) -> bool:
        return self.kernel == self.relative


def zero_divisor_model(G: FiniteGroup, H: Subgroup, M: GLattice, n: int) -> ZeroDivisorModel:
    """Compare ``H^n(G, H; M)`` with ``ker(H^1(G; W) -> H^1(H; W))``, ``W = Hom(I^{n-1}, M)``."""
    _check_pair(G, H)
    if n < 1:
        raise ValueError("the model is stated for n >= 1")
    X = coset_space(G, H).action
    W = hom_diagonal(ideal_power(X, 0, n - 1), M)
    res = group_resolution(G, 2, "dr")
    mG = cochain_model(res, W)
    mH = cochain_model(res, W, H)
    Z = mG.complex.cocycles(1)
    restricted = [mH.restrict_from(mG, 1, z) for z in Z.basis]
    BH = mH.delta(0)
    k = len(restricted)
    cols = restricted + [{i: -v for i, v in b.items()} for b in BH]
    relations = sparse_kernel(cols)
    Lp = Sublattice([{i: v for i, v in r.items() if i < k} for r in relations], k)
    images = [Lp.coords(Z.coords(b)) for b in mG.delta(0)]
    kernel = cokernel_invariants(IntMatrix.from_sparse_columns(images, Lp.rank)) if images else \
        AbelianInvariants(Lp.rank, ())
    rel = adamson_cohomology(G, H, M, n)[n].invariants
    return ZeroDivisorModel(n, kernel, rel)


# ---------------------------------------------------------------- normal subgroups


def quotient_group(G: FiniteGroup, H: Subgroup) -> tuple[FiniteGroup, list[int], list[int]]:
    """``G/H`` for normal ``H``: the group, the coset of each element, and coset representatives."""
    if not H.is_normal():
        raise ValueError("subgroup is not normal")
    C = coset_space(G, H)
    reps, cos = C.representatives, C.coset_of
    table = [[cos[G.mul(a, b)] for b in reps] for a in reps]
    Q = FiniteGroup(table, name=f"{G.name}/{H.order}")
    return Q, list(cos), list(reps)


def normal_quotient_oracle(G: FiniteGroup, H: Subgroup, M: GLattice, upto: int) -> list[AbelianInvariants]:
    """``H^n(G/H; M^H)`` computed directly over the quotient group."""
    Q, cos, reps = quotient_group(G, H)
    inv = invariant_sublattice(M, H)
    lat = inv.lattice
    NG = inv.normalizer
    pos = {g: i for i, g in enumerate(NG.elements)}
    MQ = GLattice(Q, lat.rank, [lat.action[pos[r]] for r in reps], name=f"{M.name}^H")
    res = dr_resolution(Q, upto + 1)
    return [g.invariants for g in cohomology_groups(res, MQ, upto)]

