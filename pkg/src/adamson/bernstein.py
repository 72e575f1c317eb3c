"""The Bernstein class and lower bounds for sectional category.

``omega`` lives in ``H^1(G; I)`` on the DR resolution, represented by
``mu: K -> I``, ``g - e -> gH - H``. Its powers are represented by
``mu^{(x)n}``; the largest nonzero power bounds ``secat(H -> G)`` from below.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .cochains import CohomologyClass, cup_product, tensor_class, unit_class
from .groups import FiniteGroup, Subgroup, coset_space, tc_pair
from .linalg import IntMatrix, kron
from .resolutions import TensorResolution, ideal_power

__all__ = [
    "bernstein_map", "bernstein_class", "class_power", "iterated_cup", "ZeroDivisorCheck", "is_zero_divisor",
    "bernstein_height", "BoundReport", "secat_lower_bounds", "tc_lower_bound", "canonical_subgroup",
]


def _dr(G: FiniteGroup, maxdeg: int) -> TensorResolution:
    from .adamson import group_resolution
    return group_resolution(G, maxdeg, "dr")


def bernstein_map(G: FiniteGroup, H: Subgroup) -> IntMatrix:
    """Matrix of ``mu: K -> I`` in the bases ``g - e`` and ``y - H``."""
    X = coset_space(G, H).action
    rows = X.size - 1
    M = [[0] * (G.order - 1) for _ in range(rows)]
    for j, g in enumerate(range(1, G.order)):
        y = X.table[g][0]
        if y:
            M[y - 1][j] = 1
    return IntMatrix(M, cols=G.order - 1)


def bernstein_class(G: FiniteGroup, H: Subgroup, maxdeg: int = 2) -> CohomologyClass:
    if H.group != G:
        raise ValueError("H is not a subgroup of G")
    return class_power(_dr(G, maxdeg), H, 1)


def class_power(res: TensorResolution, H: Subgroup, n: int, check: bool = False) -> CohomologyClass:
    """``omega^n``, represented directly by ``mu^{(x)n}``."""
    if n < 0:
        raise ValueError("power must be non-negative")
    if n == 0:
        return unit_class(res)
    G = res.group
    mu = bernstein_map(G, H)
    F = mu
    for _ in range(n - 1):
        F = kron(F, mu)
    coeffs = ideal_power(coset_space(G, H).action, 0, n)
    return tensor_class(res, coeffs, F, n, check=check)


def iterated_cup(c: CohomologyClass, n: int) -> CohomologyClass:
    out = c
    for _ in range(n - 1):
        out = cup_product(out, c)
    return out


# ---------------------------------------------------------------- zero divisors


@dataclass
class ZeroDivisorCheck:
    zero_divisor: bool
    cobounding: dict | None  # coordinates of an H-cochain whose coboundary is the restriction
    explicit_witness: bool | None = None  # g -> gH - H cobounds the restricted cocycle exactly


def is_zero_divisor(c: CohomologyClass, H: Subgroup, omega: bool = False) -> ZeroDivisorCheck:
    """Does ``c`` restrict to zero on ``H``?

    With ``omega`` set, ``c`` must be the Bernstein class and the explicit
    0-cochain ``g -> gH - H`` is checked to cobound its restriction exactly.
    """
    r = c.restrict(H)
    if r.degree == 0:
        zero = not r.coords
        return ZeroDivisorCheck(zero, {} if zero else None)
    w = r.model.complex.cobounding(r.degree, r.coords)
    out = ZeroDivisorCheck(w is not None, w)
    if omega:
        res = c.resolution
        if not isinstance(res, TensorResolution) or res.kind != "dr" or c.degree != 1:
            raise ValueError("explicit witness is defined for the degree-1 class on the DR resolution")
        X = coset_space(res.group, H).action
        model = r.model

        def fn(idx):
            y = X.table[idx][0]  # P_0 basis is the group itself
            return {y - 1: 1} if y else {}

        wit = model.from_function(0, fn)
        out.explicit_witness = model.complex.apply(0, wit) == r.coords
    return out


# ---------------------------------------------------------------- heights and reports


def bernstein_height(G: FiniteGroup, H: Subgroup, cap: int) -> int:
    """``max{n <= cap : omega^n != 0}``."""
    if cap < 0:
        raise ValueError("cap must be non-negative")
    res = _dr(G, cap + 1)
    for n in range(1, cap + 1):
        if class_power(res, H, n).is_zero():
            return n - 1
    return cap


def canonical_subgroup(H: Subgroup) -> Subgroup:
    """The conjugate of ``H`` with the least sorted element tuple."""
    G = H.group
    return min((H.conjugate(g) for g in G.elements), key=lambda S: S.elements)


@dataclass
class BoundReport:
    pair: dict
    cap: int
    height_omega: int
    rho_estimate: int
    notes: list = field(default_factory=list)
    label: str = "secat"

    @property
    def secat_lower_bound(self) -> int:
        return max(self.height_omega, self.rho_estimate)

    def to_json(self) -> dict:
        return {
            "pair": self.pair,
            "cap": self.cap,
            "height_omega": self.height_omega,
            "rho_estimate": self.rho_estimate,
            "secat_lower_bound": self.secat_lower_bound,
            "notes": list(self.notes),
        }


def _pair_json(G: FiniteGroup, H: Subgroup) -> dict:
    return {"group": G.name, "order": G.order, "subgroup": list(H.elements), "index": G.order // H.order}


def secat_lower_bounds(G: FiniteGroup, H: Subgroup, cap: int, samples=None, rho: bool = True) -> BoundReport:
    """Both lower bounds for ``secat(H -> G)`` within ``cap``.

    Heights depend only on the conjugacy class of ``H``, so the report is
    computed for the canonical conjugate and says so.
    """
    from .bredon import rho_invariant_estimate
    if H.group != G:
        raise ValueError("H is not a subgroup of G")
    Hc = canonical_subgroup(H)
    h = bernstein_height(G, Hc, cap)
    r = rho_invariant_estimate(G, Hc, cap, samples) if rho else 0
    notes = [
        "lower bounds only; secat itself is not computed",
        f"powers and evaluations checked through degree {cap}; nothing beyond the cap is claimed",
        "rho_estimate samples finitely many coefficient systems, so it is itself a lower estimate",
    ]
    if h == cap:
        notes.append("height reached the cap")
    if not rho:
        notes.append("rho estimate skipped")
    return BoundReport(_pair_json(G, Hc), cap, h, r, notes)


def tc_lower_bound(pi: FiniteGroup, cap: int, samples=None, rho: bool = True) -> BoundReport:
    """``TC(pi) >= ...`` through the diagonal of ``pi x pi``."""
    tc = tc_pair(pi)
    rep = secat_lower_bounds(tc.group, tc.diagonal, cap, samples, rho)
    rep.label = "TC"
    rep.pair = {"pi": pi.name, "pi_order": pi.order, **rep.pair}
    rep.notes.insert(0, f"TC({pi.name}) >= {rep.secat_lower_bound}")
    return rep
