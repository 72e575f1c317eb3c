"""Finite groups given by Cayley tables, subgroups, G-sets and families."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

DEFAULT_ORDER_CAP = 128


class GroupConstructionError(ValueError):
    pass


class LatinSquareError(GroupConstructionError):
    pass


class AssociativityError(GroupConstructionError):
    pass


class MissingIdentityError(GroupConstructionError):
    pass


class NotAPermutationError(GroupConstructionError):
    pass


class OrderCapError(GroupConstructionError):
    pass


class FiniteGroup:
    """A finite group on the indices ``0..n-1`` with ``0`` the identity.

    Construct through :func:`group_from_cayley` or the other factories;
    the constructor validates the table.
    """

    def __init__(self, table: Sequence[Sequence[int]], name: str | None = None):
        t = tuple(tuple(int(x) for x in row) for row in table)
        n = len(t)
        if n == 0:
            raise GroupConstructionError("empty table")
        if any(len(row) != n for row in t):
            raise GroupConstructionError("table is not square")
        full = set(range(n))
        for row in t:
            if set(row) != full:
                raise LatinSquareError("a row is not a permutation of the elements")
        for j in range(n):
            if {t[i][j] for i in range(n)} != full:
                raise LatinSquareError("a column is not a permutation of the elements")
        ident = [e for e in range(n) if all(t[e][x] == x and t[x][e] == x for x in range(n))]
        if not ident:
            raise MissingIdentityError("no two-sided identity")
        if ident[0] != 0:
            raise MissingIdentityError(f"identity is element {ident[0]}, expected element 0")
        for a in range(n):
            ta = t[a]
            for b in range(n):
                ab = ta[b]
                tab, tb = t[ab], t[b]
                for c in range(n):
                    if tab[c] != ta[tb[c]]:
                        raise AssociativityError(f"({a}*{b})*{c} != {a}*({b}*{c})")
        self.table = t
        self.order = n
        self.inverse = tuple(t[a].index(0) for a in range(n))
        self.name = name or f"G{n}"

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def __len__(self):
        return self.order

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return self.table[self.table[g][x]][self.inverse[g]]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def exponent(self) -> int:
        from math import lcm

        e = 1
        for a in self.elements:
            e = lcm(e, self.element_order(a))
        return e

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in self.elements for b in range(a))

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set, chosen greedily by element index."""
        gens: list[int] = []
        span = {0}
        for a in self.elements:
            if a not in span:
                gens.append(a)
                span = set(_closure(self, gens))
        return tuple(gens)

    @cached_property
    def fingerprint(self) -> str:
        h = hashlib.sha256(repr(self.table).encode()).hexdigest()
        return h[:16]

    def full(self) -> "Subgroup":
        return Subgroup(self, self.elements)

    def trivial(self) -> "Subgroup":
        return Subgroup(self, (0,))


def _closure(G: FiniteGroup, gens: Iterable[int]) -> list[int]:
    gens = list(gens)
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = G.table[x][s]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


class Subgroup:
    """A subgroup stored as its sorted element indices in the parent."""

    def __init__(self, group: FiniteGroup, elements: Iterable[int], check: bool = True):
        els = tuple(sorted(set(int(e) for e in elements)))
        if check:
            s = set(els)
            if 0 not in s:
                raise ValueError("subgroup must contain the identity")
            for a in els:
                if group.inverse[a] not in s:
                    raise ValueError("subset is not closed under inversion")
                for b in els:
                    if group.table[a][b] not in s:
                        raise ValueError("subset is not closed under multiplication")
        self.group = group
        self.elements = els
        self._set = frozenset(els)

    def __repr__(self):
        return f"Subgroup({list(self.elements)})"

    def __contains__(self, x):
        return x in self._set

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.group == other.group and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def conjugate(self, g: int) -> "Subgroup":
        """``g K g^-1``."""
        return Subgroup(self.group, (self.group.conj(g, k) for k in self.elements), check=False)

    def intersection(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.group, self._set & other._set, check=False)

    def issubgroup(self, other: "Subgroup") -> bool:
        return self._set <= other._set

    def is_normal(self) -> bool:
        return all(self.conjugate(g) == self for g in self.group.generators)

    def normalizer(self) -> "Subgroup":
        G = self.group
        return Subgroup(G, (g for g in G.elements if self.conjugate(g) == self), check=False)

    @cached_property
    def generators(self) -> tuple[int, ...]:
        gens: list[int] = []
        span = {0}
        for a in self.elements:
            if a not in span:
                gens.append(a)
                span = set(_closure(self.group, gens))
        return tuple(gens)

    @cached_property
    def as_group(self) -> FiniteGroup:
        """The subgroup as a standalone group; local index ``i`` is ``elements[i]``."""
        pos = {e: i for i, e in enumerate(self.elements)}
        t = self.group.table
        table = [[pos[t[a][b]] for b in self.elements] for a in self.elements]
        if self.order == self.group.order:
            return self.group
        return FiniteGroup(table, name=f"{self.group.name}>{self.order}")

    def subgroups(self) -> list["Subgroup"]:
        """All subgroups of this subgroup."""
        G = self.group
        found = {(0,): Subgroup(G, (0,), check=False)}
        frontier = list(found.values())
        while frontier:
            nxt = []
            for S in frontier:
                for x in self.elements:
                    if x in S:
                        continue
                    T = Subgroup(G, _closure(G, list(S.generators) + [x]), check=False)
                    if T.elements not in found:
                        found[T.elements] = T
                        nxt.append(T)
            frontier = nxt
        return sorted(found.values(), key=lambda s: (s.order, s.elements))


def subgroup_generated(G: FiniteGroup, elems: Iterable[int]) -> Subgroup:
    elems = list(elems)
    for e in elems:
        if not 0 <= e < G.order:
            raise ValueError(f"element index {e} out of range")
    return Subgroup(G, _closure(G, elems), check=False)


@dataclass(frozen=True)
class GSetAction:
    """Left action of a group on points ``0..m-1``; ``table[g][x] = g.x``."""

    group: FiniteGroup
    size: int
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        G = self.group
        if len(self.table) != G.order or any(len(r) != self.size for r in self.table):
            raise ValueError("action table has the wrong shape")
        if self.table[0] != tuple(range(self.size)):
            raise ValueError("identity does not act trivially")
        for g in G.elements:
            for s in G.generators:
                gs = G.table[g][s]
                tg, ts, tgs = self.table[g], self.table[s], self.table[gs]
                for x in range(self.size):
                    if tgs[x] != tg[ts[x]]:
                        raise ValueError("action is not compatible with multiplication")

    def act(self, g: int, x: int) -> int:
        return self.table[g][x]

    def stabilizer(self, x: int) -> Subgroup:
        return Subgroup(self.group, (g for g in self.group.elements if self.table[g][x] == x), check=False)

    def transporters(self) -> list[int]:
        """For a transitive action, the least ``g`` with ``g.0 = x`` for each point."""
        out = [None] * self.size
        for g in self.group.elements:
            x = self.table[g][0]
            if out[x] is None:
                out[x] = g
        if any(v is None for v in out):
            raise ValueError("action is not transitive")
        return out


@dataclass(frozen=True)
class CosetSpace:
    """Left cosets ``gH``; point 0 is ``H``, points ordered by least representative."""

    group: FiniteGroup
    subgroup: Subgroup
    action: GSetAction
    representatives: tuple[int, ...]
    coset_of: tuple[int, ...]

    @property
    def size(self) -> int:
        return self.action.size


def coset_space(G: FiniteGroup, H: Subgroup) -> CosetSpace:
    coset_of = [-1] * G.order
    reps = []
    for g in G.elements:
        if coset_of[g] < 0:
            k = len(reps)
            reps.append(g)
            for h in H.elements:
                coset_of[G.table[g][h]] = k
    table = tuple(tuple(coset_of[G.table[g][r]] for r in reps) for g in G.elements)
    return CosetSpace(G, H, GSetAction(G, len(reps), table), tuple(reps), tuple(coset_of))


def regular_action(G: FiniteGroup) -> GSetAction:
    return GSetAction(G, G.order, G.table)


def fixed_points(X: GSetAction, K: Subgroup) -> list[int]:
    gens = K.generators
    return [x for x in range(X.size) if all(X.table[k][x] == x for k in gens)]


@dataclass(frozen=True)
class FamilyOfSubgroups:
    group: FiniteGroup
    members: tuple[Subgroup, ...]

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, K):
        return K in self.members

    def index(self, K: Subgroup) -> int:
        return self.members.index(K)


def full_family_closure(G: FiniteGroup, H: Subgroup) -> FamilyOfSubgroups:
    return _close_family(G, [H])


def _close_family(G: FiniteGroup, seed: Sequence[Subgroup]) -> FamilyOfSubgroups:
    members = {S.elements: S for S in seed}
    changed = True
    while changed:
        changed = False
        current = list(members.values())
        new: list[Subgroup] = []
        for S in current:
            for g in G.elements:
                new.append(S.conjugate(g))
            new.extend(S.subgroups())
        for A in current:
            for B in current:
                new.append(A.intersection(B))
        for S in new:
            if S.elements not in members:
                members[S.elements] = S
                changed = True
    ordered = sorted(members.values(), key=lambda s: (s.order, s.elements))
    return FamilyOfSubgroups(G, tuple(ordered))


def is_full_family(F: FamilyOfSubgroups) -> bool:
    return _close_family(F.group, list(F.members)).members == F.members


# ---------------------------------------------------------------- constructors


def group_from_cayley(table: Sequence[Sequence[int]], name: str | None = None) -> FiniteGroup:
    return FiniteGroup(table, name=name)


def group_from_permutations(
    degree: int, generators: Sequence[Sequence[int]], cap: int = DEFAULT_ORDER_CAP, name: str | None = None
) -> FiniteGroup:
    """Closure of permutations of ``0..degree-1`` under composition.

    Products compose right to left: ``(p*q)(x) = p(q(x))``. The identity is
    element 0 and the rest are sorted lexicographically.
    """
    gens = []
    for p in generators:
        p = tuple(int(x) for x in p)
        if len(p) != degree or sorted(p) != list(range(degree)):
            raise NotAPermutationError(f"{list(p)} is not a permutation of 0..{degree - 1}")
        gens.append(p)
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = tuple(s[x[i]] for i in range(degree))
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise OrderCapError(f"group order exceeds cap {cap}")
                    nxt.append(y)
        frontier = nxt
    elems = [ident] + sorted(seen - {ident})
    pos = {p: i for i, p in enumerate(elems)}
    table = [[pos[tuple(a[b[i]] for i in range(degree))] for b in elems] for a in elems]
    return FiniteGroup(table, name=name or f"Perm{degree}")


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group needs n >= 1")
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], name=f"Z{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon, order ``2n``."""
    if n < 1:
        raise ValueError("dihedral group needs n >= 1")
    if n <= 2:
        # n-gon is degenerate; realize D_n as Z2 (n=1) or the Klein group (n=2)
        G = cyclic(2) if n == 1 else direct_product(cyclic(2), cyclic(2))
        G.name = f"D{n}"
        return G
    rot = [(i + 1) % n for i in range(n)]
    ref = [(-i) % n for i in range(n)]
    return group_from_permutations(n, [rot, ref], name=f"D{n}")


def symmetric(n: int) -> FiniteGroup:
    if n <= 1:
        G = cyclic(1)
        G.name = f"S{n}"
        return G
    gens = [[1, 0] + list(range(2, n)), [(i + 1) % n for i in range(n)]]
    return group_from_permutations(n, gens, name=f"S{n}")


def quaternion() -> FiniteGroup:
    """Q8 via its left regular representation."""
    # elements 1, i, j, k, -1, -i, -j, -k as 0..7
    units = {"1": 0, "i": 1, "j": 2, "k": 3}
    rule = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    names = ["1", "i", "j", "k"]

    def mul(a, b):
        sa, ua = (1 if a < 4 else -1), names[a % 4]
        sb, ub = (1 if b < 4 else -1), names[b % 4]
        s, u = rule[(ua, ub)]
        s *= sa * sb
        return units[u] + (0 if s == 1 else 4)

    return FiniteGroup([[mul(a, b) for b in range(8)] for a in range(8)], name="Q8")


def direct_product(G1: FiniteGroup, G2: FiniteGroup, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Componentwise product; the pair ``(i, j)`` has index ``i*|G2| + j``."""
    n1, n2 = G1.order, G2.order
    if n1 * n2 > cap:
        raise OrderCapError(f"product order {n1 * n2} exceeds cap {cap}")
    table = [
        [G1.table[a // n2][b // n2] * n2 + G2.table[a % n2][b % n2] for b in range(n1 * n2)]
        for a in range(n1 * n2)
    ]
    return FiniteGroup(table, name=f"{G1.name}x{G2.name}")


@dataclass(frozen=True)
class TCPair:
    """``(pi x pi, diagonal)`` with the coset space identified with ``pi``.

    ``to_pi[x]`` is the element ``a b^-1`` of ``pi`` for the coset ``(a,b)Δ``;
    under it ``(g,h)`` acts on ``pi`` by ``x -> g x h^-1``.
    """

    pi: FiniteGroup
    group: FiniteGroup
    diagonal: Subgroup
    cosets: CosetSpace
    to_pi: tuple[int, ...]


def tc_pair(pi: FiniteGroup, cap: int = DEFAULT_ORDER_CAP) -> TCPair:
    G = direct_product(pi, pi, cap=cap)
    n = pi.order
    D = Subgroup(G, (g * n + g for g in pi.elements))
    X = coset_space(G, D)
    to_pi = []
    for r in X.representatives:
        a, b = divmod(r, n)
        to_pi.append(pi.table[a][pi.inverse[b]])
    if sorted(to_pi) != list(pi.elements):
        raise AssertionError("coset bijection is not one-to-one")
    for gh in G.elements:
        g, h = divmod(gh, n)
        for x in range(X.size):
            lhs = to_pi[X.action.table[gh][x]]
            rhs = pi.table[pi.table[g][to_pi[x]]][pi.inverse[h]]
            if lhs != rhs:
                raise AssertionError("coset bijection is not equivariant")
    return TCPair(pi, G, D, X, tuple(to_pi))
