"""Parsing of group, subgroup and coefficient specifications.

Specs are JSON objects (or JSON text / ``@file`` references) following the
schemas below, or short strings for the common cases::

    cyclic:4  dihedral:4  symmetric:3  quaternion  klein  product:cyclic:2,cyclic:2  tc:cyclic:2
    gen:2  elements:0,2  trivial  full  diagonal
    trivial  regular  sign  K  I  cosets  K^2  I^3

Errors carry the field path of the offending entry.
"""
from __future__ import annotations

import json
from pathlib import Path

from .groups import (DEFAULT_ORDER_CAP, FiniteGroup, GroupConstructionError, OrderCapError, Subgroup,
                     coset_space, cyclic, dihedral, direct_product, group_from_cayley, group_from_permutations,
                     quaternion, regular_action, subgroup_generated, symmetric, tc_pair)
from .lattices import (GLattice, hom_diagonal, index_two_subgroup, permutation_lattice,
                       regular_lattice, sign_lattice, tensor_diagonal, trivial_lattice)
from .linalg import IntMatrix
from .resolutions import augmentation_ideal, ideal_power

__all__ = ["SpecError", "load_spec", "parse_group", "parse_subgroup", "parse_coeffs", "GroupSpec"]


class SpecError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def load_spec(text):
    """JSON objects pass through; strings are JSON text, ``@path`` or a short form."""
    if not isinstance(text, str):
        return text
    s = text.strip()
    if s.startswith("@"):
        s = Path(s[1:]).read_text()
    if s.startswith("{") or s.startswith("["):
        try:
            return json.loads(s)
        except json.JSONDecodeError as e:
            raise SpecError("$", f"invalid JSON: {e.msg}") from None
    return s


class GroupSpec:
    """A parsed group; ``diagonal`` is set for TC pairs."""

    def __init__(self, group: FiniteGroup, diagonal: Subgroup | None = None, pi: FiniteGroup | None = None):
        self.group = group
        self.diagonal = diagonal
        self.pi = pi


def _int(v, path, lo=None):
    if isinstance(v, bool) or not isinstance(v, int):
        try:
            v = int(v)
        except (TypeError, ValueError):
            raise SpecError(path, f"expected an integer, got {v!r}") from None
    if lo is not None and v < lo:
        raise SpecError(path, f"must be at least {lo}")
    return v


def _short_group(s: str, path: str, cap: int) -> dict:
    head, _, rest = s.partition(":")
    head = head.lower()
    if head in ("cyclic", "z"):
        return {"type": "cyclic", "n": _int(rest, path, 1)}
    if head in ("dihedral", "d"):
        return {"type": "dihedral", "n": _int(rest, path, 1)}
    if head in ("symmetric", "s"):
        return {"type": "symmetric", "n": _int(rest, path, 1)}
    if head in ("quaternion", "q8"):
        return {"type": "quaternion"}
    if head in ("klein", "v4"):
        return {"type": "product", "factors": [{"type": "cyclic", "n": 2}, {"type": "cyclic", "n": 2}]}
    if head == "product":
        parts = _split_top(rest)
        if len(parts) < 2:
            raise SpecError(path, "product needs at least two factors")
        return {"type": "product", "factors": parts}
    if head == "tc":
        return {"type": "tc", "pi": rest}
    raise SpecError(path, f"unknown group form {s!r}")


def _split_top(s: str) -> list[str]:
    return [p for p in s.split(",") if p]


def parse_group(spec, path: str = "group", cap: int = DEFAULT_ORDER_CAP) -> GroupSpec:
    spec = load_spec(spec)
    if isinstance(spec, str):
        spec = _short_group(spec, path, cap)
    if not isinstance(spec, dict):
        raise SpecError(path, "expected an object or a short form")
    kind = spec.get("type")
    try:
        if kind == "cayley":
            table = spec.get("table")
            if not isinstance(table, list):
                raise SpecError(f"{path}.table", "expected a list of rows")
            if len(table) > cap:
                raise OrderCapError(f"group order {len(table)} exceeds cap {cap}")
            G = group_from_cayley(table, name=spec.get("name"))
        elif kind == "perm":
            degree = _int(spec.get("degree"), f"{path}.degree", 1)
            gens = spec.get("generators")
            if not isinstance(gens, list):
                raise SpecError(f"{path}.generators", "expected a list of permutations")
            G = group_from_permutations(degree, gens, cap=cap, name=spec.get("name"))
        elif kind == "cyclic":
            G = cyclic(_int(spec.get("n"), f"{path}.n", 1))
        elif kind == "dihedral":
            G = dihedral(_int(spec.get("n"), f"{path}.n", 1))
        elif kind == "symmetric":
            n = _int(spec.get("n"), f"{path}.n", 1)
            if n > 5:
                raise OrderCapError(f"S{n} exceeds the order cap")
            G = symmetric(n)
        elif kind == "quaternion":
            G = quaternion()
        elif kind == "product":
            factors = spec.get("factors")
            if not isinstance(factors, list) or not factors:
                raise SpecError(f"{path}.factors", "expected a non-empty list")
            G = parse_group(factors[0], f"{path}.factors[0]", cap).group
            for i, f in enumerate(factors[1:], 1):
                G = direct_product(G, parse_group(f, f"{path}.factors[{i}]", cap).group, cap=cap)
        elif kind == "tc":
            pi = parse_group(spec.get("pi"), f"{path}.pi", cap).group
            tc = tc_pair(pi, cap=cap)
            return GroupSpec(tc.group, tc.diagonal, pi)
        else:
            raise SpecError(f"{path}.type", f"unknown group type {kind!r}")
    except (GroupConstructionError, ValueError) as e:
        if isinstance(e, (SpecError, OrderCapError)):
            raise
        raise SpecError(path, str(e)) from None
    if G.order > cap:
        raise OrderCapError(f"group order {G.order} exceeds cap {cap}")
    return GroupSpec(G)


def parse_subgroup(spec, gs: GroupSpec, path: str = "subgroup") -> Subgroup:
    G = gs.group
    spec = load_spec(spec)
    if spec is None or spec == "trivial":
        return Subgroup(G, [0])
    if spec == "full":
        return G.full()
    if spec == "diagonal":
        if gs.diagonal is None:
            raise SpecError(path, "diagonal subgroup only exists for tc groups")
        return gs.diagonal
    if isinstance(spec, str):
        head, _, rest = spec.partition(":")
        elems = [_int(x, f"{path}[{i}]", 0) for i, x in enumerate(rest.split(",")) if x]
        if head == "gen":
            spec = {"generated_by": elems}
        elif head == "elements":
            spec = {"elements": elems}
        else:
            raise SpecError(path, f"unknown subgroup form {spec!r}")
    if not isinstance(spec, dict):
        raise SpecError(path, "expected an object or a short form")
    for key in ("elements", "generated_by"):
        if key in spec:
            vals = spec[key]
            if not isinstance(vals, list):
                raise SpecError(f"{path}.{key}", "expected a list of element indices")
            elems = []
            for i, x in enumerate(vals):
                x = _int(x, f"{path}.{key}[{i}]", 0)
                if x >= G.order:
                    raise SpecError(f"{path}.{key}[{i}]", f"element {x} out of range 0..{G.order - 1}")
                elems.append(x)
            if key == "generated_by":
                return subgroup_generated(G, elems)
            try:
                return Subgroup(G, elems)
            except ValueError as e:
                raise SpecError(f"{path}.elements", str(e)) from None
    raise SpecError(path, "expected 'elements' or 'generated_by'")


def parse_coeffs(spec, G: FiniteGroup, H: Subgroup | None = None, path: str = "coeffs") -> GLattice:
    spec = load_spec(spec)
    if isinstance(spec, str):
        spec = _short_coeffs(spec, path)
    if not isinstance(spec, dict):
        raise SpecError(path, "expected an object or a short form")
    kind = spec.get("type")
    if kind == "trivial":
        return trivial_lattice(G)
    if kind == "regular":
        return regular_lattice(G)
    if kind == "sign":
        K = index_two_subgroup(G)
        if K is None:
            raise SpecError(path, f"{G.name} has no index-two subgroup")
        return sign_lattice(G, K)
    if kind == "perm":
        if spec.get("on", "cosets") != "cosets":
            raise SpecError(f"{path}.on", "only 'cosets' is supported")
        return permutation_lattice(_cosets(G, H, path), name="Z[G/H]")
    if kind == "aug_ideal":
        of = spec.get("of", "group")
        power = _int(spec.get("power", 1), f"{path}.power", 0)
        if of == "group":
            X, name = regular_action(G), "K"
        elif of == "cosets":
            X, name = _cosets(G, H, path), "I"
        else:
            raise SpecError(f"{path}.of", "expected 'group' or 'cosets'")
        return augmentation_ideal(X, 0, name) if power == 1 else ideal_power(X, 0, power, name)
    if kind == "tensor":
        factors = spec.get("factors")
        if not isinstance(factors, list) or not factors:
            raise SpecError(f"{path}.factors", "expected a non-empty list")
        out = parse_coeffs(factors[0], G, H, f"{path}.factors[0]")
        for i, f in enumerate(factors[1:], 1):
            out = tensor_diagonal(out, parse_coeffs(f, G, H, f"{path}.factors[{i}]"))
        return out
    if kind == "hom":
        A = parse_coeffs(spec.get("from"), G, H, f"{path}.from")
        B = parse_coeffs(spec.get("to"), G, H, f"{path}.to")
        return hom_diagonal(A, B)
    if kind == "custom":
        return _custom(spec, G, path)
    raise SpecError(f"{path}.type", f"unknown coefficient type {kind!r}")


def _short_coeffs(s: str, path: str) -> dict:
    base, _, exp = s.partition("^")
    power = _int(exp, path, 0) if exp else 1
    table = {
        "trivial": {"type": "trivial"}, "regular": {"type": "regular"}, "sign": {"type": "sign"},
        "cosets": {"type": "perm", "on": "cosets"},
        "K": {"type": "aug_ideal", "of": "group"}, "I": {"type": "aug_ideal", "of": "cosets"},
    }
    if base not in table:
        raise SpecError(path, f"unknown coefficient form {s!r}")
    out = dict(table[base])
    if exp:
        if base not in ("K", "I"):
            raise SpecError(path, "powers are only supported for K and I")
        out["power"] = power
    return out


def _cosets(G: FiniteGroup, H: Subgroup | None, path: str):
    if H is None:
        raise SpecError(path, "coset modules need a subgroup")
    return coset_space(G, H).action


def _custom(spec: dict, G: FiniteGroup, path: str) -> GLattice:
    """``action`` maps element indices (as strings) to matrices; missing elements are generated."""
    r = _int(spec.get("rank"), f"{path}.rank", 0)
    action = spec.get("action")
    if not isinstance(action, dict):
        raise SpecError(f"{path}.action", "expected an object mapping elements to matrices")
    mats: dict[int, IntMatrix] = {0: IntMatrix.identity(r)}
    for key, m in action.items():
        g = _int(key, f"{path}.action", 0)
        if g >= G.order:
            raise SpecError(f"{path}.action.{key}", "element out of range")
        try:
            mat = IntMatrix(m, cols=r)
        except (TypeError, ValueError) as e:
            raise SpecError(f"{path}.action.{key}", str(e)) from None
        if mat.shape != (r, r):
            raise SpecError(f"{path}.action.{key}", f"expected a {r}x{r} matrix")
        mats[g] = mat
    frontier = list(mats)
    gens = [g for g in mats if g]
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = G.mul(a, s)
                if b not in mats:
                    mats[b] = mats[a] @ mats[s]
                    nxt.append(b)
        frontier = nxt
    if len(mats) != G.order:
        raise SpecError(f"{path}.action", "given elements do not generate the group")
    try:
        return GLattice.from_matrices(G, [mats[g] for g in G.elements], name=spec.get("name", "M"))
    except ValueError as e:
        raise SpecError(f"{path}.action", str(e)) from None
