"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 a computation cap was hit,
4 a verification suite failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

from .cache import resolution_store
from .groups import OrderCapError
from .lattices import RankCapError
from .resolutions import RangeError
from .specs import SpecError, parse_coeffs, parse_group, parse_subgroup

EXIT_OK, EXIT_INVALID, EXIT_CAP, EXIT_VERIFY = 0, 2, 3, 4
ORDER_CAP = 64


@dataclass
class JobSpec:
    command: str
    group: object = None
    subgroup: object = None
    coeffs: object = None
    max_degree: int = 4
    cap: int = 3
    oracles: tuple = ()
    output: str = "text"
    cache_dir: str | None = None
    seed: int | None = None
    order_cap: int = ORDER_CAP
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.max_degree < 0:
            raise SpecError("max_degree", "must be non-negative")
        if self.cap < 0:
            raise SpecError("cap", "must be non-negative")
        if self.order_cap < 1:
            raise SpecError("order_cap", "must be positive")


def _inv(x) -> dict:
    return x.to_json()


def _group_json(G) -> dict:
    return {"name": G.name, "order": G.order}


def _lattice_json(M) -> dict:
    return {"name": M.name, "rank": M.rank}


def _setup(job: JobSpec, need_subgroup: bool = True):
    gs = parse_group(job.group, "group", job.order_cap)
    H = parse_subgroup(job.subgroup, gs, "subgroup") if need_subgroup else None
    return gs, H


# ---------------------------------------------------------------- commands


def cmd_cohomology(job: JobSpec) -> dict:
    from .adamson import group_resolution
    from .cochains import cohomology_groups
    from .resolutions import free_resolution, unit_lattice
    gs, _ = _setup(job, need_subgroup=False)
    G = gs.group
    M = parse_coeffs(job.coeffs or "trivial", G, None)
    kind = job.extra.get("resolution", "dr")
    if kind == "free":
        res = free_resolution(unit_lattice(G), job.max_degree + 1)
    else:
        res = group_resolution(G, job.max_degree + 1, kind)
    groups = cohomology_groups(res, M, job.max_degree)
    return {"command": "cohomology", "group": _group_json(G), "coeffs": _lattice_json(M), "resolution": kind,
            "degrees": [{"n": g.degree, **_inv(g.invariants)} for g in groups]}


def cmd_adamson(job: JobSpec) -> dict:
    from .adamson import adamson_cohomology, normal_quotient_oracle, zero_divisor_model
    gs, H = _setup(job)
    G = gs.group
    M = parse_coeffs(job.coeffs or "trivial", G, H)
    n_max = job.max_degree
    main = adamson_cohomology(G, H, M, n_max, "standard")
    rows = [{"n": g.degree, **_inv(g.invariants)} for g in main]
    oracles = {}
    for name in job.oracles:
        if name == "tensor":
            vals = [g.invariants for g in adamson_cohomology(G, H, M, n_max, "tensor")]
        elif name == "quotient":
            if not H.is_normal():
                raise SpecError("oracle", "the quotient oracle needs a normal subgroup")
            vals = normal_quotient_oracle(G, H, M, n_max)
        elif name == "zero-divisor":
            vals = [None] + [zero_divisor_model(G, H, M, n).kernel for n in range(1, n_max + 1)]
        else:
            raise SpecError("oracle", f"unknown oracle {name!r}")
        entries = []
        for n, v in enumerate(vals):
            if v is not None:
                entries.append({"n": n, **_inv(v), "match": v == main[n].invariants})
        oracles[name] = entries
    out = {"command": "adamson", "group": _group_json(G), "subgroup": list(H.elements), "coeffs": _lattice_json(M),
           "degrees": rows}
    if oracles:
        out["oracles"] = oracles
        out["oracles_agree"] = all(e["match"] for es in oracles.values() for e in es)
    return out


def cmd_bernstein_height(job: JobSpec) -> dict:
    from .bernstein import bernstein_height, canonical_subgroup
    gs, H = _setup(job)
    Hc = canonical_subgroup(H)
    h = bernstein_height(gs.group, Hc, job.cap)
    return {"command": "bernstein-height", "group": _group_json(gs.group), "subgroup": list(Hc.elements),
            "cap": job.cap, "height_omega": h, "reached_cap": h == job.cap}


def cmd_secat_bounds(job: JobSpec) -> dict:
    from .bernstein import secat_lower_bounds
    gs, H = _setup(job)
    return secat_lower_bounds(gs.group, H, job.cap, rho=not job.extra.get("no_rho")).to_json()


def cmd_tc_bounds(job: JobSpec) -> dict:
    from .bernstein import tc_lower_bound
    pi = parse_group(job.extra.get("pi"), "pi", job.order_cap).group
    if pi.order ** 2 > job.order_cap:
        raise OrderCapError(f"pi x pi has order {pi.order ** 2}, above the cap {job.order_cap}")
    return tc_lower_bound(pi, job.cap, rho=not job.extra.get("no_rho")).to_json()


def cmd_bredon(job: JobSpec) -> dict:
    from .adamson import adamson_cohomology
    from .bredon import bredon_cochain_complex
    gs, H = _setup(job)
    G = gs.group
    M = parse_coeffs(job.coeffs or "trivial", G, H)
    bc = bredon_cochain_complex(G, H, M, job.max_degree)
    adam = adamson_cohomology(G, H, M, job.max_degree)
    rows = []
    for n in range(job.max_degree + 1):
        b, a = bc.cohomology(n), adam[n].invariants
        rows.append({"n": n, "bredon": _inv(b), "adamson": _inv(a), "match": b == a})
    return {"command": "bredon", "group": _group_json(G), "subgroup": list(H.elements), "coeffs": _lattice_json(M),
            "orbit_category": {"objects": len(bc.category.objects), "morphisms": len(bc.category.morphisms)},
            "degrees": rows, "all_match": all(r["match"] for r in rows)}


def cmd_spectral(job: JobSpec) -> dict:
    from .spectral import e1_page, e2_page
    gs, H = _setup(job)
    G = gs.group
    M = parse_coeffs(job.coeffs or "trivial", G, H)
    P = job.extra.get("p") or job.max_degree
    Q = job.extra.get("q")
    Q = min(job.max_degree, 2) if Q is None else Q
    e1 = e1_page(G, H, M, P, Q)
    e2 = e2_page(e1)
    return {"command": "spectral", "group": _group_json(G), "subgroup": list(H.elements), "coeffs": _lattice_json(M),
            "pages": [e1.to_json(), e2.to_json()]}


def cmd_verify(job: JobSpec) -> dict:
    from .verify import run_verify
    rep = run_verify(job.extra.get("suites"), seed=job.seed, max_degree=job.max_degree)
    out = {"command": "verify", **rep.to_json()}
    out["_lines"] = rep.lines()
    return out


COMMANDS = {
    "cohomology": cmd_cohomology, "adamson": cmd_adamson, "bernstein-height": cmd_bernstein_height,
    "secat-bounds": cmd_secat_bounds, "tc-bounds": cmd_tc_bounds, "bredon": cmd_bredon,
    "spectral": cmd_spectral, "verify": cmd_verify,
}


def run(job: JobSpec) -> tuple[dict, int]:
    """Execute ``job``; returns the report and the exit code."""
    cache = job.cache_dir or os.environ.get("ADAMSON_CACHE_DIR") or None
    with resolution_store(cache):
        report = COMMANDS[job.command](job)
    code = EXIT_OK
    if job.command == "verify" and not report["ok"]:
        code = EXIT_VERIFY
    return report, code


# ---------------------------------------------------------------- output


def to_json(report: dict) -> str:
    clean = {k: v for k, v in report.items() if not k.startswith("_")}
    return json.dumps(clean, sort_keys=True, indent=2) + "\n"


def _flatten(obj, prefix="", out=None) -> dict:
    out = {} if out is None else out
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k), out)
    elif isinstance(obj, list) and obj and all(isinstance(x, (int, str, bool)) for x in obj):
        out[prefix] = ("; " if any(isinstance(x, str) for x in obj) else " ").join(map(str, obj))
    elif isinstance(obj, list):
        for i, x in enumerate(obj):
            _flatten(x, f"{prefix}[{i}]", out)
    else:
        out[prefix] = obj
    return out


def to_csv(report: dict) -> str:
    """Flat projection: one row per record list entry when there is one, else key/value rows."""
    clean = {k: v for k, v in report.items() if not k.startswith("_")}
    records = None
    for key in ("degrees", "properties"):
        if isinstance(clean.get(key), list):
            records = clean[key]
            break
    buf = io.StringIO()
    if records is not None:
        rows = [_flatten(r) for r in records]
        fields = sorted({k for r in rows for k in r})
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    else:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in _flatten(clean).items():
            w.writerow([k, v])
    return buf.getvalue()


def _inv_str(d: dict) -> str:
    parts = []
    if d["rank"]:
        parts.append("Z" if d["rank"] == 1 else f"Z^{d['rank']}")
    parts += [f"Z/{t}" for t in d["torsion"]]
    return " + ".join(parts) or "0"


def to_text(report: dict) -> str:
    cmd = report.get("command")
    lines = []
    if cmd in ("cohomology", "adamson"):
        for r in report["degrees"]:
            lines.append(f"H^{r['n']} = {_inv_str(r)}")
        for name, es in report.get("oracles", {}).items():
            lines.append(f"oracle {name}: " + ", ".join(f"{e['n']}:{_inv_str(e)}{'' if e['match'] else ' (mismatch)'}"
                                                        for e in es))
    elif cmd == "bredon":
        for r in report["degrees"]:
            lines.append(f"n={r['n']}  bredon {_inv_str(r['bredon'])}  adamson {_inv_str(r['adamson'])}  "
                         f"{'match' if r['match'] else 'MISMATCH'}")
    elif cmd == "verify":
        lines += report["_lines"]
        lines.append("all properties pass" if report["ok"] else "verification FAILED")
    elif cmd == "spectral":
        for page in report["pages"]:
            lines.append(f"page {page['page']}")
            for e in page["entries"]:
                lines.append(f"  E({e['p']},{e['q']}) = {_inv_str(e)}")
            for k, v in page["checks"].items():
                lines.append(f"  check {k}: {v}")
    else:
        return to_json(report)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit JSON")
    fmt.add_argument("--csv", action="store_true", help="emit a flat CSV projection")
    common.add_argument("--cache-dir", default=None, help="resolution cache (default: $ADAMSON_CACHE_DIR)")
    common.add_argument("--max-degree", type=int, default=4, help="highest cohomological degree (default 4)")
    common.add_argument("--seed", type=int, default=None, help="seed for sampled classes")
    common.add_argument("--order-cap", type=int, default=ORDER_CAP, help="largest group order accepted")

    p = argparse.ArgumentParser(prog="adamson", description="Relative group cohomology and secat lower bounds")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_, group=True, subgroup=True, coeffs=False, cap=False):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if group:
            sp.add_argument("--group", required=True, help="group spec (JSON, @file or short form)")
        if subgroup:
            sp.add_argument("--subgroup", default="trivial", help="subgroup spec (default: trivial)")
        if coeffs:
            sp.add_argument("--coeffs", default="trivial", help="coefficient spec (default: trivial)")
        if cap:
            sp.add_argument("--cap", type=int, default=3, help="largest power examined (default 3)")
        return sp

    sp = add("cohomology", "ordinary cohomology H^n(G; M)", subgroup=False, coeffs=True)
    sp.add_argument("--resolution", choices=("dr", "bar", "free"), default="dr")
    sp = add("adamson", "relative cohomology H^n(G, H; M)", coeffs=True)
    sp.add_argument("--oracle", action="append", choices=("quotient", "tensor", "zero-divisor"), default=[])
    add("bernstein-height", "height of the Bernstein class", cap=True)
    sp = add("secat-bounds", "lower bounds for secat(H -> G)", cap=True)
    sp.add_argument("--no-rho", action="store_true", help="skip the Bredon estimate")
    sp = add("tc-bounds", "lower bounds for TC(pi)", group=False, subgroup=False, cap=True)
    sp.add_argument("--pi", required=True, help="group spec for pi")
    sp.add_argument("--no-rho", action="store_true", help="skip the Bredon estimate")
    add("bredon", "Bredon cohomology beside relative cohomology", coeffs=True)
    sp = add("spectral", "pages 1 and 2 of the spectral sequence", coeffs=True)
    sp.add_argument("--p", type=int, default=None, help="columns of page 1 (default: max degree)")
    sp.add_argument("--q", type=int, default=None, help="rows (default: min(max degree, 2))")
    sp = add("verify", "run the verification suites", group=False, subgroup=False)
    sp.add_argument("--suite", action="append", default=[], help="restrict to a suite (repeatable)")
    return p


def job_from_args(ns: argparse.Namespace) -> JobSpec:
    extra = {}
    for key in ("resolution", "pi", "no_rho", "p", "q"):
        if hasattr(ns, key):
            extra[key] = getattr(ns, key)
    if ns.command == "verify":
        extra["suites"] = ns.suite
    output = "json" if ns.json else "csv" if ns.csv else "text"
    return JobSpec(command=ns.command, group=getattr(ns, "group", None), subgroup=getattr(ns, "subgroup", None),
                   coeffs=getattr(ns, "coeffs", None), max_degree=ns.max_degree, cap=getattr(ns, "cap", 3),
                   oracles=tuple(getattr(ns, "oracle", ())), output=output, cache_dir=ns.cache_dir, seed=ns.seed,
                   order_cap=ns.order_cap, extra=extra)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        job = job_from_args(ns)
        if job.command == "verify":
            from .verify import SUITES
            bad = [s for s in job.extra["suites"] if s not in SUITES]
            if bad:
                raise SpecError("suite", f"unknown suite {bad[0]!r}; choose from {', '.join(SUITES)}")
        report, code = run(job)
    except (SpecError, RangeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (OrderCapError, RankCapError) as e:
        print(f"cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    writer = {"json": to_json, "csv": to_csv, "text": to_text}[job.output]
    sys.stdout.write(writer(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
