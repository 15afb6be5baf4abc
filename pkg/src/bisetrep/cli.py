"""Command-line driver: verify single cases, run catalog sweeps, inspect
groups and subgroup data.  Reports are JSON on stdout; exit code 0 means
pass, 1 means a verified failure, 2 means a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bisets import compose_bisets, stabilizer, transitive_biset
from .groups import build_group, cayley_dump, double_coset_reps
from .harness import CaseSpec, GroupCache, SweepSpec, run_case, run_sweep, summary_json
from .mackey import REPORT_SCHEMA
from .prodsub import conj_t1, star


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="bisetrep",
        description="verify Mackey-style decompositions of induced bimodule tensors",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="verify one case")
    v.add_argument("-K", required=True, help="left group spec, e.g. C2")
    v.add_argument("-H", dest="H", required=True, help="middle group spec")
    v.add_argument("-G", required=True, help="right group spec")
    v.add_argument("--Y", required=True, help='subgroup of KxH: "[(a,b),...]", full, diag')
    v.add_argument("--X", required=True, help="subgroup of HxG, same syntax")
    v.add_argument("--N", default="trivial", help="module kind: trivial|perm|regular|random:<seed>")
    v.add_argument("--M", default="trivial")
    v.add_argument("--field", default="Q", help="Q or F<p>")
    v.add_argument("--mode", default="char", choices=["char", "constructive", "chain"])
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--timings", action="store_true", help="include timings (breaks rerun byte-identity)")
    v.add_argument("--corrupt", default=None, choices=["rhs-action", "lhs-action"],
                   help="testing hook: tamper one action matrix entry")
    v.set_defaults(func=_cmd_verify)

    s = sub.add_parser("sweep", help="verify all subgroup pairs over a group list")
    s.add_argument("--groups", required=True, help="comma-separated group specs")
    s.add_argument("--max-index", type=int, default=12)
    s.add_argument("--dim-cap", type=int, default=6)
    s.add_argument("--fields", default="Q", help="comma-separated, e.g. Q,F2")
    s.add_argument("--mode", default="char", choices=["char", "constructive", "chain"])
    s.add_argument("--modules", default="trivial,perm,regular")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--sample", type=int, default=None, help="deterministic subsample size")
    s.add_argument("--case-cap", type=int, default=None)
    s.add_argument("--constructive-fraction", type=float, default=0.0)
    s.add_argument("--out-dir", default=None, help="write one report file per case")
    s.add_argument("--timings", action="store_true")
    s.set_defaults(func=_cmd_sweep)

    i = sub.add_parser("inspect", help="dump groups, subgroup data, compositions")
    isub = i.add_subparsers(dest="what", required=True)
    ig = isub.add_parser("group", help="group order, classes, Cayley table")
    ig.add_argument("spec")
    ig.add_argument("--table", action="store_true", help="include the Cayley table dump")
    ig.set_defaults(func=_cmd_inspect_group)
    ip = isub.add_parser("prodsub", help="projection/kernel data of a product subgroup")
    ip.add_argument("--left", required=True)
    ip.add_argument("--right", required=True)
    ip.add_argument("--gens", required=True)
    ip.set_defaults(func=_cmd_inspect_prodsub)
    ic = isub.add_parser("compose", help="orbits and stabilizers of a composition")
    ic.add_argument("-K", required=True)
    ic.add_argument("-H", dest="H", required=True)
    ic.add_argument("-G", required=True)
    ic.add_argument("--Y", required=True)
    ic.add_argument("--X", required=True)
    ic.set_defaults(func=_cmd_inspect_compose)
    return parser


def _cmd_verify(args) -> int:
    spec = CaseSpec(
        K=args.K, H=args.H, G=args.G, Y=args.Y, X=args.X,
        N=args.N, M=args.M, field=args.field, mode=args.mode, seed=args.seed,
    )
    report = run_case(spec, with_timings=args.timings, corrupt=args.corrupt)
    print(report.to_json(indent=2))
    return 0 if report.ok else 1


def _cmd_sweep(args) -> int:
    spec = SweepSpec(
        groups=[g.strip() for g in args.groups.split(",") if g.strip()],
        max_index=args.max_index,
        dim_cap=args.dim_cap,
        fields=tuple(f.strip() for f in args.fields.split(",") if f.strip()),
        seed=args.seed,
        case_cap=args.case_cap,
        sample=args.sample,
        module_kinds=tuple(m.strip() for m in args.modules.split(",") if m.strip()),
        mode=args.mode,
        constructive_fraction=args.constructive_fraction,
    )
    summary = run_sweep(spec, out_dir=args.out_dir, with_timings=args.timings)
    print(summary_json(summary))
    return 0 if summary["cases_failed"] == 0 else 1


def _cmd_inspect_group(args) -> int:
    g = build_group(args.spec)
    classes = g.conjugacy_classes()
    out = {
        "schema": REPORT_SCHEMA,
        "kind": "group",
        "name": g.name,
        "order": g.order,
        "generators": list(g.generating_set()),
        "element_names": g.elem_names,
        "num_classes": len(classes),
        "class_sizes": [len(c) for c in classes],
        "class_reps": [c[0] for c in classes],
    }
    if args.table:
        out["cayley"] = cayley_dump(g)
    print(json.dumps(out, sort_keys=True, indent=2))
    return 0


def _cmd_inspect_prodsub(args) -> int:
    cache = GroupCache()
    pg = cache.product(args.left, args.right)
    from .harness import resolve_subgroup

    sub = resolve_subgroup(pg, args.gens)
    out = {
        "schema": REPORT_SCHEMA,
        "kind": "prodsub",
        "ambient": pg.name,
        "order": sub.order,
        "index": sub.index,
        "pairs": [list(pg.unpair(e)) for e in sub.elements],
        "p1": list(sub.p1.elements),
        "p2": list(sub.p2.elements),
        "k1": list(sub.k1.elements),
        "k2": list(sub.k2.elements),
    }
    print(json.dumps(out, sort_keys=True, indent=2))
    return 0


def _cmd_inspect_compose(args) -> int:
    cache = GroupCache()
    kh = cache.product(args.K, args.H)
    hg = cache.product(args.H, args.G)
    kg = cache.product(args.K, args.G)
    from .harness import resolve_subgroup

    y = resolve_subgroup(kh, args.Y)
    x = resolve_subgroup(hg, args.X)
    v_biset = transitive_biset(y)
    u_biset = transitive_biset(x)
    comp = compose_bisets(v_biset, u_biset).use_product_group(kg)
    h_group = kh.right
    dc = double_coset_reps(h_group, y.p2, x.p1)
    orbits = comp.orbits()
    stab_star = []
    for t in dc:
        u_t = u_biset.point_of(hg.pair(t, 0))
        w = comp.orbit_of_pair(0, u_t)
        stab = stabilizer(comp, w, kg)
        zt = star(y, conj_t1(x, t), kg)
        stab_star.append(
            {
                "t": t,
                "point": w,
                "stabilizer_order": stab.order,
                "star_order": zt.order,
                "equal": stab.elements == zt.elements,
            }
        )
    out = {
        "schema": REPORT_SCHEMA,
        "kind": "compose",
        "points": comp.size,
        "orbit_count": len(orbits),
        "orbits": [list(o) for o in orbits],
        "double_coset_count": len(dc),
        "double_coset_reps": list(dc),
        "orbits_match_double_cosets": len(orbits) == len(dc),
        "stabilizers": stab_star,
    }
    print(json.dumps(out, sort_keys=True, indent=2))
    return 0 if out["orbits_match_double_cosets"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
