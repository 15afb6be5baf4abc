"""Case specification, catalog sweeps, and deterministic JSON reporting.

A case names three groups from the catalog, two subgroups of the relevant
products by generator pairs, two catalog modules, a field, and a mode.
Sweeps enumerate all subgroup pairs under an index cap with catalog
modules, in a fixed order, with optional deterministic subsampling; all
randomness flows from the sweep seed.
"""

from __future__ import annotations

import ast
import hashlib
import itertools
import json
import random
from dataclasses import dataclass, field as dc_field, asdict

from .groups import Group, ProductGroup, Subgroup, all_subgroups, build_group, direct_product
from .linalg import parse_field, field_name
from .mackey import VerificationReport, verify_case
from .prodsub import ProductSubgroup, diagonal, full_product_subgroup, product_subgroup_from_pairs
from .reps import Rep, perm_rep, random_rep, regular_rep, trivial_rep

SUMMARY_SCHEMA = "bisetrep-summary/v1"


@dataclass
class CaseSpec:
    K: str
    H: str
    G: str
    Y: str
    X: str
    N: str = "trivial"
    M: str = "trivial"
    field: str = "Q"
    mode: str = "char"
    seed: int = 0

    def to_dict(self):
        return asdict(self)


@dataclass
class SweepSpec:
    groups: list
    max_index: int = 12
    dim_cap: int = 6
    fields: tuple = ("Q",)
    seed: int = 0
    case_cap: int | None = None
    sample: int | None = None
    module_kinds: tuple = ("trivial", "perm", "regular")
    mode: str = "char"
    constructive_fraction: float = 0.0

    def __post_init__(self):
        if self.max_index <= 0 or self.dim_cap <= 0:
            raise ValueError("sweep caps must be positive")
        if self.case_cap is not None and self.case_cap <= 0:
            raise ValueError("case cap must be positive")
        if self.sample is not None and self.sample <= 0:
            raise ValueError("sample size must be positive")


class GroupCache:
    """Builds each group spec once so shared factors are shared objects."""

    def __init__(self):
        self._groups: dict[str, Group] = {}
        self._products: dict[tuple[str, str], ProductGroup] = {}
        self._subgroups: dict[tuple[str, str], list] = {}

    def group(self, spec: str) -> Group:
        key = " x ".join(p.strip() for p in spec.split("x"))
        if key not in self._groups:
            self._groups[key] = build_group(spec)
        return self._groups[key]

    def product(self, a_spec: str, b_spec: str) -> ProductGroup:
        key = (a_spec, b_spec)
        if key not in self._products:
            self._products[key] = direct_product(self.group(a_spec), self.group(b_spec))
        return self._products[key]

    def product_subgroups(self, a_spec: str, b_spec: str, max_index: int) -> list[ProductSubgroup]:
        key = (a_spec, b_spec)
        if key not in self._subgroups:
            pg = self.product(a_spec, b_spec)
            self._subgroups[key] = [
                ProductSubgroup(pg, s.elements) for s in all_subgroups(pg)
            ]
        return [s for s in self._subgroups[key] if s.index <= max_index]


def parse_generator_pairs(text: str):
    """Parse "[(a,b),(c,d)]" (or "(a,b)", "full", "diag") into pair lists."""
    t = text.strip()
    if t in ("full", "diag", "trivial"):
        return t
    try:
        val = ast.literal_eval(t)
    except (ValueError, SyntaxError) as exc:
        raise ValueError(f"cannot parse subgroup generators {text!r}") from exc
    if isinstance(val, tuple) and len(val) == 2 and all(isinstance(v, int) for v in val):
        val = [val]
    if not isinstance(val, (list, tuple)):
        raise ValueError(f"subgroup generators must be a list of pairs, got {text!r}")
    out = []
    for item in val:
        if not (isinstance(item, (list, tuple)) and len(item) == 2):
            raise ValueError(f"bad generator pair {item!r}")
        a, b = item
        if not (isinstance(a, int) and isinstance(b, int)):
            raise ValueError(f"generator pair entries must be ints: {item!r}")
        out.append((a, b))
    return out


def resolve_subgroup(pg: ProductGroup, spec: str) -> ProductSubgroup:
    parsed = parse_generator_pairs(spec)
    if parsed == "full":
        return full_product_subgroup(pg)
    if parsed == "diag":
        return diagonal(pg)
    if parsed == "trivial":
        return product_subgroup_from_pairs(pg, [])
    return product_subgroup_from_pairs(pg, parsed)


_PERM_CHOICE: dict = {}


def canonical_perm_subgroup(sub: ProductSubgroup) -> Subgroup | None:
    """Largest proper subgroup of sub, smallest element tuple on ties.

    None when sub is trivial (the permutation module would duplicate the
    trivial one).
    """
    if sub.order == 1:
        return None
    key = (id(sub.ambient), sub.elements)
    if key in _PERM_CHOICE:
        return _PERM_CHOICE[key]
    inner = set(sub.elements)
    best = None
    for cand in all_subgroups(sub.ambient):
        if cand.order >= sub.order or not set(cand.elements) <= inner:
            continue
        if best is None or (cand.order, [-e for e in cand.elements]) > (
            best.order,
            [-e for e in best.elements],
        ):
            best = cand
    _PERM_CHOICE[key] = best
    return best


def build_module(kind: str, sub: ProductSubgroup, fld, dim_cap: int | None = None) -> Rep | None:
    """Catalog module over a subgroup, or None when capped out."""
    if kind == "trivial":
        rep = trivial_rep(sub, fld)
    elif kind == "regular":
        rep = regular_rep(sub, fld)
    elif kind == "perm":
        base = canonical_perm_subgroup(sub)
        if base is None:
            return None
        if base.order == 1:
            # cosets of the trivial subgroup give the regular module again
            return None
        rep = perm_rep(sub, base, fld)
    elif kind.startswith("random"):
        parts = kind.split(":")
        seed = int(parts[1]) if len(parts) > 1 else 0
        budget = int(parts[2]) if len(parts) > 2 else min(4, dim_cap or 4)
        rep = random_rep(sub, budget, seed, fld)
    else:
        raise ValueError(f"unknown module kind {kind!r}")
    if dim_cap is not None and rep.dim > dim_cap:
        return None
    return rep


def run_case(spec: CaseSpec, cache: GroupCache | None = None, with_timings=False, corrupt=None) -> VerificationReport:
    cache = cache or GroupCache()
    fld = parse_field(spec.field)
    kh = cache.product(spec.K, spec.H)
    hg = cache.product(spec.H, spec.G)
    kg = cache.product(spec.K, spec.G)
    y = resolve_subgroup(kh, spec.Y)
    x = resolve_subgroup(hg, spec.X)
    n_rep = build_module(spec.N, y, fld)
    m_rep = build_module(spec.M, x, fld)
    if n_rep is None or m_rep is None:
        raise ValueError("requested module kind is unavailable for this subgroup")
    return verify_case(
        y,
        x,
        n_rep,
        m_rep,
        mode=spec.mode,
        ambient_kg=kg,
        case=spec.to_dict(),
        seed=spec.seed,
        with_timings=with_timings,
        corrupt=corrupt,
    )


@dataclass
class SweepCase:
    index: int
    spec: CaseSpec
    y: ProductSubgroup
    x: ProductSubgroup
    n_rep: Rep
    m_rep: Rep
    ambient_kg: ProductGroup


def enumerate_sweep(spec: SweepSpec, cache: GroupCache | None = None) -> list[SweepCase]:
    """All cases of the sweep in deterministic order, then subsampling."""
    cache = cache or GroupCache()
    cases = []
    idx = 0
    for k_spec, h_spec, g_spec in itertools.product(spec.groups, repeat=3):
        ys = cache.product_subgroups(k_spec, h_spec, spec.max_index)
        xs = cache.product_subgroups(h_spec, g_spec, spec.max_index)
        kg = cache.product(k_spec, g_spec)
        for fname in spec.fields:
            fld = parse_field(fname)
            for y in ys:
                n_mods = [
                    (kind, build_module(kind, y, fld, spec.dim_cap))
                    for kind in spec.module_kinds
                ]
                n_mods = [(k, r) for k, r in n_mods if r is not None]
                for x in xs:
                    m_mods = [
                        (kind, build_module(kind, x, fld, spec.dim_cap))
                        for kind in spec.module_kinds
                    ]
                    m_mods = [(k, r) for k, r in m_mods if r is not None]
                    for (nk, n_rep), (mk, m_rep) in itertools.product(n_mods, m_mods):
                        case = CaseSpec(
                            K=k_spec,
                            H=h_spec,
                            G=g_spec,
                            Y=str(list(_gen_pairs(y))),
                            X=str(list(_gen_pairs(x))),
                            N=nk,
                            M=mk,
                            field=fname,
                            mode=spec.mode,
                            seed=spec.seed,
                        )
                        cases.append(
                            SweepCase(idx, case, y, x, n_rep, m_rep, kg)
                        )
                        idx += 1
    if spec.sample is not None and spec.sample < len(cases):
        rng = random.Random(spec.seed)
        keep = sorted(rng.sample(range(len(cases)), spec.sample))
        cases = [cases[i] for i in keep]
    if spec.case_cap is not None:
        cases = cases[: spec.case_cap]
    return cases


def _gen_pairs(sub: ProductSubgroup):
    pg = sub.ambient
    for g in sub.generating_set():
        yield pg.unpair(g)


def case_id(case: CaseSpec) -> str:
    payload = json.dumps(case.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()[:12]


def run_sweep(spec: SweepSpec, out_dir=None, with_timings=False, progress=None) -> dict:
    """Run every enumerated case; returns a deterministic summary dict."""
    from pathlib import Path

    cases = enumerate_sweep(spec)
    n_construct = 0
    constructive_at = set()
    if spec.constructive_fraction > 0 and cases:
        n_construct = max(1, int(round(len(cases) * spec.constructive_fraction)))
        rng = random.Random(spec.seed + 1)
        constructive_at = set(rng.sample(range(len(cases)), n_construct))
    per_case = []
    failures = []
    for pos, sc in enumerate(cases):
        report = verify_case(
            sc.y,
            sc.x,
            sc.n_rep,
            sc.m_rep,
            mode=sc.spec.mode,
            ambient_kg=sc.ambient_kg,
            case=sc.spec.to_dict(),
            seed=spec.seed,
            with_timings=with_timings,
        )
        if pos in constructive_at and report.ok and sc.spec.mode != "constructive":
            extra = verify_case(
                sc.y,
                sc.x,
                sc.n_rep,
                sc.m_rep,
                mode="constructive",
                ambient_kg=sc.ambient_kg,
                case=sc.spec.to_dict(),
                seed=spec.seed,
            )
            report.verdicts["constructive"] = extra.verdicts.get("constructive", False)
            report.ok = report.ok and extra.ok
        cid = case_id(sc.spec)
        entry = {
            "id": cid,
            "index": sc.index,
            "case": sc.spec.to_dict(),
            "dims": [report.lhs_dim, report.rhs_dim],
            "verdicts": report.verdicts,
            "pass": report.ok,
        }
        per_case.append(entry)
        if not report.ok:
            failures.append({"id": cid, "error": report.error, "case": sc.spec.to_dict()})
        if out_dir is not None:
            path = Path(out_dir)
            path.mkdir(parents=True, exist_ok=True)
            (path / f"case_{sc.index:06d}_{cid}.json").write_text(
                report.to_json(indent=2) + "\n"
            )
        if progress is not None:
            progress(pos + 1, len(cases), report)
    summary = {
        "schema": SUMMARY_SCHEMA,
        "sweep": {
            "groups": list(spec.groups),
            "max_index": spec.max_index,
            "dim_cap": spec.dim_cap,
            "fields": list(spec.fields),
            "seed": spec.seed,
            "case_cap": spec.case_cap,
            "sample": spec.sample,
            "module_kinds": list(spec.module_kinds),
            "mode": spec.mode,
            "constructive_fraction": spec.constructive_fraction,
        },
        "cases_run": len(cases),
        "cases_passed": sum(1 for e in per_case if e["pass"]),
        "cases_failed": sum(1 for e in per_case if not e["pass"]),
        "constructive_checked": n_construct,
        "failures": failures,
        "per_case": per_case,
    }
    return summary


def summary_json(summary: dict) -> str:
    return json.dumps(summary, sort_keys=True, indent=2)
