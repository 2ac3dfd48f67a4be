"""Command-line entry point.

Reports go to stdout; progress goes to stderr through ``logging``.
Exit codes: 0 when every requested assertion holds, 1 when one fails,
2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .action import is_primitive, subdegrees
from .data import (
    CATALOG_ENV,
    CatalogError,
    FixtureCatalog,
    builtin_example,
    builtin_names,
    catalog_verify,
    two_transitive_degree5,
    two_transitive_degree7,
)
from .design import DesignAxiomError, classify_parameters, flag_orbits, from_base_blocks, is_flag_transitive, is_half_flag_transitive
from .group import DEFAULT_ORBIT_CAP, OrbitCapExceeded
from .io import FormatError, parse_group, read_design, read_set
from .pipeline import SPORADIC_CANDIDATES, PipelineConfig, ProductActionSpec, classify_sporadic_cases, product_type_search, candidates_markdown
from .sieve import (
    compare_b_values,
    parse_b_list,
    prop31_witness,
    r_max,
    step1_enumerate,
    theorem1_criteria,
    to_csv,
    to_json,
)
from .subgroups import SearchBudget, SubgroupError, signature_table, signature_table_json, signature_table_markdown

log = logging.getLogger("halfflag")

FORMATS = ("json", "csv", "md")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    orbit_cap: int = DEFAULT_ORBIT_CAP
    target_order_bound: int = 4000
    parent_order_bound: int = 10**6
    seconds: float = 60.0
    seed: int = 0
    workers: int = 1
    fmt: str = "md"
    fixtures: Path | None = None

    def __post_init__(self):
        if min(self.orbit_cap, self.target_order_bound, self.parent_order_bound, self.workers) < 1 or self.seconds <= 0:
            raise UsageError("budgets and worker count must be positive")
        if self.fmt not in FORMATS:
            raise UsageError(f"unknown format {self.fmt!r}")

    @classmethod
    def from_args(cls, a: argparse.Namespace) -> "RunConfig":
        fx = a.fixtures or os.environ.get(CATALOG_ENV)
        return cls(a.orbit_cap, a.target_order_bound, a.parent_order_bound, a.seconds, a.seed, a.workers, a.format, Path(fx) if fx else None)

    def budget(self) -> SearchBudget:
        return SearchBudget(self.parent_order_bound, self.target_order_bound, self.seconds, self.seed)

    def pipeline(self, rmax_filter: bool = True) -> PipelineConfig:
        return PipelineConfig(self.budget(), self.orbit_cap, rmax_filter, self.workers)

    def catalog(self) -> FixtureCatalog:
        return FixtureCatalog(self.fixtures)


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _rows_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
    return buf.getvalue()


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"bad integer list {text!r}") from None


# -- verify -------------------------------------------------------------------


def cmd_verify(a: argparse.Namespace, cfg: RunConfig) -> int:
    if a.name:
        if a.group or a.design or a.block:
            raise UsageError("give either an example name or --group with --design/--block")
        try:
            ex = builtin_example(a.name, cfg.catalog())
        except KeyError as e:
            raise UsageError(str(e.args[0])) from None
        if not ex.bases:
            raise UsageError(f"{a.name} has no base blocks; known designs: psl29-10, biplane-16, imprimitive-25, hs-176-d1, hs-176-d2")
        g, d, label = ex.group, ex.design(), a.name
    else:
        if not a.group or not (a.design or a.block):
            raise UsageError("verify needs a name, or --group plus --design or --block")
        g = parse_group(Path(a.group).read_text(encoding="utf-8")).group
        if a.design:
            d = read_design(a.design)
        else:
            d = from_base_blocks(g, [read_set(p) for p in a.block], cfg.orbit_cap)
        label = Path(a.group).stem
    log.info("verifying %s: %d points, %d blocks", label, d.v, d.b)
    params = classify_parameters(d)
    flags = flag_orbits(g, d)
    hf = is_half_flag_transitive(g, d)
    ft = is_flag_transitive(g, d)
    prim = is_primitive(g)
    crit = theorem1_criteria(params.v, params.k, params.lam, params.r)
    w1, w2 = prop31_witness(params.v, params.k, params.lam, params.r)
    report = {
        "design": label,
        "params": {"v": params.v, "b": params.b, "r": params.r, "k": params.k, "lambda": params.lam},
        "group_order": g.order(),
        "subdegrees": list(subdegrees(g)),
        "flag_orbits": flags.orbit_sizes,
        "block_orbits": flags.block_orbit_sizes,
        "flag_transitive": ft,
        "half_flag_transitive": bool(hf),
        "half_flag_reason": hf.reason,
        "restricted_orbits": list(hf.restricted_orbits),
        "block_stabilizer_order": hf.stabilizer_order,
        "block_stabilizer_signature": list(hf.stabilizer_signature),
        "primitive": prim,
        "primitivity_criteria": {"lambda_bound": crit.lambda_bound, "replication_bound": crit.replication_bound, "gcd_bound": crit.gcd_bound},
        "imprimitivity_witness": {"lambda_below_gcd_sq": w1, "r_at_most_4lambda_k_minus_2": w2},
    }
    failures = []
    if a.assert_half_flag and not hf:
        failures.append(f"half-flag: {hf.reason}")
    if a.assert_flag_transitive and not ft:
        failures.append("not flag-transitive")
    if a.assert_primitive and not prim:
        failures.append("group is imprimitive")
    if a.expect:
        v, k, lam = _ints(a.expect)
        if (params.v, params.k, params.lam) != (v, k, lam):
            failures.append(f"expected 2-({v},{k},{lam}), got {params}")
    report["assertion_failures"] = failures
    if cfg.fmt == "json":
        _emit(json.dumps(report, indent=1))
    elif cfg.fmt == "csv":
        _emit(_rows_csv([report]))
    else:
        yes = {True: "yes", False: "no"}
        _emit(
            f"2-({params.v},{params.k},{params.lam}), b={params.b}, half-flag: {yes[bool(hf)]}, primitive: {yes[prim]}\n"
            f"r = {params.r}, |G| = {g.order()}, flag orbits {flags.orbit_sizes}, flag-transitive: {yes[ft]}\n"
            f"half-flag detail: {hf.reason}\n"
            f"block stabilizer order {hf.stabilizer_order}, orbit lengths {list(hf.stabilizer_signature)}, restricted {list(hf.restricted_orbits)}\n"
            f"primitivity criteria {report['primitivity_criteria']}\n"
            f"imprimitivity witness {report['imprimitivity_witness']}"
        )
    for f in failures:
        log.error("assertion failed: %s", f)
    return 1 if failures else 0


# -- sieve --------------------------------------------------------------------


def cmd_sieve(a: argparse.Namespace, cfg: RunConfig) -> int:
    if a.v < 4 or a.stab_order < 1:
        raise UsageError("--v must be at least 4 and --stab-order positive")
    rm = None
    if a.subdegrees:
        sd = _ints(a.subdegrees)
        if sum(sd) == a.v and sd and sd[0] == 1:
            sd = sd[1:]  # the trivial subdegree was included
        if sum(sd) != a.v - 1:
            raise UsageError(f"nontrivial subdegrees sum to {sum(sd)}, expected {a.v - 1}")
        rm = r_max(a.v, a.stab_order, sd)
    if a.rmax_filter and rm is None:
        raise UsageError("--rmax-filter needs --subdegrees")
    tuples = step1_enumerate(a.v, a.stab_order, a.rmax_filter, rm)
    diff = None
    if a.compare:
        diff = compare_b_values(tuples, parse_b_list(Path(a.compare).read_text(encoding="utf-8")))
    if cfg.fmt == "json":
        out = {"v": a.v, "stab_order": a.stab_order, "r_max": rm, "tuples": json.loads(to_json(tuples, rm)), "b_values": sorted({t.b for t in tuples})}
        if diff is not None:
            out["compare"] = diff.to_dict()
        _emit(json.dumps(out, indent=1))
    elif cfg.fmt == "csv":
        _emit(to_csv(tuples, rm))
    else:
        lines = [f"Step 1 for v = {a.v}, |G_a| = {a.stab_order}" + (f", r_max = {rm}" if rm is not None else ""), ""]
        if not tuples:
            lines.append("no parameter tuples: eliminated at Step 1")
        else:
            lines += ["| b | r | k | lambda | gcd(r,2lambda) |", "|---|---|---|---|---|"]
            lines += [f"| {t.b} | {t.r} | {t.k} | {t.lam} | {t.g2} |" for t in tuples]
            lines += ["", f"{len({t.b for t in tuples})} values of b, {len(tuples)} tuples"]
        if diff is not None:
            lines += [
                "",
                f"only in sieve ({len(diff.only_in_sieve)}): {diff.only_in_sieve}",
                f"only in list ({len(diff.only_in_list)}): {diff.only_in_list}",
                f"common: {len(diff.common)}",
            ]
        _emit("\n".join(lines))
    return 0


# -- classify -----------------------------------------------------------------


def _row_numbers(case: str) -> list[int]:
    for row in SPORADIC_CANDIDATES:
        if case in (row.entry, str(row.row), f"{row.group}/{row.v}"):
            return [row.row]
    raise UsageError(f"unknown case {case!r}; known: {', '.join(r.entry for r in SPORADIC_CANDIDATES)}")


def cmd_classify(a: argparse.Namespace, cfg: RunConfig) -> int:
    if bool(a.case) == bool(a.all):
        raise UsageError("give exactly one of --case or --all")
    rows = None if a.all else _row_numbers(a.case)
    catalog = cfg.catalog()
    log.info("classifying %s with fixtures from %s", "all rows" if rows is None else a.case, catalog.root)
    reports = classify_sporadic_cases(catalog, rows, cfg.pipeline(not a.no_rmax_filter))
    for rr in reports:
        if rr.status.startswith("skipped"):
            log.warning("row %d %s", rr.row.row, rr.status)
        if not rr.r_max_matches:
            log.warning("row %d: recomputed r_max %d differs from %d", rr.row.row, rr.r_max, rr.row.r_max)
    if a.outdir:
        for rr in reports:
            if rr.case is not None:
                for p in rr.case.write_found(a.outdir):
                    log.info("wrote %s", p)
    if cfg.fmt == "json":
        _emit(json.dumps([rr.to_dict() for rr in reports], indent=1))
    elif cfg.fmt == "csv":
        _emit(_rows_csv([{k: v for k, v in rr.to_dict().items() if k != "case"} | {"outcome": rr.case.summary if rr.case else rr.status} for rr in reports]))
    else:
        parts = [candidates_markdown(reports)]
        for rr in reports:
            if rr.case is not None:
                parts.append(rr.case.to_markdown())
                parts += [f"note: {n}\n" for n in rr.case.notes]
                for v in rr.case.found:
                    parts.append(f"FOUND {v.params}, block stabilizer order {v.half_flag.stabilizer_order}, restricted orbits {list(v.half_flag.restricted_orbits)}\n")
        _emit("\n".join(parts))
    return 0


# -- subgroups ----------------------------------------------------------------


def cmd_subgroups(a: argparse.Namespace, cfg: RunConfig) -> int:
    if bool(a.group) == bool(a.case):
        raise UsageError("give exactly one of --group or --case")
    fixtures = None
    if a.group:
        g = parse_group(Path(a.group).read_text(encoding="utf-8")).group
    else:
        entry = cfg.catalog().load(a.case)
        g = entry.group
        if not a.search:
            fixtures = entry.subgroup_fixtures() if "subgroups" in entry.meta else None
    b_values = _ints(a.index)
    if any(b < 1 or g.order() % b for b in b_values):
        raise UsageError(f"every index must divide the group order {g.order()}")
    log.info("subgroups of index %s in a group of order %d", b_values, g.order())
    rows = signature_table(g, b_values, cfg.budget(), fixtures)
    if cfg.fmt == "json":
        _emit(signature_table_json(rows))
    elif cfg.fmt == "csv":
        _emit(_rows_csv([{"b": r.b, "order": c.order, "signature": list(c.signature), "completeness": c.completeness} for r in rows for c in r.report.classes]))
    else:
        _emit(signature_table_markdown(rows))
    return 0


# -- product-type search ------------------------------------------------------


def _components(v0: int) -> dict:
    if v0 == 5:
        return two_transitive_degree5()
    if v0 == 7:
        return two_transitive_degree7()
    raise UsageError("components are built in for v0 = 5 and v0 = 7 only")


def cmd_product_search(a: argparse.Namespace, cfg: RunConfig) -> int:
    comps = _components(a.v0)
    if a.component:
        if a.component not in comps:
            raise UsageError(f"unknown component {a.component!r}; known: {', '.join(comps)}")
        comps = {a.component: comps[a.component]}
    reports = []
    for name, k in comps.items():
        log.info("product action of %s wr S2 on %d points", name, a.v0**2)
        reports.append(product_type_search(ProductActionSpec(a.v0, k), cfg.pipeline(not a.no_rmax_filter)))
    found = [v for r in reports for v in r.found]
    verdict = (
        "no half-flag-transitive design with lambda >= gcd(r,2lambda)^2 found"
        if not found
        else f"{len(found)} half-flag-transitive design(s) with lambda >= gcd(r,2lambda)^2 found"
    )
    if any(r.completeness == "partial" for r in reports) and not found:
        verdict += " (search partial for some components)"
    if cfg.fmt == "json":
        _emit(json.dumps({"v0": a.v0, "verdict": verdict, "cases": [r.to_dict() for r in reports]}, indent=1))
    elif cfg.fmt == "csv":
        _emit(_rows_csv([{"case": r.label, "summary": r.summary, "completeness": r.completeness, "step1_count": len(r.step1)} for r in reports]))
    else:
        _emit("\n".join([r.to_markdown() + "".join(f"note: {n}\n" for n in r.notes) for r in reports] + [verdict]))
    # a find would contradict the expectation this command checks
    return 1 if found else 0


# -- catalog ------------------------------------------------------------------


def cmd_catalog_verify(a: argparse.Namespace, cfg: RunConfig) -> int:
    results = catalog_verify(cfg.fixtures)
    rows = [{"entry": r.name, "ok": r.ok, "detail": r.message} for r in results]
    if cfg.fmt == "json":
        _emit(json.dumps(rows, indent=1))
    elif cfg.fmt == "csv":
        _emit(_rows_csv(rows))
    else:
        _emit("\n".join(f"{'pass' if r['ok'] else 'FAIL'} {r['entry']}: {r['detail']}" for r in rows))
    return 0 if all(r.ok for r in results) else 1


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="md")
    common.add_argument("--fixtures", help=f"catalog directory (default: ${CATALOG_ENV} or the packaged catalog)")
    common.add_argument("--orbit-cap", type=int, default=DEFAULT_ORBIT_CAP)
    common.add_argument("--target-order-bound", type=int, default=4000)
    common.add_argument("--parent-order-bound", type=int, default=10**6)
    common.add_argument("--seconds", type=float, default=60.0, help="time budget per subgroup search")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="halfflag", description="Half-flag-transitive 2-design search and verification.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="verify a design against a group")
    s.add_argument("name", nargs="?", help=f"built-in example ({', '.join(builtin_names())})")
    s.add_argument("--group")
    s.add_argument("--design")
    s.add_argument("--block", action="append", help="base block set file (repeatable)")
    s.add_argument("--assert-half-flag", action="store_true")
    s.add_argument("--assert-flag-transitive", action="store_true")
    s.add_argument("--assert-primitive", action="store_true")
    s.add_argument("--expect", help="v,k,lambda the design must have")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("sieve", parents=[common], help="Step-1 parameter sieve")
    s.add_argument("--v", type=int, required=True)
    s.add_argument("--stab-order", type=int, required=True)
    s.add_argument("--subdegrees", help="comma-separated subdegrees")
    s.add_argument("--rmax-filter", action="store_true")
    s.add_argument("--compare", help="file with a list of b values")
    s.set_defaults(func=cmd_sieve)

    s = sub.add_parser("classify", parents=[common], help="run the pipeline on the sporadic candidate rows")
    s.add_argument("--case", help="catalog entry (e.g. HS-176) or row number")
    s.add_argument("--all", action="store_true")
    s.add_argument("--no-rmax-filter", action="store_true")
    s.add_argument("--outdir", help="write found designs here")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("subgroups", parents=[common], help="conjugacy classes of subgroups of given index")
    s.add_argument("--group")
    s.add_argument("--case")
    s.add_argument("--index", required=True, help="comma-separated indices")
    s.add_argument("--search", action="store_true", help="ignore catalog subgroup fixtures")
    s.set_defaults(func=cmd_subgroups)

    s = sub.add_parser("product-search", parents=[common], help="product action K wr S2 on v0^2 points")
    s.add_argument("--v0", type=int, required=True)
    s.add_argument("--component")
    s.add_argument("--all-components", action="store_true", help="default; kept for explicitness")
    s.add_argument("--no-rmax-filter", action="store_true")
    s.set_defaults(func=cmd_product_search)

    s = sub.add_parser("catalog-verify", parents=[common], help="re-check every catalog entry")
    s.set_defaults(func=cmd_catalog_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(logging.INFO if a.verbose else logging.WARNING)
    log.propagate = False
    try:
        cfg = RunConfig.from_args(a)
        return a.func(a, cfg)
    except (UsageError, FormatError, CatalogError, SubgroupError, DesignAxiomError, OSError, ValueError) as e:
        log.error("%s", e)
        return 2
    except (AssertionError, OrbitCapExceeded) as e:
        log.error("assertion failed: %s", e)
        return 1


if __name__ == "__main__":
    sys.exit(main())
