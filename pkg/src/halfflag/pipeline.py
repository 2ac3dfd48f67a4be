"""The four-step search for half-flag-transitive designs of a given action.

1. Arithmetic sieve on (v, b, r, k, lambda).
2. Subgroups H of index b.
3. Pairs of equal-size H-orbits whose union has size k.
4. B = O1 u O2 must have exactly b images, and the resulting design is
   checked from scratch.

Each b ends at the first step that leaves nothing to try. An elimination
only counts when the subgroup list behind it is complete (exhaustive search
or a fixture that claims completeness); otherwise the b is left open.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .action import is_2_transitive, is_primitive, subdegrees
from .design import (
    DesignAxiomError,
    DesignParams,
    HalfFlagWitness,
    IncidenceStructure,
    classify_parameters,
    is_half_flag_transitive,
)
from .group import DEFAULT_ORBIT_CAP, PermGroup
from .io import write_design, write_set
from .perm import PointSet
from .sieve import CandidateAction, ParamTuple, group_by_b, step1_enumerate
from .subgroups import EXHAUSTIVE, FIXTURE, PARTIAL, SearchBudget, SubgroupClassReport, subgroups_of_index

STEP1 = "eliminated@Step1"
STEP2 = "eliminated@Step2"
STEP3 = "eliminated@Step3"
STEP4 = "eliminated@Step4"
FOUND = "FOUND"


@dataclass(frozen=True)
class PipelineConfig:
    budget: SearchBudget = field(default_factory=SearchBudget)
    orbit_cap: int = DEFAULT_ORBIT_CAP
    rmax_filter: bool = True
    workers: int = 1

    def __post_init__(self):
        if self.orbit_cap < 1 or self.workers < 1:
            raise ValueError("orbit cap and worker count must be positive")


@dataclass
class Verdict:
    b_expected: int
    block_orbit_size: int
    params: DesignParams | None = None
    half_flag: HalfFlagWitness | None = None
    lambda_bound: bool | None = None
    primitive: bool | None = None
    reason: str = ""
    base_block: PointSet | None = None
    design: IncidenceStructure | None = None

    @property
    def orbit_ok(self) -> bool:
        return self.block_orbit_size == self.b_expected

    @property
    def passed(self) -> bool:
        return bool(self.orbit_ok and self.params is not None and self.half_flag and self.lambda_bound and self.primitive)

    def to_dict(self) -> dict:
        out = {
            "b_expected": self.b_expected,
            "block_orbit_size": self.block_orbit_size,
            "passed": self.passed,
            "reason": self.reason,
        }
        if self.params is not None:
            p = self.params
            out["params"] = {"v": p.v, "b": p.b, "r": p.r, "k": p.k, "lambda": p.lam}
        if self.half_flag is not None:
            out["half_flag"] = bool(self.half_flag)
            out["restricted_orbits"] = list(self.half_flag.restricted_orbits)
            out["block_stabilizer_order"] = self.half_flag.stabilizer_order
            out["block_stabilizer_signature"] = list(self.half_flag.stabilizer_signature)
        if self.lambda_bound is not None:
            out["lambda_bound"] = self.lambda_bound
        if self.primitive is not None:
            out["primitive"] = self.primitive
        if self.base_block is not None:
            out["base_block"] = list(self.base_block.members)
        return out


def verify_design_candidate(
    g: PermGroup, o1: PointSet, o2: PointSet, b_expected: int, cap: int = DEFAULT_ORBIT_CAP
) -> Verdict:
    """Step 4 for the base block B = o1 u o2."""
    if len(o1) != len(o2) or not o1.isdisjoint(o2):
        raise ValueError("the two orbits must be disjoint and of equal size")
    B = o1 | o2
    if not 2 < len(B) < g.degree - 1:
        raise ValueError(f"block size {len(B)} violates 2 < k < v-1")
    size, blocks = g.set_orbit(B, cap=cap, keep=True)
    if size != b_expected:
        return Verdict(b_expected, size, reason=f"|B^G| = {size} != {b_expected}", base_block=B)
    d = IncidenceStructure(g.degree, blocks)
    try:
        params = classify_parameters(d)
    except DesignAxiomError as e:
        return Verdict(b_expected, size, reason=f"not a 2-design: {e}", base_block=B)
    hf = is_half_flag_transitive(g, d)
    lam_ok = params.lam >= params.gcd_r_2lam ** 2
    prim = is_primitive(g)
    if hf and lam_ok and not prim:
        raise AssertionError("half-flag-transitive design with lambda >= gcd(r,2lambda)^2 on an imprimitive group")
    if not hf:
        reason = f"not half-flag-transitive: {hf.reason}"
    elif not lam_ok:
        reason = "lambda < gcd(r, 2 lambda)^2"
    else:
        reason = "design verified"
    return Verdict(b_expected, size, params, hf, lam_ok, prim, reason, B, d)


@dataclass
class ClassTrail:
    signature: tuple[int, ...]
    order: int
    label: str | None
    pairs_tried: list[tuple[int, int]] = field(default_factory=list)
    verdicts: list[Verdict] = field(default_factory=list)


@dataclass
class BOutcome:
    b: int
    tuples: list[ParamTuple]
    stage: str
    completeness: str
    classes: list[ClassTrail] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)

    @property
    def found(self) -> list[Verdict]:
        return [v for c in self.classes for v in c.verdicts if v.passed]

    @property
    def resolved(self) -> bool:
        return self.stage == FOUND or self.completeness != PARTIAL

    def to_dict(self) -> dict:
        return {
            "b": self.b,
            "stage": self.stage if self.resolved else f"open (reached {self.stage.split('@')[-1]})",
            "completeness": self.completeness,
            "k_values": sorted({t.k for t in self.tuples}),
            "tuples": [{"r": t.r, "k": t.k, "lambda": t.lam} for t in self.tuples],
            "classes": [
                {
                    "label": c.label,
                    "order": c.order,
                    "signature": list(c.signature),
                    "pairs_tried": [list(p) for p in c.pairs_tried],
                    "verdicts": [v.to_dict() for v in c.verdicts],
                }
                for c in self.classes
            ],
            "diagnostics": self.diagnostics,
        }


@dataclass
class CaseReport:
    label: str
    v: int
    stab_order: int
    r_max: int
    step1: list[ParamTuple]
    outcomes: list[BOutcome]
    notes: list[str] = field(default_factory=list)

    @property
    def completeness(self) -> str:
        kinds = {o.completeness for o in self.outcomes if o.stage != FOUND}
        if PARTIAL in kinds:
            return PARTIAL
        if FIXTURE in kinds:
            return FIXTURE
        return EXHAUSTIVE

    @property
    def found(self) -> list[Verdict]:
        return [v for o in self.outcomes for v in o.found]

    @property
    def summary(self) -> str:
        """Outcome: the step that finished off the case, or FOUND."""
        if not self.step1:
            return "Step 1"
        if self.found:
            return FOUND
        if any(not o.resolved for o in self.outcomes):
            return "open (partial)"
        last = max(int(o.stage[-1]) for o in self.outcomes)
        return f"Step {last}"

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "v": self.v,
            "stab_order": self.stab_order,
            "r_max": self.r_max,
            "summary": self.summary,
            "completeness": self.completeness,
            "step1_count": len(self.step1),
            "b_values": [o.b for o in self.outcomes],
            "outcomes": [o.to_dict() for o in self.outcomes],
            "found": [v.to_dict() for v in self.found],
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    def to_markdown(self) -> str:
        lines = [
            f"### {self.label} (v = {self.v}, |G_a| = {self.stab_order}, r_max = {self.r_max})",
            "",
            f"Step 1 tuples: {len(self.step1)}; outcome: {self.summary}; completeness: {self.completeness}",
            "",
        ]
        if self.outcomes:
            lines += ["| b | k | H orbit lengths | outcome |", "|---|---|---|---|"]
            for o in self.outcomes:
                ks = ",".join(str(k) for k in sorted({t.k for t in o.tuples}))
                sigs = "; ".join(", ".join(map(str, c.signature)) for c in o.classes) or "-"
                stage = o.to_dict()["stage"]
                if o.stage == FOUND:
                    stage = "FOUND " + "; ".join(str(v.params) for v in o.found)
                lines.append(f"| {o.b} | {ks} | {sigs} | {stage} |")
        return "\n".join(lines) + "\n"

    def write_found(self, outdir: str | Path) -> list[Path]:
        """Write each found design and its base block; returns the paths."""
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        paths = []
        for i, v in enumerate(self.found, 1):
            p = v.params
            stem = f"{self.label}-{p.v}-{p.k}-{p.lam}-{i}".replace("/", "_")
            write_design(v.design, outdir / f"{stem}.design")
            write_set(v.base_block, outdir / f"{stem}.set")
            paths += [outdir / f"{stem}.design", outdir / f"{stem}.set"]
        return paths


def _check_realizes(c: CandidateAction, g: PermGroup) -> None:
    if g.degree != c.v:
        raise ValueError(f"group has degree {g.degree}, case {c.label} needs {c.v}")
    if not g.is_transitive():
        raise ValueError("group is not transitive")
    if g.order() != c.v * c.stab_order:
        raise ValueError(f"point stabilizer has order {g.order() // g.degree}, case {c.label} needs {c.stab_order}")


def _run_b(g: PermGroup, b: int, tuples: list[ParamTuple], config: PipelineConfig, classes_report: SubgroupClassReport) -> BOutcome:
    ks = {t.k for t in tuples}
    rep = classes_report
    out = BOutcome(b, tuples, STEP2, rep.completeness, diagnostics=list(rep.diagnostics))
    if not rep.classes:
        return out
    out.stage = STEP3
    any_pair = False
    for cls in rep.classes:
        orbs = [PointSet(g.degree, o) for o in cls.group.orbits()]
        trail = ClassTrail(cls.signature, cls.order, cls.label)
        for i, j in cls.equal_size_pairs():
            if 2 * len(orbs[i]) not in ks:
                continue
            any_pair = True
            trail.pairs_tried.append((i + 1, j + 1))
            trail.verdicts.append(verify_design_candidate(g, orbs[i], orbs[j], b, config.orbit_cap))
        out.classes.append(trail)
    if any_pair:
        out.stage = FOUND if out.found else STEP4
    return out


def _subgroups(args):
    g, b, budget = args
    return subgroups_of_index(g, b, budget)


def run_case(
    c: CandidateAction,
    g: PermGroup,
    config: PipelineConfig | None = None,
    fixtures: dict[int, list[PermGroup]] | None = None,
    fixtures_complete: bool = False,
) -> CaseReport:
    """Run all four steps for one candidate action.

    ``fixtures`` maps b to verified subgroup classes. With
    ``fixtures_complete`` a b missing from it is taken to have no subgroup
    of that index; otherwise such a b is searched.
    """
    config = config or PipelineConfig()
    _check_realizes(c, g)
    step1 = step1_enumerate(c.v, c.stab_order, config.rmax_filter, c.r_max)
    report = CaseReport(c.label, c.v, c.stab_order, c.r_max, step1, [])
    if not step1:
        return report
    by_b = group_by_b(step1)
    reports: dict[int, SubgroupClassReport] = {}
    todo = []
    for b in by_b:
        if fixtures is not None and (b in fixtures or fixtures_complete):
            reports[b] = subgroups_of_index(g, b, config.budget, fixtures.get(b, []))
            if b not in fixtures:
                reports[b].diagnostics = ["fixture catalog lists no subgroup of this index"]
        else:
            budget = SearchBudget(
                config.budget.parent_order_bound, config.budget.target_order_bound, config.budget.seconds, config.budget.seed + b
            )
            todo.append((g, b, budget))
    if config.workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(config.workers) as ex:
            for (_, b, _), rep in zip(todo, ex.map(_subgroups, todo)):
                reports[b] = rep
    else:
        for args in todo:
            reports[args[1]] = _subgroups(args)
    for b, tuples in by_b.items():
        report.outcomes.append(_run_b(g, b, tuples, config, reports[b]))
    return report


# -- the sporadic candidates ------------------------------------------------------


@dataclass(frozen=True)
class TableRow:
    row: int
    group: str
    stabilizer: str
    v: int
    stab_order: int
    subdegrees: tuple[int, ...]
    r_max: int
    outcome: str
    entry: str  # catalog entry name

    def candidate(self) -> CandidateAction:
        return CandidateAction(f"{self.group}/{self.v}", self.v, self.stab_order, self.subdegrees)


SPORADIC_CANDIDATES = (
    TableRow(1, "M11", "M10", 11, 720, (10,), 10, "Step 1", "M11-11"),
    TableRow(2, "M11", "L2(11)", 12, 660, (11,), 11, "Step 3", "M11-12"),
    TableRow(3, "M11", "M9:2", 55, 144, (18, 36), 18, "Step 1", "M11-55"),
    TableRow(4, "M12", "M11", 12, 7920, (11,), 11, "Step 3", "M12-12"),
    TableRow(5, "M22", "L3(4)", 22, 20160, (21,), 21, "Step 3", "M22-22"),
    TableRow(6, "M22", "A7", 176, 2520, (70, 105), 35, "Step 3", "M22-176"),
    TableRow(7, "M22:2", "L3(4):2", 22, 40320, (21,), 21, "Step 3", "M22.2-22"),
    TableRow(8, "M23", "M22", 23, 443520, (22,), 22, "Step 1", "M23-23"),
    TableRow(9, "M23", "L3(4):2_2", 253, 40320, (252,), 252, "Step 3", "M23-253a"),
    TableRow(10, "M23", "2^4:A7", 253, 40320, (252,), 252, "Step 3", "M23-253b"),
    TableRow(11, "HS", "M22", 100, 443520, (99,), 99, "Step 3", "HS-100"),
    TableRow(12, "HS", "U3(5):2", 176, 252000, (175,), 175, "FOUND", "HS-176"),
    TableRow(13, "HS:2", "M22:2", 100, 887040, (99,), 99, "Step 3", "HS.2-100"),
    TableRow(14, "M24", "M23", 24, 10200960, (23,), 23, "Step 3", "M24-24"),
    TableRow(15, "M24", "M12:2", 1288, 190080, (495, 792), 99, "Step 3", "M24-1288"),
    TableRow(16, "Co3", "McL:2", 276, 1796256000, (275,), 275, "Step 3", "Co3-276"),
)


@dataclass
class RowReport:
    row: TableRow
    r_max: int  # recomputed from the printed (v, |G_a|, subdegrees)
    case: CaseReport | None
    status: str  # "run", "skipped: ..."
    group_subdegrees: tuple[int, ...] | None = None

    @property
    def r_max_matches(self) -> bool:
        return self.r_max == self.row.r_max

    def to_dict(self) -> dict:
        return {
            "row": self.row.row,
            "group": self.row.group,
            "v": self.row.v,
            "stab_order": self.row.stab_order,
            "r_max": self.r_max,
            "r_max_table": self.row.r_max,
            "r_max_matches": self.r_max_matches,
            "group_subdegrees": list(self.group_subdegrees) if self.group_subdegrees else None,
            "group_r_max": self.case.r_max if self.case else None,
            "table_outcome": self.row.outcome,
            "status": self.status,
            "case": self.case.to_dict() if self.case else None,
        }


def classify_sporadic_cases(
    catalog=None,
    rows: list[int] | None = None,
    config: PipelineConfig | None = None,
    run_search: bool = True,
) -> list[RowReport]:
    """Recompute r_max for the candidate rows and run the pipeline where possible.

    Rows whose catalog entry is missing or fails verification are skipped.
    """
    from .data import CatalogError, FixtureCatalog

    catalog = catalog if catalog is not None else FixtureCatalog()
    out = []
    for row in SPORADIC_CANDIDATES:
        if rows is not None and row.row not in rows:
            continue
        c = row.candidate()
        if not run_search:
            out.append(RowReport(row, c.r_max, None, "r_max only"))
            continue
        try:
            entry = catalog.load(row.entry)
        except (CatalogError, OSError, ValueError) as e:
            # Step 1 needs no group at all
            if not step1_enumerate(c.v, c.stab_order, True, c.r_max):
                case = CaseReport(c.label, c.v, c.stab_order, c.r_max, [], [])
                out.append(RowReport(row, c.r_max, case, f"run (Step 1 only; no fixture: {e})"))
            else:
                out.append(RowReport(row, c.r_max, None, f"skipped: {e}"))
            continue
        # the sieve uses the subdegrees of the actual group, which the
        # catalog verified on load; they can differ from the printed row
        sd = tuple(entry.meta["subdegrees"])
        actual = CandidateAction(c.label, c.v, c.stab_order, sd[1:])
        fx = entry.subgroup_fixtures() if "subgroups" in entry.meta else None
        case = run_case(actual, entry.group, config, fx, entry.subgroups_complete)
        if sd != (1, *row.subdegrees):
            case.notes.append(f"group subdegrees {list(sd)} differ from the printed {[1, *row.subdegrees]}")
        out.append(RowReport(row, c.r_max, case, "run", sd))
    return out


def candidates_markdown(reports: list[RowReport]) -> str:
    lines = [
        "| row | G | G_a | v | subdegrees | r_max | table r_max | group subdegrees | outcome | table outcome | completeness |",
        "|---|---|---|---|---|---|---|---|---|---|---|",
    ]
    for rr in reports:
        r = rr.row
        sd = ", ".join(map(str, (1, *r.subdegrees)))
        if rr.case is not None:
            outcome, comp = rr.case.summary, rr.case.completeness
        else:
            outcome, comp = rr.status, "-"
        gsd = ", ".join(map(str, rr.group_subdegrees)) if rr.group_subdegrees else "-"
        lines.append(
            f"| {r.row} | {r.group} | {r.stabilizer} | {r.v} | {sd} | {rr.r_max} | {r.r_max} | {gsd} | {outcome} | {r.outcome} | {comp} |"
        )
    return "\n".join(lines) + "\n"


# -- product type -----------------------------------------------------------------


@dataclass
class ProductActionSpec:
    v0: int
    component: PermGroup

    def __post_init__(self):
        if self.v0 % 2 == 0:
            raise ValueError("the component degree must be odd")
        if self.v0 < 5:
            raise ValueError("the component degree must be at least 5")
        if self.component.degree != self.v0:
            raise ValueError(f"component has degree {self.component.degree}, expected {self.v0}")
        if not is_2_transitive(self.component):
            raise ValueError("component group must be 2-transitive")

    @property
    def v(self) -> int:
        return self.v0 * self.v0

    @property
    def expected_subdegrees(self) -> tuple[int, ...]:
        return tuple(sorted((1, 2 * (self.v0 - 1), (self.v0 - 1) ** 2)))


def product_type_search(spec: ProductActionSpec, config: PipelineConfig | None = None) -> CaseReport:
    """Run the pipeline on K wr S2 in product action on v0^2 points."""
    from .data import wreath_product_action

    g = wreath_product_action(spec.component)
    sd = subdegrees(g)
    if sd != spec.expected_subdegrees:
        raise AssertionError(f"product action has subdegrees {sd}, expected {spec.expected_subdegrees}")
    name = spec.component.label or f"K{spec.v0}"
    c = CandidateAction(f"{name} wr S2/{spec.v}", spec.v, g.order() // spec.v, tuple(d for d in sd if d != 1))
    rep = run_case(c, g, config)
    rep.notes.append(f"group order {g.order()}, subdegrees {list(sd)}")
    return rep

