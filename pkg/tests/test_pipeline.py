import json

import pytest

from halfflag import PointSet, builtin_example, run_case, verify_design_candidate
from halfflag.data import FixtureCatalog, two_transitive_degree5, two_transitive_degree7
from halfflag.pipeline import (
    FOUND,
    STEP1,
    SPORADIC_CANDIDATES,
    PipelineConfig,
    ProductActionSpec,
    classify_sporadic_cases,
    product_type_search,
    candidates_markdown,
)
from halfflag.sieve import CandidateAction
from halfflag.subgroups import SearchBudget

import oracles


@pytest.fixture(scope="module")
def hs():
    e = FixtureCatalog().load("HS-176")
    fx = e.subgroup_fixtures()
    alias = {k: next(h for hs_ in fx.values() for h in hs_ if h.label == v[:-4]) for k, v in e.meta["aliases"].items()}
    return e, alias


def _orbit_pairs(h, size):
    orbs = [PointSet(h.degree, o) for o in h.orbits() if len(o) == size]
    return orbs


def test_hs_h2_pair_is_rejected_at_step4(hs):
    e, alias = hs
    o1, o2 = _orbit_pairs(alias["H2"], 40)
    v = verify_design_candidate(e.group, o1, o2, 23100)
    assert v.block_orbit_size == 3850
    assert not v.orbit_ok and not v.passed
    assert "3850" in v.reason


def test_hs_designs_from_h1_and_h4(hs):
    e, alias = hs
    o1, o2 = _orbit_pairs(alias["H1"], 80)
    v = verify_design_candidate(e.group, o1, o2, 23100)
    assert v.passed
    assert (v.params.v, v.params.k, v.params.lam, v.params.b) == (176, 160, 19080, 23100)
    assert v.half_flag.stabilizer_order == 1920 and v.half_flag.stabilizer_signature == (16, 80, 80)
    o1, o2 = _orbit_pairs(alias["H4"], 64)
    v = verify_design_candidate(e.group, o1, o2, 28875)
    assert v.passed
    assert (v.params.k, v.params.lam, v.params.b) == (128, 15240, 28875)
    assert v.half_flag.stabilizer_order == 1536 and v.half_flag.stabilizer_signature == (48, 64, 64)


def test_candidate_argument_errors():
    g = builtin_example("psl29-10").group
    with pytest.raises(ValueError):
        verify_design_candidate(g, PointSet(10, [1, 2]), PointSet(10, [2, 3]), 30)
    with pytest.raises(ValueError):
        verify_design_candidate(g, PointSet(10, [1]), PointSet(10, [2]), 30)


def test_small_case_found_end_to_end():
    # PSL(2,9) on 10 points: the complete design on 8-subsets is half-flag-transitive
    g = builtin_example("psl29-10").group
    rep = run_case(CandidateAction("PSL(2,9)/10", 10, 36, (9,)), g)
    assert rep.completeness == "exhaustive"
    assert rep.summary == FOUND
    assert [(v.params.k, v.params.lam, v.params.b) for v in rep.found] == [(8, 28, 45)]
    assert {o.b: o.stage for o in rep.outcomes}[30].endswith("Step3")
    d = json.loads(rep.to_json())
    assert d["summary"] == FOUND and d["found"][0]["params"]["k"] == 8


def test_write_found(tmp_path):
    g = builtin_example("psl29-10").group
    rep = run_case(CandidateAction("PSL(2,9)/10", 10, 36, (9,)), g)
    paths = rep.write_found(tmp_path)
    assert len(paths) == 2 and all(p.exists() for p in paths)


def test_imprimitive_group_has_no_large_lambda_case():
    g = builtin_example("imprimitive-25").group
    rep = run_case(CandidateAction("T25", 25, 16, (4, 4, 16)), g, PipelineConfig(rmax_filter=False))
    assert rep.summary == "Step 1" and not rep.found


def test_case_must_match_group():
    g = builtin_example("psl29-10").group
    with pytest.raises(ValueError):
        run_case(CandidateAction("wrong", 10, 72, (9,)), g)


def test_r_max_only_rows():
    reports = classify_sporadic_cases(run_search=False)
    assert len(reports) == 16 and all(r.r_max_matches for r in reports)
    assert "| 12 | HS | U3(5):2 | 176 |" in candidates_markdown(reports)


def test_rows_with_fixtures():
    reports = {r.row.row: r for r in classify_sporadic_cases(rows=[1, 2, 3, 4, 12])}
    assert reports[1].case.summary == "Step 1"
    assert reports[3].case.summary == "Step 1"
    assert reports[2].case.summary == "Step 3"
    assert reports[4].case.summary == "Step 3"
    hs = reports[12].case
    assert hs.summary == FOUND
    assert sorted((v.params.k, v.params.lam) for v in hs.found) == [(128, 15240), (160, 19080)]


def test_rows_with_corrected_subdegrees_note_the_difference():
    reports = classify_sporadic_cases(rows=[11])
    r = reports[0]
    assert r.group_subdegrees == (1, 22, 77)
    assert any("differ" in n for n in r.case.notes)
    assert r.case.summary == "Step 1"


def test_missing_fixture_rows(tmp_path):
    # an empty catalog: rows eliminated by arithmetic still run, the rest are skipped
    reports = {r.row.row: r for r in classify_sporadic_cases(FixtureCatalog(tmp_path), rows=[1, 2])}
    assert reports[1].case is not None and reports[1].case.summary == "Step 1"
    assert reports[2].case is None and reports[2].status.startswith("skipped")


@pytest.mark.parametrize("name", ["AGL(1,5)", "A5", "S5"])
def test_product_search_degree5_default(name):
    rep = product_type_search(ProductActionSpec(5, two_transitive_degree5()[name]))
    assert not rep.found
    assert rep.summary == "Step 1"


def test_product_search_without_filter_a5():
    cfg = PipelineConfig(budget=SearchBudget(seconds=120), rmax_filter=False)
    rep = product_type_search(ProductActionSpec(5, two_transitive_degree5()["A5"]), cfg)
    assert not rep.found
    assert rep.completeness == "exhaustive"


def test_product_spec_errors():
    with pytest.raises(ValueError):
        ProductActionSpec(4, oracles.symmetric(4))
    with pytest.raises(ValueError):
        ProductActionSpec(3, oracles.symmetric(3))
    with pytest.raises(ValueError):
        ProductActionSpec(7, oracles.dihedral(7))
    with pytest.raises(ValueError):
        ProductActionSpec(7, two_transitive_degree5()["S5"])
    spec = ProductActionSpec(7, two_transitive_degree7()["AGL(1,7)"])
    assert spec.v == 49 and spec.expected_subdegrees == (1, 12, 36)


def test_pipeline_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig(orbit_cap=0)
    assert STEP1.endswith("Step1")
    assert len(SPORADIC_CANDIDATES) == 16
