import json
import shutil

import pytest

from halfflag import builtin_example, catalog_verify, classify_parameters, is_half_flag_transitive, is_primitive, subdegrees
from halfflag.data import (
    CATALOG_ENV,
    CatalogError,
    FixtureCatalog,
    build_affine_biplane,
    builtin_names,
    catalog_root,
    load_entry,
    pair_point,
    point_to_vector,
    two_transitive_degree5,
    two_transitive_degree7,
    vector_to_point,
    wreath_product_action,
)
from halfflag.io import read_group, write_group

import oracles

SMALL_ENTRIES = ("M11-11", "M11-12", "imprimitive-25")


@pytest.fixture
def small_catalog(tmp_path):
    for name in SMALL_ENTRIES:
        shutil.copytree(catalog_root() / name, tmp_path / name)
    return tmp_path


def test_packaged_catalog_verifies():
    results = catalog_verify()
    assert len(results) == 17
    assert all(r.ok for r in results), [r for r in results if not r.ok]
    by = {r.name: r.derived for r in results}
    # [PAPER] HS on 176 points and M11 on 55 points
    assert by["HS-176"] == {"order": 44352000, "stab_order": 252000, "subdegrees": [1, 175]}
    assert by["M11-55"]["subdegrees"] == [1, 18, 36]


def test_corrupted_generator_is_reported_for_that_entry_only(small_catalog):
    p = small_catalog / "M11-12" / "group.grp"
    p.write_text(p.read_text().replace("gen (", "gen (1,1,", 1))
    res = {r.name: r for r in catalog_verify(small_catalog)}
    assert not res["M11-12"].ok and "FormatError" in res["M11-12"].message
    assert res["M11-11"].ok and res["imprimitive-25"].ok


def test_wrong_metadata_is_reported(small_catalog):
    m = small_catalog / "M11-11" / "meta.json"
    meta = json.loads(m.read_text())
    meta["order"] = 7921
    m.write_text(json.dumps(meta))
    res = {r.name: r for r in catalog_verify(small_catalog)}
    assert not res["M11-11"].ok and "order" in res["M11-11"].message
    with pytest.raises(CatalogError):
        load_entry(small_catalog / "M11-11")


def test_round_trip_is_generator_identical(small_catalog, tmp_path):
    for name in SMALL_ENTRIES:
        e = FixtureCatalog(small_catalog).load(name)
        out = tmp_path / f"{name}.grp"
        write_group(e.group, out, order=e.group.order())
        assert read_group(out).generators == e.group.generators


def test_environment_override(small_catalog, monkeypatch):
    monkeypatch.setenv(CATALOG_ENV, str(small_catalog))
    cat = FixtureCatalog()
    assert cat.names() == sorted(SMALL_ENTRIES)
    assert "HS-176" not in cat
    with pytest.raises(CatalogError):
        cat.load("HS-176")


def test_biplane_construction():
    g, d = build_affine_biplane()
    p = classify_parameters(d)
    assert (p.v, p.k, p.lam, p.b) == (16, 6, 2, 16)
    assert g.order() == 48
    hf = is_half_flag_transitive(g, d)
    assert hf and hf.stabilizer_order == 3 and hf.restricted_orbits == (3, 3)
    assert not is_primitive(g)
    # deterministic across calls
    g2, d2 = build_affine_biplane()
    assert g2.generators == g.generators and d2 == d


def test_vector_numbering():
    for p in range(1, 17):
        assert vector_to_point(point_to_vector(p)) == p
    assert point_to_vector(1 + 0b1010) == (0, 1, 0, 1)


@pytest.mark.parametrize("name", ["AGL(1,5)", "A5", "S5"])
def test_wreath_product_action_degree5(name):
    k = two_transitive_degree5()[name]
    g = wreath_product_action(k)
    assert g.degree == 25 and g.order() == 2 * k.order() ** 2
    assert subdegrees(g) == (1, 8, 16)
    swap = g.generators[-1]
    for a in range(1, 6):
        assert swap(pair_point(a, a, 5)) == pair_point(a, a, 5)
    assert swap(pair_point(1, 2, 5)) == pair_point(2, 1, 5)


def test_wreath_product_order_s5():
    assert wreath_product_action(two_transitive_degree5()["S5"]).order() == 28800


def test_wreath_product_errors():
    with pytest.raises(ValueError):
        wreath_product_action(oracles.symmetric(5), m=3)
    with pytest.raises(ValueError):
        wreath_product_action(oracles.group_from_cycles(4, [(1, 2)]))


def test_two_transitive_components():
    orders5 = {n: g.order() for n, g in two_transitive_degree5().items()}
    assert orders5 == {"AGL(1,5)": 20, "A5": 60, "S5": 120}
    orders7 = {n: g.order() for n, g in two_transitive_degree7().items()}
    assert orders7 == {"AGL(1,7)": 42, "L3(2)": 168, "A7": 2520, "S7": 5040}
    for g in [*two_transitive_degree5().values(), *two_transitive_degree7().values()]:
        assert subdegrees(g) == (1, g.degree - 1)


def test_builtin_examples_keep_their_invariants():
    ex = builtin_example("imprimitive-25")
    d = ex.design()
    p = classify_parameters(d)
    assert (p.b, p.r, p.lam) == (100, 16, 2)
    hf = is_half_flag_transitive(ex.group, d)
    assert hf and hf.restricted_orbits == (2, 2)
    assert not is_primitive(ex.group)
    assert "psl29-10" in builtin_names()
    with pytest.raises(KeyError):
        builtin_example("nope")
