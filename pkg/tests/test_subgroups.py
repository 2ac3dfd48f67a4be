from collections import Counter

import numpy as np
import pytest

from halfflag import PermGroup, SearchBudget, parse_permutation, subgroups_of_index
from halfflag.data import FixtureCatalog
from halfflag.io import FormatError, format_group
from halfflag.subgroups import (
    EXHAUSTIVE,
    FIXTURE,
    PARTIAL,
    ElementTable,
    SubgroupError,
    all_subgroups_bruteforce,
    load_subgroup_fixture,
    orbit_signature,
    signature_table,
    signature_table_json,
    signature_table_markdown,
    targeted_subgroups,
    verify_subgroup,
)

import oracles

GROUPS = [g for g in oracles.small_groups() if g.order() <= 120]


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


@pytest.mark.parametrize("g", GROUPS, ids=lambda g: g.label)
def test_class_census_matches_brute_force(g):
    expected = Counter(oracles.subgroup_classes(oracles.elements(g), g.degree))
    got = Counter()
    for b in _divisors(g.order()):
        rep = subgroups_of_index(g, b, SearchBudget(seconds=120))
        assert rep.completeness == EXHAUSTIVE
        for c in rep.classes:
            assert c.order * b == g.order()
            assert c.group.is_subgroup_of(g)
            got[(c.order, c.signature)] += 1
    assert got == expected


@pytest.mark.parametrize("g, count", [(oracles.symmetric(4), 11), (oracles.symmetric(5), 19), (oracles.alternating(5), 9)], ids=["S4", "S5", "A5"])
def test_known_class_counts(g, count):
    # [DERIVED] numbers of conjugacy classes of subgroups, frozen from the brute-force oracle
    total = sum(len(subgroups_of_index(g, b).classes) for b in _divisors(g.order()))
    assert total == count


def test_package_bruteforce_agrees_with_test_oracle():
    g = oracles.symmetric(4)
    assert set(all_subgroups_bruteforce(g)) == oracles.all_subgroups(oracles.elements(g), 4)


def test_m11_point_stabilizer_class():
    m11 = FixtureCatalog().load("M11-11").group
    rep = subgroups_of_index(m11, 11)
    assert rep.completeness == EXHAUSTIVE
    assert rep.signatures() == [(1, 10)]


def test_element_table_lookup_and_products():
    g = oracles.affine_line(7)
    t = ElementTable(g)
    assert t.N == 42
    elems = sorted(oracles.elements(g))
    for e in elems[:10]:
        i = t.index_of(np.array([e], dtype=np.int32))[0]
        assert tuple(t.E[i]) == e
        assert tuple(t.E[t.inv[i]]) == oracles.inv(e)
    a, s = 5, 17
    assert tuple(t.E[t.mul(np.array([a]), s)[0]]) == oracles.mul(tuple(t.E[a]), tuple(t.E[s]))
    assert Counter(t.orders.tolist()) == Counter(oracles.closure([e], 7).__len__() for e in elems)
    with pytest.raises(SubgroupError):
        t.index_of(np.array([[1, 0, 2, 3, 4, 5, 6]], dtype=np.int32))


def test_element_table_conjugacy_classes():
    g = oracles.symmetric(5)
    t = ElementTable(g)
    labels = t.class_of
    # S5 has 7 classes of elements, of sizes 1, 10, 15, 20, 20, 30, 24
    assert sorted(Counter(labels.tolist()).values()) == [1, 10, 15, 20, 20, 24, 30]


def test_deadline_marks_result_partial():
    g = oracles.symmetric(6)
    rep = subgroups_of_index(g, 6, SearchBudget(seconds=1e-9))
    assert rep.completeness == PARTIAL
    assert rep.diagnostics


def test_targeted_search_returns_genuine_subgroups():
    g = oracles.symmetric(6)
    budget = SearchBudget(parent_order_bound=10, seconds=5, seed=1)
    rep = subgroups_of_index(g, 30, budget)
    assert rep.completeness == PARTIAL
    for c in rep.classes:
        assert c.order == 24 and c.group.is_subgroup_of(g)
    groups, diag = targeted_subgroups(g, 24, budget)
    assert all(h.order() == 24 for h in groups) and isinstance(diag, list)


def test_trivial_indices():
    g = oracles.symmetric(4)
    assert subgroups_of_index(g, 1).classes[0].order == 24
    assert subgroups_of_index(g, 24).classes[0].order == 1
    with pytest.raises(SubgroupError):
        subgroups_of_index(g, 5)


def test_fixture_path_and_verification(tmp_path):
    g = oracles.symmetric(4)
    h = oracles.group_from_cycles(4, [(1, 2, 3, 4)], [(1, 3)])
    rep = subgroups_of_index(g, 3, fixtures=[h])
    assert rep.completeness == FIXTURE and rep.signatures() == [(4,)]
    bad = oracles.group_from_cycles(4, [(1, 2)])
    with pytest.raises(SubgroupError):
        subgroups_of_index(g, 3, fixtures=[bad])
    a4 = oracles.alternating(4)
    with pytest.raises(SubgroupError):
        verify_subgroup(a4, oracles.group_from_cycles(4, [(1, 2)]))

    p = tmp_path / "h.grp"
    p.write_text(format_group(h, order=8))
    assert load_subgroup_fixture(g, p).order() == 8
    p.write_text(format_group(h, order=12))
    with pytest.raises(SubgroupError):
        load_subgroup_fixture(g, p)
    p.write_text(format_group(h))
    with pytest.raises(FormatError):
        load_subgroup_fixture(g, p)
    p.write_text("degree 4\norder 2\ngen (1,2)\n")
    with pytest.raises(SubgroupError):
        load_subgroup_fixture(a4, p)


def test_signature_table_outputs():
    g = oracles.affine_line(5)
    rows = signature_table(g, [4, 2, 4])
    assert [r.b for r in rows] == [2, 4]
    md = signature_table_markdown(rows)
    assert "| 4 | 5 | 5 | exhaustive |" in md
    assert signature_table_json(rows).startswith("[")
    assert orbit_signature(g) == (5,)


def test_equal_size_pairs_of_a_class():
    g = PermGroup([parse_permutation("(1,2)(3,4)", 6), parse_permutation("(5,6)", 6)])
    rep = subgroups_of_index(oracles.symmetric(6), 180, fixtures=[g])
    c = rep.classes[0]
    orbs = c.group.orbits()
    assert [(len(orbs[i]), len(orbs[j])) for i, j in c.equal_size_pairs()] == [(2, 2), (2, 2), (2, 2)]
