import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from halfflag import IncidenceStructure, PermGroup, PointSet, parse_permutation
from halfflag.io import (
    FormatError,
    format_design,
    format_group,
    format_set,
    parse_design,
    parse_group,
    parse_set,
    read_group,
    write_group,
)

import oracles


def test_group_round_trip(tmp_path):
    g = oracles.affine_line(7)
    p = tmp_path / "g.grp"
    write_group(g, p, order=42)
    h = read_group(p)
    assert h.generators == g.generators and h.label == "AGL(1,7)"
    assert parse_group(p.read_text()).declared_order == 42


@pytest.mark.parametrize(
    "text",
    [
        "gen (1,2)\n",
        "degree 3\ngen (1,4)\n",
        "degree x\n",
        "degree 3\nfoo 1\n",
        "degree 3\norder 5\ngen (1,2)\n",
    ],
)
def test_group_parse_errors(text):
    with pytest.raises(FormatError):
        parse_group(text)


def test_comments_and_blank_lines():
    g = parse_group("# a comment\n\ndegree 4\n  gen (1,2,3,4)\n").group
    assert g.order() == 4


def test_set_and_design_round_trip():
    s = PointSet(9, [2, 5, 9])
    assert parse_set(format_set(s)) == s
    d = IncidenceStructure(7, [(1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 7), (5, 6, 1), (6, 7, 2), (7, 1, 3)])
    assert parse_design(format_design(d)) == d


@pytest.mark.parametrize("text", ["set 1,2\n", "degree 3\nset 1,x\n", "degree 3\nset 4\n", "degree 3\nblock 1\n"])
def test_set_parse_errors(text):
    with pytest.raises(FormatError):
        parse_set(text)


@pytest.mark.parametrize("text", ["block 1,2\n", "v 3\nblock 1,5\n", "v 3\n"])
def test_design_parse_errors(text):
    with pytest.raises(FormatError):
        parse_design(text)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.permutations(list(range(1, 8))), min_size=1, max_size=3))
def test_group_text_round_trip_is_exact(imgs):
    from halfflag import Permutation

    g = PermGroup([Permutation(i) for i in imgs], 7)
    h = parse_group(format_group(g)).group
    assert h.generators == g.generators
    assert parse_permutation(str(g.generators[0]), 7) == g.generators[0]
