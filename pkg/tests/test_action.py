import pytest

from halfflag import find_block_system, is_2_transitive, is_primitive, minimal_block_system, orbit_partition, rank, subdegrees
from halfflag.action import NotTransitiveError
from halfflag.data import builtin_example

import oracles

TRANSITIVE = [g for g in oracles.small_groups() if g.is_transitive()]
TRANSITIVE += [builtin_example(n).group for n in ("psl29-10", "biplane-16")]
TRANSITIVE.append(oracles.group_from_cycles(9, [(1, 2, 3), (4, 5, 6), (7, 8, 9)], [(1, 4, 7), (2, 5, 8), (3, 6, 9)], label="C3xC3 regular"))


@pytest.mark.parametrize("g", TRANSITIVE, ids=lambda g: g.label)
def test_subdegrees_and_primitivity_match_enumeration(g):
    elems = oracles.elements(g)
    assert subdegrees(g) == oracles.subdegrees(elems, g.degree)
    assert rank(g) == len(subdegrees(g))
    assert is_primitive(g) == oracles.is_primitive(elems, g.degree)


@pytest.mark.parametrize("g", TRANSITIVE, ids=lambda g: g.label)
def test_block_system_is_invariant_partition(g):
    bs = find_block_system(g)
    if bs is None:
        return
    assert not bs.is_trivial()
    assert bs.class_size * bs.class_count == g.degree
    classes = {c.key for c in bs.classes}
    for p in g.generators:
        assert {c.image(p).key for c in bs.classes} == classes


def test_minimal_block_system_for_dihedral():
    # the square's diagonals form the only block system through 1 and 3
    g = oracles.dihedral(4)
    bs = minimal_block_system(g, 1, 3)
    assert [c.members for c in bs.classes] == [(1, 3), (2, 4)]
    assert minimal_block_system(g, 1, 2) is None


def test_two_transitivity():
    assert is_2_transitive(oracles.symmetric(5))
    assert is_2_transitive(oracles.affine_line(7))
    assert not is_2_transitive(oracles.dihedral(7))
    assert not is_2_transitive(oracles.group_from_cycles(4, [(1, 2)], label="intransitive"))


def test_intransitive_group_raises():
    g = oracles.group_from_cycles(5, [(1, 2, 3)])
    with pytest.raises(NotTransitiveError):
        subdegrees(g)
    with pytest.raises(NotTransitiveError):
        is_primitive(g)
    assert orbit_partition(g).signature == (1, 1, 3)


def test_equal_size_pairs():
    g = oracles.group_from_cycles(7, [(1, 2), (3, 4)], [(5, 6, 7)])
    pairs = orbit_partition(g).equal_size_pairs()
    assert [(a.members, b.members) for a, b in pairs] == [((1, 2), (3, 4))]


def test_minimal_block_system_argument_errors():
    g = oracles.cyclic(6)
    with pytest.raises(ValueError):
        minimal_block_system(g, 1, 1)
    with pytest.raises(ValueError):
        minimal_block_system(g, 1, 9)
