"""Orbit partitions, subdegrees, block systems and primitivity."""

from __future__ import annotations

from dataclasses import dataclass

from .group import PermGroup
from .perm import PointSet


class NotTransitiveError(ValueError):
    pass


@dataclass(frozen=True)
class OrbitPartition:
    degree: int
    orbits: tuple[PointSet, ...]

    @property
    def signature(self) -> tuple[int, ...]:
        return tuple(sorted(len(o) for o in self.orbits))

    def equal_size_pairs(self) -> list[tuple[PointSet, PointSet]]:
        """All unordered pairs of distinct orbits of the same length."""
        out = []
        for i, a in enumerate(self.orbits):
            for b in self.orbits[i + 1:]:
                if len(a) == len(b):
                    out.append((a, b))
        return out


@dataclass(frozen=True)
class BlockSystem:
    degree: int
    classes: tuple[PointSet, ...]

    @property
    def class_size(self) -> int:
        return len(self.classes[0])

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def is_trivial(self) -> bool:
        return self.class_size in (1, self.degree)


def orbit_partition(g: PermGroup) -> OrbitPartition:
    return OrbitPartition(g.degree, tuple(PointSet(g.degree, o) for o in g.orbits()))


def _require_transitive(g: PermGroup) -> None:
    if not g.is_transitive():
        raise NotTransitiveError("group is not transitive")


def subdegrees(g: PermGroup) -> tuple[int, ...]:
    """Orbit lengths of the stabilizer of point 1, sorted, including the 1.

    The rank is ``len(subdegrees(g))``.
    """
    _require_transitive(g)
    return orbit_partition(g.point_stabilizer(1)).signature


def rank(g: PermGroup) -> int:
    return len(subdegrees(g))


def minimal_block_system(g: PermGroup, alpha: int, beta: int) -> BlockSystem | None:
    """The finest G-invariant partition with ``alpha`` and ``beta`` in one class.

    Returns ``None`` when that partition is the trivial one with a single class.
    """
    _require_transitive(g)
    n = g.degree
    for p in (alpha, beta):
        if not 1 <= p <= n:
            raise ValueError(f"point {p} out of range 1..{n}")
    if alpha == beta:
        raise ValueError("alpha and beta must differ")
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    gens = g._raw
    parent[beta - 1] = alpha - 1
    queue = [(alpha - 1, beta - 1)]
    merges = 1
    while queue and merges < n - 1:
        x, y = queue.pop()
        for s in gens:
            a, b = find(s[x]), find(s[y])
            if a != b:
                parent[b] = a
                merges += 1
                queue.append((a, b))
    if merges >= n - 1:
        return None
    classes: dict[int, list[int]] = {}
    for x in range(n):
        classes.setdefault(find(x), []).append(x + 1)
    parts = sorted(classes.values())
    return BlockSystem(n, tuple(PointSet(n, c) for c in parts))


def find_block_system(g: PermGroup) -> BlockSystem | None:
    """A nontrivial block system, or ``None`` if ``g`` is primitive."""
    _require_transitive(g)
    for beta in range(2, g.degree + 1):
        bs = minimal_block_system(g, 1, beta)
        if bs is not None:
            return bs
    return None


def is_primitive(g: PermGroup) -> bool:
    return find_block_system(g) is None


def is_2_transitive(g: PermGroup) -> bool:
    if not g.is_transitive():
        return False
    if g.degree <= 2:
        return g.degree == 1 or g.order() == 2
    stab = g.point_stabilizer(1)
    return len(stab.orbit(2)) == g.degree - 1
