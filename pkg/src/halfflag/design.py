"""Incidence structures, design-axiom checks, and flag-orbit predicates.

Blocks are point sets; the block list is a multiset. Group actions are
computed on the distinct blocks, with multiplicities carried alongside and
required to be invariant.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .group import DEFAULT_ORBIT_CAP, PermGroup, SetOrbit
from .perm import PointSet, encode_rows

# pair counting is only done directly up to this many points
PAIR_COUNT_LIMIT = 400


class DesignAxiomError(ValueError):
    """A design axiom failed; ``axiom`` names it and ``witness`` shows where."""

    def __init__(self, axiom: str, witness, message: str):
        super().__init__(message)
        self.axiom = axiom
        self.witness = witness


class NotAutomorphismError(ValueError):
    pass


class IncidenceStructure:
    """Points ``1..v`` and a nonempty list of blocks (repeats allowed)."""

    def __init__(self, v: int, blocks: Sequence[PointSet | Sequence[int]]):
        if v < 1:
            raise ValueError("v must be positive")
        bl = [b if isinstance(b, PointSet) else PointSet(v, b) for b in blocks]
        if not bl:
            raise ValueError("an incidence structure needs at least one block")
        for b in bl:
            if b.degree != v:
                raise ValueError(f"block of degree {b.degree} in a structure on {v} points")
        self.v = v
        self.blocks = bl
        self._M = None
        self._distinct = None

    @property
    def b(self) -> int:
        return len(self.blocks)

    def __repr__(self) -> str:
        return f"<IncidenceStructure v={self.v} b={self.b}>"

    @property
    def incidence(self) -> np.ndarray:
        """b x v 0/1 matrix."""
        if self._M is None:
            M = np.zeros((self.b, self.v), dtype=np.uint8)
            for i, blk in enumerate(self.blocks):
                M[i, blk.indices()] = 1
            self._M = M
        return self._M

    def _distinct_blocks(self):
        """(keys, rows, multiplicities) for the distinct blocks, in first-seen order."""
        if self._distinct is None:
            counts = Counter(b.key for b in self.blocks)
            seen: dict[bytes, PointSet] = {}
            for b in self.blocks:
                seen.setdefault(b.key, b)
            keys = list(seen)
            self._distinct = (keys, [seen[k] for k in keys], np.array([counts[k] for k in keys]))
        return self._distinct

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, IncidenceStructure)
            and self.v == other.v
            and [b.key for b in self.blocks] == [b.key for b in other.blocks]
        )


@dataclass(frozen=True)
class DesignParams:
    v: int
    b: int
    r: int
    k: int
    lam: int

    @property
    def nontrivial(self) -> bool:
        return 2 < self.k < self.v - 1

    @property
    def fisher(self) -> bool:
        return self.b >= self.v

    @property
    def gcd_r_2lam(self) -> int:
        return gcd(self.r, 2 * self.lam)

    def __str__(self) -> str:
        return f"2-({self.v},{self.k},{self.lam}), b={self.b}, r={self.r}"


@dataclass
class PBDProfile:
    block_sizes: tuple[int, ...]
    lam: int
    replication: dict[int, np.ndarray]  # k -> per-point counts r_alpha^(k)


@dataclass
class FlagOrbitReport:
    total_flags: int
    orbit_sizes: list[int]
    block_orbit_sizes: list[int] = field(default_factory=list)


@dataclass
class HalfFlagWitness:
    holds: bool
    reason: str
    restricted_orbits: tuple[int, ...] = ()
    stabilizer_order: int | None = None
    stabilizer_signature: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.holds


def from_base_blocks(g: PermGroup, bases: Sequence[PointSet], cap: int = DEFAULT_ORBIT_CAP) -> IncidenceStructure:
    """Union of the full G-orbits of the base blocks."""
    blocks: list[PointSet] = []
    for B in bases:
        orb = SetOrbit.compute(g, B, cap=cap)
        blocks.extend(orb.point_sets())
    return IncidenceStructure(g.degree, blocks)


def pair_counts(d: IncidenceStructure) -> np.ndarray:
    """v x v matrix of how many blocks contain each pair (diagonal = r)."""
    if d.v > PAIR_COUNT_LIMIT:
        raise NotImplementedError(f"pair counting is limited to v <= {PAIR_COUNT_LIMIT}")
    M = d.incidence.astype(np.float64)
    # exact: entries are integers far below 2**53
    return np.rint(M.T @ M).astype(np.int64)


def classify_parameters(d: IncidenceStructure) -> DesignParams:
    """Check the 2-design axioms by direct counting and return (v, b, r, k, lambda)."""
    sizes = [len(B) for B in d.blocks]
    k = sizes[0]
    for i, s in enumerate(sizes):
        if s != k:
            raise DesignAxiomError("uniform block size", i, f"block {i} has size {s}, block 0 has size {k}")
    P = pair_counts(d)
    reps = np.diag(P)
    r = int(reps[0])
    bad = np.flatnonzero(reps != r)
    if bad.size:
        p = int(bad[0]) + 1
        raise DesignAxiomError("constant replication", p, f"point {p} lies in {int(reps[bad[0]])} blocks, point 1 in {r}")
    lam = _constant_pair_count(P)
    params = DesignParams(d.v, d.b, r, k, lam)
    assert d.v * r == d.b * k
    assert lam * (d.v - 1) == r * (k - 1)
    return params


def _constant_pair_count(P: np.ndarray) -> int:
    v = P.shape[0]
    if v < 2:
        raise DesignAxiomError("pair balance", None, "fewer than two points")
    iu = np.triu_indices(v, 1)
    vals = P[iu]
    lam = int(vals[0])
    bad = np.flatnonzero(vals != lam)
    if bad.size:
        a, b = int(iu[0][bad[0]]) + 1, int(iu[1][bad[0]]) + 1
        raise DesignAxiomError(
            "pair balance", (a, b), f"pair ({a},{b}) lies in {int(vals[bad[0]])} blocks, pair (1,2) in {lam}"
        )
    return lam


def pbd_profile(d: IncidenceStructure) -> PBDProfile:
    P = pair_counts(d)
    lam = _constant_pair_count(P)
    M = d.incidence
    sizes = M.sum(axis=1)
    K = tuple(sorted(set(int(s) for s in sizes)))
    rep = {k: M[sizes == k].sum(axis=0).astype(np.int64) for k in K}
    lhs = sum(rep[k] * (k - 1) for k in K)
    if not np.all(lhs == lam * (d.v - 1)):
        raise AssertionError("replication identity failed")
    return PBDProfile(K, lam, rep)


# -- group actions on blocks ---------------------------------------------


def block_permutations(g: PermGroup, d: IncidenceStructure, gens=None) -> list[np.ndarray]:
    """Induced permutation of the distinct blocks for each generator.

    Raises :class:`NotAutomorphismError` if a generator does not preserve
    the block multiset.
    """
    if g.degree != d.v:
        raise ValueError("group degree differs from the number of points")
    keys, rows, mult = d._distinct_blocks()
    lookup = {k: i for i, k in enumerate(keys)}
    M = np.zeros((len(keys), d.v), dtype=bool)
    for i, B in enumerate(rows):
        M[i, B.indices()] = True
    out = []
    for s in (gens if gens is not None else g._raw):
        s = np.asarray(s)
        img = np.zeros_like(M)
        img[:, s] = M
        packed = np.packbits(img, axis=1, bitorder="little")
        perm = np.empty(len(keys), dtype=np.int64)
        for i in range(len(keys)):
            j = lookup.get(packed[i].tobytes())
            if j is None:
                raise NotAutomorphismError(f"image of block {rows[i].members} is not a block")
            perm[i] = j
        if not np.array_equal(mult[perm], mult):
            raise NotAutomorphismError("block multiplicities are not preserved")
        out.append(perm)
    return out


def _components(n: int, perms: list[np.ndarray], mask: np.ndarray | None = None) -> np.ndarray:
    src = np.concatenate([np.arange(n)] * len(perms)) if perms else np.arange(0)
    dst = np.concatenate(perms) if perms else np.arange(0)
    if mask is not None:
        keep = mask[src]
        src, dst = src[keep], dst[keep]
    A = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(n, n))
    _, labels = connected_components(A, directed=True, connection="weak")
    return labels


def block_orbits(g: PermGroup, d: IncidenceStructure) -> list[list[int]]:
    """Orbits on the distinct blocks, as lists of distinct-block indices."""
    perms = block_permutations(g, d)
    labels = _components(len(d._distinct_blocks()[0]), perms)
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(i)
    return sorted(groups.values(), key=lambda o: o[0])


def flag_orbits(g: PermGroup, d: IncidenceStructure) -> FlagOrbitReport:
    """Orbit lengths on flags (point, block) with the point in the block.

    Uses |(a, B)^G| = |B^G| * |a^(G_B)|. Repeated blocks contribute their
    flag orbits once per copy.
    """
    keys, rows, mult = d._distinct_blocks()
    sizes = []
    borb = []
    for orb in block_orbits(g, d):
        rep = rows[orb[0]]
        m = int(mult[orb[0]])
        borb.append(len(orb) * m)
        stab = g.setwise_stabilizer(rep)
        inner = _restricted_orbits(stab, rep)
        for _ in range(m):
            sizes.extend(len(orb) * s for s in inner)
    total = sum(len(B) for B in d.blocks)
    assert sum(sizes) == total
    return FlagOrbitReport(total, sorted(sizes), borb)


def _restricted_orbits(stab: PermGroup, B: PointSet) -> list[int]:
    members = set(B.members)
    return sorted(len(o) for o in stab.orbits() if o[0] in members)


def is_block_transitive(g: PermGroup, d: IncidenceStructure) -> bool:
    return len(block_orbits(g, d)) == 1


def is_flag_transitive(g: PermGroup, d: IncidenceStructure) -> bool:
    return len(flag_orbits(g, d).orbit_sizes) == 1


def is_half_flag_transitive(g: PermGroup, d: IncidenceStructure) -> HalfFlagWitness:
    """Block-transitive, and G_B has exactly two orbits of length k/2 on B.

    One block per orbit is examined, which suffices once block-transitivity
    holds. The result is truthy iff the property holds.
    """
    orbs = block_orbits(g, d)
    B = d._distinct_blocks()[1][0]
    stab = g.setwise_stabilizer(B)
    inner = tuple(_restricted_orbits(stab, B))
    sig = tuple(sorted(len(o) for o in stab.orbits()))
    k = len(B)
    halves = len(inner) == 2 and inner[0] == inner[1] == k // 2 and k % 2 == 0
    if len(inner) == 1:
        detail = "G_B transitive on block"
    elif halves:
        detail = "G_B has two orbits of length k/2 on B"
    else:
        detail = f"G_B orbits on block are {list(inner)}"
    if len(orbs) != 1:
        return HalfFlagWitness(False, f"not block-transitive ({len(orbs)} block orbits); {detail}", inner, stab.order(), sig)
    return HalfFlagWitness(halves, detail, inner, stab.order(), sig)


def half_flag_dual_check(g: PermGroup, d: IncidenceStructure) -> HalfFlagWitness:
    """Block- and point-transitive, and G_1 has two orbits of length r/2 on the blocks through 1.

    Block-transitivity is needed for this to match the block-side test:
    without it two flag-transitive block orbits pass the point-side count.
    """
    if not g.is_transitive():
        return HalfFlagWitness(False, "not point-transitive")
    if not is_block_transitive(g, d):
        return HalfFlagWitness(False, "not block-transitive")
    keys, rows, mult = d._distinct_blocks()
    if np.any(mult != 1):
        return HalfFlagWitness(False, "repeated blocks")
    stab = g.point_stabilizer(1)
    perms = block_permutations(g, d, gens=stab._raw)
    through = np.array([1 in set(B.members) for B in rows])
    labels = _components(len(rows), perms, mask=through)
    counts = Counter(int(lab) for lab in labels[through])
    sizes = tuple(sorted(counts.values()))
    r = int(through.sum())
    if len(sizes) == 2 and r % 2 == 0 and sizes[0] == sizes[1] == r // 2:
        return HalfFlagWitness(True, "G_1 has two orbits of length r/2 on blocks through 1", sizes, stab.order())
    return HalfFlagWitness(False, f"G_1 orbits on blocks through 1 are {list(sizes)}", sizes, stab.order())


def two_equal_flag_orbits(g: PermGroup, d: IncidenceStructure) -> bool:
    """The weaker property: exactly two flag orbits, each of half the flags."""
    rep = flag_orbits(g, d)
    return len(rep.orbit_sizes) == 2 and rep.orbit_sizes[0] == rep.orbit_sizes[1]
