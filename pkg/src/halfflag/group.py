"""Permutation groups with stabilizer chains.

The chain is built by the deterministic Schreier-Sims algorithm. New base
points are always the smallest point moved by the residue that needs them,
so rebuilding from the same generators gives the same base, transversals,
and order factorization.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .perm import Permutation, PointSet, compose, encode_rows, invert

DEFAULT_ORBIT_CAP = 2_000_000


class OrbitCapExceeded(RuntimeError):
    """A set orbit grew past the configured cap; no count is reported."""

    def __init__(self, cap: int, seen: int):
        super().__init__(f"set orbit exceeded cap of {cap} (reached {seen})")
        self.cap = cap
        self.seen = seen


@dataclass
class ChainLevel:
    base_point: int  # 0-based
    gens: list  # raw tuples fixing all earlier base points
    transversal: dict  # point -> raw perm carrying base_point there
    inv_transversal: dict

    @property
    def orbit(self) -> list[int]:
        return list(self.transversal)


@dataclass
class StabChain:
    degree: int
    levels: list[ChainLevel] = field(default_factory=list)

    @property
    def base(self) -> list[int]:
        """Base points, 1-based."""
        return [lv.base_point + 1 for lv in self.levels]

    @property
    def orbit_sizes(self) -> list[int]:
        return [len(lv.transversal) for lv in self.levels]

    @property
    def order(self) -> int:
        return prod(self.orbit_sizes)

    @property
    def strong_generators(self) -> list:
        return list(self.levels[0].gens) if self.levels else []

    def sift(self, g: tuple, start: int = 0) -> tuple[tuple, int]:
        """Strip ``g`` through the chain from level ``start``.

        Returns the residue and the level where sifting stopped; the level
        equals ``len(levels)`` when every base point was handled.
        """
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            beta = g[lv.base_point]
            u_inv = lv.inv_transversal.get(beta)
            if u_inv is None:
                return g, i
            g = compose(g, u_inv)
        return g, len(self.levels)

    def contains_raw(self, g: tuple) -> bool:
        h, _ = self.sift(g)
        return _is_identity(h)


def _is_identity(g: tuple) -> bool:
    return all(i == x for i, x in enumerate(g))


def _orbit_transversal(base_point: int, gens: list, degree: int):
    ident = tuple(range(degree))
    trans = {base_point: ident}
    queue = [base_point]
    for x in queue:
        ux = trans[x]
        for s in gens:
            y = s[x]
            if y not in trans:
                trans[y] = compose(ux, s)
                queue.append(y)
    inv = {p: invert(u) for p, u in trans.items()}
    return trans, inv


def schreier_sims(gens: Sequence[tuple], degree: int, base_hint: Sequence[int] = ()) -> StabChain:
    """Deterministic Schreier-Sims on 0-based raw generators.

    ``base_hint`` (0-based) fixes the first base points; further points are
    chosen as the smallest point moved by the residue that needs one.
    """
    gens = [g for g in dict.fromkeys(gens) if not _is_identity(g)]
    base: list[int] = list(dict.fromkeys(base_hint))
    while True:
        rest = [g for g in gens if all(g[b] == b for b in base)]
        if not rest:
            break
        base.append(min(next(i for i, x in enumerate(g) if i != x) for g in rest))
    if not gens:
        return StabChain(degree, [])

    # strong generators per level
    S: list[list] = []
    for i in range(len(base)):
        S.append([g for g in gens if all(g[b] == b for b in base[:i])])
    chain = StabChain(degree, [])
    for i, b in enumerate(base):
        t, ti = _orbit_transversal(b, S[i], degree)
        chain.levels.append(ChainLevel(b, S[i], t, ti))

    i = len(base) - 1
    while i >= 0:
        lv = chain.levels[i]
        restart = False
        for beta, u_beta in list(lv.transversal.items()):
            for s in lv.gens:
                gamma = s[beta]
                h = compose(compose(u_beta, s), lv.inv_transversal[gamma])
                if _is_identity(h):
                    continue
                res, j = chain.sift(h, i + 1)
                if j == len(chain.levels) and _is_identity(res):
                    continue
                if j == len(chain.levels):
                    new_pt = next(p for p, x in enumerate(res) if p != x)
                    chain.levels.append(ChainLevel(new_pt, [], {new_pt: tuple(range(degree))}, {}))
                    chain.levels[-1].inv_transversal = dict(chain.levels[-1].transversal)
                for l in range(i + 1, j + 1):
                    L = chain.levels[l]
                    L.gens.append(res)
                    L.transversal, L.inv_transversal = _orbit_transversal(L.base_point, L.gens, degree)
                i = j
                restart = True
                break
            if restart:
                break
        if not restart:
            i -= 1
    # drop trailing levels with trivial orbit (cannot arise except from hints)
    while chain.levels and len(chain.levels[-1].transversal) == 1 and not chain.levels[-1].gens:
        chain.levels.pop()
    return chain


class PermGroup:
    """A permutation group given by generators on {1..degree}.

    The stabilizer chain is built on first use and cached.
    """

    def __init__(self, generators: Iterable[Permutation], degree: int | None = None, label: str | None = None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree required for a group without generators")
            degree = gens[0].degree
        if degree < 1:
            raise ValueError("degree must be at least 1")
        for g in gens:
            if g.degree != degree:
                raise ValueError(f"generator of degree {g.degree} in a group of degree {degree}")
        if not gens:
            gens = [Permutation.identity(degree)]
        self.degree = degree
        self.generators = gens
        self.label = label
        self._chain: StabChain | None = None
        self._raw = [g._img for g in gens]

    @classmethod
    def _from_raw(cls, raw: Sequence[tuple], degree: int, label: str | None = None) -> "PermGroup":
        return cls([Permutation._raw(tuple(g)) for g in raw], degree, label)

    def __repr__(self) -> str:
        name = f" {self.label!r}" if self.label else ""
        return f"<PermGroup{name} degree={self.degree} gens={len(self.generators)}>"

    @property
    def chain(self) -> StabChain:
        if self._chain is None:
            self._chain = schreier_sims(self._raw, self.degree)
        return self._chain

    def build_chain(self, base_hint: Sequence[int] = ()) -> StabChain:
        """Build a fresh chain whose base starts with ``base_hint`` (1-based)."""
        for p in base_hint:
            self._check_point(p)
        return schreier_sims(self._raw, self.degree, [p - 1 for p in base_hint])

    def order(self) -> int:
        return self.chain.order

    def contains(self, x: Permutation) -> bool:
        if x.degree != self.degree:
            raise ValueError(f"degree mismatch: {x.degree} vs {self.degree}")
        return self.chain.contains_raw(x._img)

    __contains__ = contains

    def is_trivial(self) -> bool:
        return all(_is_identity(g) for g in self._raw)

    def _check_point(self, p: int) -> None:
        if not 1 <= p <= self.degree:
            raise ValueError(f"point {p} out of range 1..{self.degree}")

    def orbit(self, p: int) -> PointSet:
        return PointSet(self.degree, (x + 1 for x in self._orbit0(p - 1)))

    def orbit_transversal(self, p: int) -> dict[int, Permutation]:
        """Map each orbit point q to an element carrying ``p`` to ``q``."""
        self._check_point(p)
        t, _ = _orbit_transversal(p - 1, self._raw, self.degree)
        return {q + 1: Permutation._raw(u) for q, u in t.items()}

    def _orbit0(self, p0: int) -> list[int]:
        self._check_point(p0 + 1)
        seen = {p0}
        queue = [p0]
        for x in queue:
            for s in self._raw:
                y = s[x]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return sorted(seen)

    def orbits(self) -> list[list[int]]:
        """All orbits as sorted 1-based lists, ordered by smallest point."""
        parent = list(range(self.degree))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s in self._raw:
            for x, y in enumerate(s):
                a, b = find(x), find(y)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        groups: dict[int, list[int]] = {}
        for x in range(self.degree):
            groups.setdefault(find(x), []).append(x + 1)
        return [groups[k] for k in sorted(groups)]

    def is_transitive(self) -> bool:
        return len(self._orbit0(0)) == self.degree

    def point_stabilizer(self, p: int) -> "PermGroup":
        self._check_point(p)
        chain = self.build_chain([p])
        if not chain.levels or chain.levels[0].base_point != p - 1:
            return self
        if len(chain.levels) == 1:
            sub = PermGroup([], self.degree)
            sub._chain = StabChain(self.degree, [])
            return sub
        sub = PermGroup._from_raw(chain.levels[1].gens, self.degree)
        sub._chain = StabChain(self.degree, chain.levels[1:])
        return sub

    def stabilizer_of_points(self, points: Sequence[int]) -> "PermGroup":
        """Pointwise stabilizer of ``points``."""
        g = self
        for p in points:
            g = g.point_stabilizer(p)
        return g

    def set_orbit(self, b: PointSet, cap: int = DEFAULT_ORBIT_CAP, keep: bool = False):
        """Size of the orbit of ``b`` under the group (and its members if ``keep``).

        Raises :class:`OrbitCapExceeded` when the orbit passes ``cap``.
        """
        orb = SetOrbit.compute(self, b, cap=cap, schreier=False)
        if keep:
            return len(orb), orb.point_sets()
        return len(orb)

    def setwise_stabilizer(self, b: PointSet, cap: int = DEFAULT_ORBIT_CAP) -> "PermGroup":
        """The subgroup of elements mapping ``b`` onto itself."""
        if b.degree != self.degree:
            raise ValueError("degree mismatch")
        if len(b) in (0, self.degree):
            return self
        if len(b) == 1:
            return self.point_stabilizer(b.members[0])
        orb = SetOrbit.compute(self, b, cap=cap, schreier=True)
        target = self.order() // len(orb)
        return _subgroup_from_schreier(self, orb, target)

    def random_element(self, seed: int | random.Random | None = None) -> Permutation:
        """A uniformly distributed element, drawn from the chain transversals."""
        rng = seed if isinstance(seed, random.Random) else random.Random(seed)
        g = tuple(range(self.degree))
        for lv in reversed(self.chain.levels):
            pts = list(lv.transversal)
            g = compose(g, lv.transversal[pts[rng.randrange(len(pts))]])
        return Permutation._raw(g)

    def elements(self, limit: int = 10**6) -> list[tuple]:
        """All elements as raw 0-based tuples (for small groups only)."""
        if self.order() > limit:
            raise ValueError(f"group order {self.order()} exceeds enumeration limit {limit}")
        elems = [tuple(range(self.degree))]
        for lv in reversed(self.chain.levels):
            elems = [compose(e, u) for u in lv.transversal.values() for e in elems]
        return elems

    def conjugate(self, x: Permutation) -> "PermGroup":
        """The group x^-1 G x."""
        xi = invert(x._img)
        return PermGroup._from_raw([compose(compose(xi, g), x._img) for g in self._raw], self.degree)

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return all(other.chain.contains_raw(g) for g in self._raw)


class SetOrbit:
    """Breadth-first orbit of a point set, with an optional Schreier tree.

    Keys are the canonical bit-vector encodings; ``rows`` holds each member
    as a sorted array of 0-based points.
    """

    def __init__(self, degree: int, rows: np.ndarray, index: dict, parent=None, via=None):
        self.degree = degree
        self.rows = rows
        self.index = index
        self.parent = parent
        self.via = via

    def __len__(self) -> int:
        return self.rows.shape[0]

    def point_sets(self) -> list[PointSet]:
        return [PointSet(self.degree, (r + 1).tolist()) for r in self.rows]

    @classmethod
    def compute(cls, g: PermGroup, b: PointSet, cap: int = DEFAULT_ORBIT_CAP, schreier: bool = False) -> "SetOrbit":
        if b.degree != g.degree:
            raise ValueError("degree mismatch")
        n = g.degree
        gens = [np.asarray(s, dtype=np.int32) for s in dict.fromkeys(g._raw)]
        start = np.sort(b.indices().astype(np.int32))[None, :]
        key0 = encode_rows(start, n)[0].tobytes()
        index = {key0: 0}
        chunks = [start]
        parents = [np.array([-1])]
        vias = [np.array([-1])]
        frontier = start
        frontier_ids = np.array([0])
        total = 1
        while frontier.shape[0]:
            new_rows = []
            new_par = []
            new_via = []
            for gi, s in enumerate(gens):
                img = np.sort(s[frontier], axis=1)
                keys = encode_rows(img, n)
                for r in range(img.shape[0]):
                    kb = keys[r].tobytes()
                    if kb not in index:
                        index[kb] = total
                        total += 1
                        new_rows.append(img[r])
                        new_par.append(frontier_ids[r])
                        new_via.append(gi)
                        if total > cap:
                            raise OrbitCapExceeded(cap, total)
            if not new_rows:
                break
            frontier = np.array(new_rows, dtype=np.int32).reshape(len(new_rows), start.shape[1])
            frontier_ids = np.arange(total - len(new_rows), total)
            chunks.append(frontier)
            parents.append(np.array(new_par))
            vias.append(np.array(new_via))
        rows = np.concatenate(chunks)
        if schreier:
            return cls(n, rows, index, np.concatenate(parents), np.concatenate(vias))
        return cls(n, rows, index)

    def transversal(self, gens: list[np.ndarray]) -> np.ndarray:
        """Row j holds an element carrying the start set to member j."""
        m, n = len(self), self.degree
        T = np.empty((m, n), dtype=np.int32)
        T[0] = np.arange(n)
        # BFS numbering guarantees parents precede children
        for j in range(1, m):
            T[j] = gens[self.via[j]][T[self.parent[j]]]
        return T


def _subgroup_from_schreier(g: PermGroup, orb: SetOrbit, target: int) -> PermGroup:
    """Collect Schreier generators of the set stabilizer until the known order is reached."""
    n = g.degree
    gens_raw = list(dict.fromkeys(g._raw))
    gens = [np.asarray(s, dtype=np.int32) for s in gens_raw]
    T = orb.transversal(gens)
    found: list[tuple] = []
    chain = StabChain(n, [])
    if target == 1:
        sub = PermGroup([], n)
        sub._chain = chain
        return sub
    m = len(orb)
    for i in range(m):
        ti = T[i]
        for gi, s in enumerate(gens):
            img = np.sort(s[orb.rows[i]])
            j = orb.index[encode_rows(img[None, :], n)[0].tobytes()]
            if orb.parent[j] == i and orb.via[j] == gi:
                continue
            # t_i * s * t_j^-1 (left to right)
            tj_inv = np.empty(n, dtype=np.int32)
            tj_inv[T[j]] = np.arange(n, dtype=np.int32)
            h = tuple(tj_inv[s[ti]].tolist())
            if chain.contains_raw(h):
                continue
            found.append(h)
            chain = schreier_sims(found, n)
            if chain.order == target:
                sub = PermGroup._from_raw(found, n)
                sub._chain = chain
                return sub
            if chain.order > target or target % chain.order:
                raise AssertionError("set stabilizer order inconsistent with orbit length")
    raise AssertionError("Schreier generators did not reach the stabilizer order")
