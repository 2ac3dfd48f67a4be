"""Subgroups of a given index.

Small parents are searched exhaustively: every element is enumerated into
a numpy table and subgroups are grown bottom-up by adjoining elements of
prime-power order, keeping only subgroups whose order divides the target.
Classes are separated by cheap invariants first and by an explicit
vectorized conjugacy test second.

Large parents get randomized targeted strategies whose results are exact
subgroups of the right order but carry no completeness claim, or verified
fixtures derived elsewhere.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from math import gcd
from pathlib import Path

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .group import PermGroup
from .io import FormatError, parse_group
from .perm import Permutation, compose

EXHAUSTIVE = "exhaustive"
PARTIAL = "partial"
FIXTURE = "fixture"


class SubgroupError(ValueError):
    pass


@dataclass(frozen=True)
class SearchBudget:
    parent_order_bound: int = 10**6
    target_order_bound: int = 4000
    seconds: float = 60.0
    seed: int = 0

    def __post_init__(self):
        if min(self.parent_order_bound, self.target_order_bound) < 1 or self.seconds <= 0:
            raise ValueError("budgets must be positive")


@dataclass
class SubgroupClass:
    group: PermGroup
    signature: tuple[int, ...]
    completeness: str
    label: str | None = None

    @property
    def order(self) -> int:
        return self.group.order()

    def equal_size_pairs(self) -> list[tuple[int, int]]:
        """Index pairs (into the sorted orbit list) of orbits with equal length."""
        orbs = self.group.orbits()
        out = []
        for i in range(len(orbs)):
            for j in range(i + 1, len(orbs)):
                if len(orbs[i]) == len(orbs[j]):
                    out.append((i, j))
        return out


@dataclass
class SubgroupClassReport:
    index: int
    parent_order: int
    classes: list[SubgroupClass]
    completeness: str
    diagnostics: list[str] = field(default_factory=list)

    @property
    def target_order(self) -> int:
        return self.parent_order // self.index

    def signatures(self) -> list[tuple[int, ...]]:
        return [c.signature for c in self.classes]

    def to_dict(self) -> dict:
        return {
            "b": self.index,
            "order": self.target_order,
            "completeness": self.completeness,
            "classes": [
                {
                    "label": c.label,
                    "order": c.order,
                    "signature": list(c.signature),
                    "completeness": c.completeness,
                    "generators": [str(p) for p in c.group.generators],
                }
                for c in self.classes
            ],
            "diagnostics": list(self.diagnostics),
        }


def orbit_signature(h: PermGroup) -> tuple[int, ...]:
    return tuple(sorted(len(o) for o in h.orbits()))


def _prime_power(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while n % p:
        p += 1
    while n % p == 0:
        n //= p
    return n == 1


# -- exhaustive search -------------------------------------------------------


class ElementTable:
    """All elements of a small group as rows of an (N, n) array.

    Rows are looked up through the images of a base, which determine an
    element uniquely.
    """

    def __init__(self, g: PermGroup, limit: int = 10**6):
        if g.order() > limit:
            raise SubgroupError(f"group order {g.order()} exceeds enumeration limit {limit}")
        n = g.degree
        chain = g.chain
        E = np.arange(n, dtype=np.int32)[None, :]
        for lv in reversed(chain.levels):
            U = np.array(list(lv.transversal.values()), dtype=np.int32)
            E = np.concatenate([u[E] for u in U])
        self.degree = n
        self.base = np.array([b - 1 for b in chain.base] or [0], dtype=np.intp)
        self.radix = n ** np.arange(len(self.base), dtype=np.int64)
        if float(n) ** len(self.base) >= 2**62:
            raise SubgroupError("base too long for integer element keys")
        keys = self._keys(E)
        order = np.argsort(keys, kind="stable")
        self.E = E[order]
        self.keys = keys[order]
        self.N = len(self.E)
        self.identity = self.index_of(np.arange(n, dtype=np.int32)[None, :])[0]
        self.inv = self.index_of(np.argsort(self.E, axis=1).astype(np.int32))
        self.orders = self._element_orders()
        self.gen_idx = [int(i) for i in self.index_of(np.array(g._raw, dtype=np.int32))]
        self._cls = self._tr = self._cents = None

    def _keys(self, rows: np.ndarray) -> np.ndarray:
        return rows[:, self.base].astype(np.int64) @ self.radix

    def index_of(self, rows: np.ndarray) -> np.ndarray:
        """Indices of the given permutation rows; raises if one is not an element."""
        idx = np.minimum(self._index(rows), self.N - 1)
        if np.any(self.E[idx] != rows):
            raise SubgroupError("row is not an element of the group")
        return idx

    def _index(self, rows: np.ndarray) -> np.ndarray:
        # unchecked: rows must be group elements, found by their base images
        return np.searchsorted(self.keys, self._keys(rows))

    def index_of_perm(self, p: Permutation) -> int:
        return int(self.index_of(np.array([p._img], dtype=np.int32))[0])

    def mul(self, a: np.ndarray, s: int) -> np.ndarray:
        """Indices of a_i * s (left-to-right composition)."""
        return self._index(self.E[s][self.E[a]])

    def conj_all(self, x: int, among: np.ndarray | None = None) -> np.ndarray:
        """Indices of g^-1 x g for every g in ``among`` (default: all)."""
        gi = np.arange(self.N) if among is None else among
        rows = self.E[x][self.E[self.inv[gi]]]
        return self._index(np.take_along_axis(self.E[gi], rows, axis=1))

    def _element_orders(self) -> np.ndarray:
        orders = np.zeros(self.N, dtype=np.int64)
        cur = self.E.copy()
        ident = np.arange(self.degree, dtype=np.int32)
        j = 1
        while True:
            hit = (orders == 0) & np.all(cur == ident, axis=1)
            orders[hit] = j
            if orders.min() > 0:
                return orders
            cur = np.take_along_axis(self.E, cur, axis=1)
            j += 1

    def power(self, idx: np.ndarray, e: int) -> np.ndarray:
        cur = np.broadcast_to(np.arange(self.degree, dtype=np.int32), (len(idx), self.degree)).copy()
        base = self.E[idx]
        while e:
            if e & 1:
                cur = np.take_along_axis(base, cur, axis=1)
            base = np.take_along_axis(base, base, axis=1)
            e >>= 1
        return self._index(cur)

    def closure(self, start: np.ndarray, gens: list[int], cap: int) -> np.ndarray | None:
        """Elements of the subgroup generated by ``start`` and ``gens``.

        ``start`` must already be closed (a subgroup). Returns None as
        soon as more than ``cap`` elements are found.
        """
        member = np.zeros(self.N, dtype=bool)
        member[start] = True
        total = len(start)
        frontier = start
        while frontier.size:
            new = []
            for s in gens:
                prod = np.unique(self.mul(frontier, s))
                prod = prod[~member[prod]]
                if prod.size:
                    member[prod] = True
                    total += prod.size
                    if total > cap:
                        return None
                    new.append(prod)
            frontier = np.concatenate(new) if new else np.empty(0, dtype=np.intp)
        return np.flatnonzero(member)

    def conj_by(self, y: int, xs: np.ndarray) -> np.ndarray:
        """Indices of y^-1 x y for every x in ``xs``."""
        rows = self.E[xs][:, self.E[self.inv[y]]]
        return self._index(self.E[y][rows])

    def _build_classes(self) -> None:
        """Conjugacy classes of elements, each element with a conjugator
        from its class representative, and the representatives' centralizers."""
        N = self.N
        cls = np.full(N, -1, dtype=np.int64)
        tr = np.full(N, -1, dtype=np.int64)
        reps, cents = [], []
        everything = np.arange(N)
        cmaps = [self.conj_by(s, everything) for s in self.gen_idx]
        for e in range(N):
            if cls[e] >= 0:
                continue
            c = len(reps)
            reps.append(e)
            cls[e] = c
            tr[e] = self.identity
            frontier = np.array([e])
            while frontier.size:
                nxt = []
                for s, cm in zip(self.gen_idx, cmaps):
                    img = cm[frontier]
                    fresh = cls[img] < 0
                    new, first = np.unique(img[fresh], return_index=True)
                    if new.size:
                        cls[new] = c
                        tr[new] = self.mul(tr[frontier[fresh][first]], s)
                        nxt.append(new)
                frontier = np.concatenate(nxt) if nxt else np.empty(0, dtype=np.intp)
            cents.append(np.flatnonzero(self.conj_all(e) == e))
        self._cls, self._tr, self._cents = cls, tr, cents

    @property
    def class_of(self) -> np.ndarray:
        if self._cls is None:
            self._build_classes()
        return self._cls

    def extend(self, h: np.ndarray, x: int, cap: int) -> np.ndarray | None:
        """Elements of <H, x> for a subgroup H given by its elements.

        The result is a union of left cosets eH closed under right
        multiplication by x, so each layer multiplies by x and then adds
        whole cosets. Only base images are formed since they fix the key.
        Returns None once more than ``cap`` elements turn up.
        """
        member = np.zeros(self.N, dtype=bool)
        member[h] = True
        total = len(h)
        Hb = self.E[h]  # (|H|, n)
        xb = self.E[x]
        frontier = h
        while frontier.size:
            prod = self._lookup(xb[self.E[frontier][:, self.base]])
            prod = np.unique(prod[~member[prod]])
            if not prod.size:
                break
            # e*h for every new e and every h in H
            rows = Hb[:, self.E[prod][:, self.base]]  # (|H|, m, |base|)
            coset = np.unique(self._lookup(rows.reshape(-1, len(self.base))))
            total += coset.size
            if total > cap:
                return None
            member[coset] = True
            frontier = coset
        return np.flatnonzero(member)

    def _lookup(self, base_rows: np.ndarray) -> np.ndarray:
        """Unchecked index lookup from base images."""
        return np.searchsorted(self.keys, base_rows.astype(np.int64) @ self.radix)

    def conjugators(self, gens: list[int], target: np.ndarray, first_only: bool = False) -> np.ndarray:
        """All g with g^-1 s g in ``target`` for each s in ``gens``.

        The candidates for the first generator x are the cosets
        t_x^-1 C(r) t_y over y in ``target`` conjugate to x, where r is the
        class representative and r^(t_y) = y.
        """
        if not gens:
            return np.arange(self.N)
        cls = self.class_of
        x = gens[0]
        c = cls[x]
        C = self._cents[c]
        ys = target[cls[target] == c]
        if ys.size == 0:
            return np.empty(0, dtype=np.intp)
        left = self.E[C][:, self.E[self.inv[self._tr[x]]]]  # t_x^-1 * C
        mask = np.zeros(self.N, dtype=bool)
        mask[target] = True
        found = []
        for y in ys:
            cand = self._index(self.E[self._tr[y]][left])
            for s in gens[1:]:
                if cand.size == 0:
                    break
                cand = cand[mask[self.conj_all(s, cand)]]
            if cand.size:
                if first_only:
                    return cand[:1]
                found.append(cand)
        return np.unique(np.concatenate(found)) if found else np.empty(0, dtype=np.intp)

    def generators_of(self, elems: np.ndarray) -> list[int]:
        """A short generating list for the subgroup with these elements."""
        gens: list[int] = []
        have = np.zeros(self.N, dtype=bool)
        have[self.identity] = True
        for x in elems[np.argsort(-self.orders[elems], kind="stable")]:
            if have[x]:
                continue
            gens.append(int(x))
            got = self.closure(np.array([self.identity]), gens, len(elems))
            have[got] = True
            if got.size == len(elems):
                break
        return gens

    def perm(self, idx: int) -> Permutation:
        return Permutation._raw(tuple(int(x) for x in self.E[idx]))


@dataclass
class _Sub:
    elems: np.ndarray
    gens: list[int]
    invariant: tuple


def _invariant(t: ElementTable, elems: np.ndarray, gens: list[int]) -> tuple:
    h = PermGroup([t.perm(i) for i in gens] or [t.perm(t.identity)], t.degree)
    hist = tuple(np.bincount(t.orders[elems]).tolist())
    return (len(elems), orbit_signature(h), hist)


def exhaustive_subgroups(
    g: PermGroup,
    target: int,
    deadline: float | None = None,
    table: ElementTable | None = None,
) -> tuple[list[_Sub], bool]:
    """Conjugacy class representatives of subgroups of order ``target``.

    Returns (representatives, finished). ``finished`` is False when the
    deadline stopped the search.
    """
    t = table or ElementTable(g)
    if t.N % target:
        return [], True
    # one generator per cyclic subgroup of prime-power order dividing target
    ok = (target % t.orders == 0) & np.array([_prime_power(int(o)) for o in t.orders])
    cand = np.flatnonzero(ok)
    rep = np.arange(t.N)
    maxo = int(t.orders.max())
    for j in range(2, maxo):
        sel = cand[(t.orders[cand] > j) & (np.gcd(j, t.orders[cand]) == 1)]
        if sel.size:
            pw = t.power(sel, j)
            rep[sel] = np.minimum(rep[sel], pw)
    cyc = np.flatnonzero(ok & (rep == np.arange(t.N)))

    trivial = _Sub(np.array([t.identity]), [], ())
    trivial.invariant = _invariant(t, trivial.elems, [])
    classes: dict[tuple, list[_Sub]] = {trivial.invariant: [trivial]}
    seen_sets: set[bytes] = {trivial.elems.tobytes()}
    queue = [trivial]
    finished = True
    for h in queue:
        if len(h.elems) == target:
            continue
        if deadline is not None and time.monotonic() > deadline:
            finished = False
            break
        inside = np.zeros(t.N, dtype=bool)
        inside[h.elems] = True
        todo = cyc[~inside[cyc]]
        # conjugation by the normalizer maps <h, x> to a conjugate subgroup
        norm = t.conjugators(h.gens, h.elems) if h.gens else np.arange(t.N)
        todo = _normalizer_orbit_reps(t, todo, norm, rep)
        for step, x in enumerate(todo):
            if deadline is not None and step % 64 == 63 and time.monotonic() > deadline:
                finished = False
                break
            k = t.extend(h.elems, int(x), target)
            if k is None or target % len(k):
                continue
            key = k.tobytes()
            if key in seen_sets:
                continue
            seen_sets.add(key)
            gens = h.gens + [int(x)]
            inv = _invariant(t, k, gens)
            same = classes.setdefault(inv, [])
            if any(_conjugate(t, other, k, gens) for other in same):
                continue
            sub = _Sub(k, gens, inv)
            same.append(sub)
            queue.append(sub)
        if not finished:
            break
    reps = [s for group in classes.values() for s in group if len(s.elems) == target]
    reps.sort(key=lambda s: (s.invariant[1], s.invariant[2], s.elems.tobytes()))
    return reps, finished


def _conjugate(t: ElementTable, a: _Sub, k: np.ndarray, k_gens: list[int]) -> bool:
    """Whether the subgroup with elements ``k`` is conjugate to ``a``."""
    if len(a.elems) != len(k):
        return False
    return t.conjugators(k_gens, a.elems, first_only=True).size > 0


def _normalizer_orbit_reps(t: ElementTable, todo: np.ndarray, norm: np.ndarray, rep: np.ndarray) -> np.ndarray:
    """One cyclic-subgroup generator per orbit of ``norm`` acting by conjugation."""
    if todo.size <= 1 or norm.size <= 1:
        return todo
    todo = np.sort(todo)
    rows, cols = [], []
    for y in t.generators_of(norm):
        img = np.searchsorted(todo, rep[t.conj_by(y, todo)])
        rows.append(np.arange(todo.size))
        cols.append(img)
    graph = coo_matrix((np.ones(sum(r.size for r in rows)), (np.concatenate(rows), np.concatenate(cols))), shape=(todo.size, todo.size))
    _, labels = connected_components(graph, directed=True, connection="weak")
    _, first = np.unique(labels, return_index=True)
    return todo[np.sort(first)]


# -- targeted (partial) search -------------------------------------------------


def _element_of_order_dividing(g: PermGroup, m: int, rng: random.Random, tries: int = 50) -> Permutation | None:
    for _ in range(tries):
        x = g.random_element(rng)
        o = x.order()
        d = gcd(o, m)
        if d > 1:
            return x ** (o // d)
    return None


def targeted_subgroups(g: PermGroup, target: int, budget: SearchBudget) -> tuple[list[PermGroup], list[str]]:
    """Random growth of subgroups whose order divides ``target``.

    Each attempt starts from an element of order dividing ``target`` (a
    power of a random element) and adjoins further such elements while the
    generated order still divides ``target``. Subgroups that reach the exact
    order are kept, one per orbit signature.
    """
    rng = random.Random(budget.seed)
    deadline = time.monotonic() + budget.seconds
    found: dict[tuple[int, ...], PermGroup] = {}
    attempts = 0
    while time.monotonic() < deadline:
        attempts += 1
        x = _element_of_order_dividing(g, target, rng)
        if x is None:
            break
        gens = [x]
        order = x.order()
        stale = 0
        while order < target and stale < 20 and time.monotonic() < deadline:
            y = _element_of_order_dividing(g, target, rng)
            if y is None:
                break
            h = PermGroup(gens + [y], g.degree)
            o = h.order()
            if o > order and target % o == 0:
                gens.append(y)
                order = o
                stale = 0
            else:
                stale += 1
        if order == target:
            h = PermGroup(gens, g.degree)
            found.setdefault(orbit_signature(h), h)
    diag = [f"targeted search: {attempts} attempts in {budget.seconds:g}s, {len(found)} signature(s) found"]
    return [found[s] for s in sorted(found)], diag


# -- public operations -----------------------------------------------------------


def verify_subgroup(parent: PermGroup, h: PermGroup, index: int | None = None) -> None:
    for p in h.generators:
        if p.degree != parent.degree or not parent.contains(p):
            raise SubgroupError(f"generator {p} is not in the parent group")
    if index is not None and h.order() * index != parent.order():
        raise SubgroupError(f"order {h.order()} times index {index} is not {parent.order()}")


def subgroups_of_index(
    g: PermGroup,
    b: int,
    budget: SearchBudget | None = None,
    fixtures: list[PermGroup] | None = None,
) -> SubgroupClassReport:
    """Conjugacy classes of subgroups of index ``b``.

    With ``fixtures`` the given subgroups are verified and reported as they
    are. Otherwise the search is exhaustive when the parent is small enough
    to enumerate, and a bounded targeted search otherwise.
    """
    budget = budget or SearchBudget()
    n = g.order()
    if b < 1 or n % b:
        raise SubgroupError(f"index {b} does not divide the group order {n}")
    target = n // b
    if fixtures is not None:
        classes = []
        for h in fixtures:
            verify_subgroup(g, h, b)
            classes.append(SubgroupClass(h, orbit_signature(h), FIXTURE, h.label))
        return SubgroupClassReport(b, n, classes, FIXTURE, ["classes taken from verified fixtures"])
    if b == 1:
        return SubgroupClassReport(b, n, [SubgroupClass(g, orbit_signature(g), EXHAUSTIVE)], EXHAUSTIVE)
    if target == 1:
        triv = PermGroup([], g.degree)
        return SubgroupClassReport(b, n, [SubgroupClass(triv, orbit_signature(triv), EXHAUSTIVE)], EXHAUSTIVE)
    if n <= budget.parent_order_bound:
        deadline = time.monotonic() + budget.seconds
        t = ElementTable(g, budget.parent_order_bound)
        reps, finished = exhaustive_subgroups(g, target, deadline, t)
        classes = []
        for s in reps:
            h = PermGroup([t.perm(i) for i in s.gens], g.degree)
            classes.append(SubgroupClass(h, orbit_signature(h), EXHAUSTIVE if finished else PARTIAL))
        diag = [] if finished else [f"exhaustive search stopped after {budget.seconds:g}s"]
        return SubgroupClassReport(b, n, classes, EXHAUSTIVE if finished else PARTIAL, diag)
    groups, diag = targeted_subgroups(g, target, budget)
    classes = [SubgroupClass(h, orbit_signature(h), PARTIAL) for h in groups]
    return SubgroupClassReport(b, n, classes, PARTIAL, diag)


def load_subgroup_fixture(parent: PermGroup, path: str | Path) -> PermGroup:
    """Read a subgroup in group format and check it against ``parent``.

    The file must carry an ``order`` line; every generator must lie in the
    parent.
    """
    text = Path(path).read_text(encoding="utf-8")
    gf = parse_group(text, check_order=False)
    if gf.declared_order is None:
        raise FormatError(f"{path}: subgroup fixtures need an 'order' line")
    h = gf.group
    verify_subgroup(parent, h)
    if h.order() != gf.declared_order:
        raise SubgroupError(f"{path}: declared order {gf.declared_order} but generators give {h.order()}")
    return h


@dataclass
class SignatureRow:
    b: int
    report: SubgroupClassReport

    def pairs(self) -> list[list[tuple[int, int]]]:
        """Per class, the lengths of each equal-size orbit pair."""
        out = []
        for c in self.report.classes:
            orbs = c.group.orbits()
            out.append([(len(orbs[i]), len(orbs[j])) for i, j in c.equal_size_pairs()])
        return out


def signature_table(
    g: PermGroup,
    b_values: list[int],
    budget: SearchBudget | None = None,
    fixtures: dict[int, list[PermGroup]] | None = None,
) -> list[SignatureRow]:
    rows = []
    for b in sorted(set(b_values)):
        fx = fixtures.get(b) if fixtures is not None and b in fixtures else None
        rows.append(SignatureRow(b, subgroups_of_index(g, b, budget, fx)))
    return rows


def signature_table_markdown(rows: list[SignatureRow]) -> str:
    lines = ["| b | order | orbit lengths | completeness |", "|---|---|---|---|"]
    for row in rows:
        rep = row.report
        if not rep.classes:
            lines.append(f"| {row.b} | {rep.target_order} | none found | {rep.completeness} |")
        for c in rep.classes:
            lines.append(f"| {row.b} | {c.order} | {', '.join(map(str, c.signature))} | {c.completeness} |")
    return "\n".join(lines) + "\n"


def signature_table_json(rows: list[SignatureRow]) -> str:
    return json.dumps([row.report.to_dict() for row in rows], indent=1)


def all_subgroups_bruteforce(g: PermGroup) -> list[frozenset]:
    """Every subgroup as a frozenset of raw elements (tiny groups only).

    Closes the set of subgroups under adjoining single elements until
    nothing new appears. Used as an independent check on the search.
    """
    elems = g.elements(limit=2000)
    ident = tuple(range(g.degree))

    def close(gens):
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for e in frontier:
                for s in gens:
                    p = compose(e, s)
                    if p not in seen:
                        seen.add(p)
                        nxt.append(p)
            frontier = nxt
        return frozenset(seen)

    subs = {frozenset([ident]): []}
    frontier = list(subs.items())
    while frontier:
        nxt = []
        for h, gens in frontier:
            for x in elems:
                if x in h:
                    continue
                k = close(gens + [x])
                if k not in subs:
                    subs[k] = gens + [x]
                    nxt.append((k, gens + [x]))
        frontier = nxt
    return list(subs)
