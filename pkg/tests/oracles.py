"""Brute-force reference implementations used only by the tests.

Nothing here calls the package's algorithms: groups are closed by plain
breadth-first search over tuples and every property is checked by
enumeration. Points are 0-based throughout.
"""

from __future__ import annotations

from collections import Counter
from itertools import combinations
from math import gcd

from halfflag import Permutation, PermGroup


def mul(a, b):
    """Apply a then b."""
    return tuple(b[x] for x in a)


def inv(a):
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def closure(gens, n):
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            for s in gens:
                f = mul(e, s)
                if f not in seen:
                    seen.add(f)
                    nxt.append(f)
        frontier = nxt
    return seen


def elements(g: PermGroup):
    return closure([p._img for p in g.generators], g.degree)


def group_from_cycles(n, *gens, label=None):
    return PermGroup([Permutation.from_cycles(c, n) for c in gens], n, label=label)


# -- small groups, named by what they are ------------------------------------


def symmetric(n):
    return group_from_cycles(n, [tuple(range(1, n + 1))], [(1, 2)], label=f"S{n}")


def alternating(n):
    gens = [[(1, 2, 3)]]
    gens.append([tuple(range(1, n + 1))] if n % 2 else [tuple(range(2, n + 1))])
    return group_from_cycles(n, *gens, label=f"A{n}")


def dihedral(n):
    refl = [(i, n + 2 - i) for i in range(2, n + 1) if i < n + 2 - i]
    return group_from_cycles(n, [tuple(range(1, n + 1))], refl, label=f"D{2 * n}")


def cyclic(n):
    return group_from_cycles(n, [tuple(range(1, n + 1))], label=f"C{n}")


def affine_line(p):
    """x -> ax + b over Z/p, points 1..p for residues 0..p-1."""
    prim = next(a for a in range(2, p) if len({pow(a, e, p) for e in range(1, p)}) == p - 1)
    trans = Permutation([(x + 1) % p + 1 for x in range(p)])
    mult = Permutation([(prim * x) % p + 1 for x in range(p)])
    return PermGroup([trans, mult], p, label=f"AGL(1,{p})")


def small_groups():
    """A fixed list of small test groups."""
    return [
        cyclic(6),
        dihedral(5),
        dihedral(6),
        alternating(4),
        symmetric(4),
        affine_line(5),
        affine_line(7),
        alternating(5),
        symmetric(5),
        group_from_cycles(6, [(1, 2), (3, 4)], [(1, 3), (2, 4)], [(5, 6)], label="C2xC2xC2 intransitive"),
        group_from_cycles(8, [(1, 2, 3, 4), (5, 6, 7, 8)], [(1, 5), (2, 6), (3, 7), (4, 8)], label="C4xC2 on 8"),
    ]


# -- orbits and stabilizers ----------------------------------------------------


def point_orbit(elems, x):
    return {e[x] for e in elems}


def point_stabilizer(elems, x):
    return {e for e in elems if e[x] == x}


def set_image(e, s):
    return frozenset(e[x] for x in s)


def set_orbit(elems, s):
    return {set_image(e, s) for e in elems}


def set_stabilizer(elems, s):
    s = frozenset(s)
    return {e for e in elems if set_image(e, s) == s}


def orbits_of(elems, n):
    left = set(range(n))
    out = []
    while left:
        o = point_orbit(elems, min(left))
        out.append(sorted(o))
        left -= o
    return out


def subdegrees(elems, n):
    return tuple(sorted(len(o) for o in orbits_of(point_stabilizer(elems, 0), n)))


def is_primitive(elems, n):
    """Transitive with no block of size strictly between 1 and n containing 0."""
    if len(point_orbit(elems, 0)) != n:
        return False
    for size in range(2, n):
        if n % size:
            continue
        for rest in combinations(range(1, n), size - 1):
            blk = frozenset((0, *rest))
            if all(len(set_image(e, blk) & blk) in (0, size) for e in elems):
                return False
    return True


# -- designs -------------------------------------------------------------------


def design_params(blocks, n):
    """(v, b, r, k, lam) if the blocks form a 2-design, else None."""
    ks = {len(b) for b in blocks}
    if len(ks) != 1:
        return None
    k = ks.pop()
    lams = Counter()
    for b in blocks:
        for pair in combinations(sorted(b), 2):
            lams[pair] += 1
    values = {lams[p] for p in combinations(range(n), 2)}
    if len(values) != 1:
        return None
    lam = values.pop()
    r = sum(1 for b in blocks if 0 in b)
    return n, len(blocks), r, k, lam


def flag_orbit_sizes(elems, blocks):
    flags = {(x, frozenset(b)) for b in blocks for x in b}
    sizes = []
    while flags:
        x, b = next(iter(flags))
        orb = {(e[x], set_image(e, b)) for e in elems}
        sizes.append(len(orb))
        flags -= orb
    return sorted(sizes)


def half_flag(elems, blocks):
    """Block-transitive and G_B has two orbits of length k/2 on B, by enumeration."""
    blocks = [frozenset(b) for b in blocks]
    if len(set_orbit(elems, blocks[0])) != len(set(blocks)):
        return False
    B = blocks[0]
    stab = set_stabilizer(elems, B)
    parts = []
    left = set(B)
    while left:
        o = point_orbit(stab, min(left))
        parts.append(len(o))
        left -= o
    return sorted(parts) == [len(B) // 2, len(B) // 2]


# -- subgroups -----------------------------------------------------------------


def all_subgroups(elems, n):
    """Every subgroup, by repeatedly joining with cyclic subgroups."""
    cyclic_subs = {}
    for e in elems:
        cyclic_subs.setdefault(frozenset(closure([e], n)), e)
    subs = {h: [e] for h, e in cyclic_subs.items()}
    frontier = dict(subs)
    while frontier:
        nxt = {}
        for h, gens in frontier.items():
            for c, x in cyclic_subs.items():
                if x in h:
                    continue
                k = frozenset(closure(gens + [x], n))
                if k not in subs:
                    subs[k] = nxt[k] = gens + [x]
        frontier = nxt
    return set(subs)


def subgroup_classes(elems, n):
    """Conjugacy classes of subgroups as a list of (order, orbit lengths) per class."""
    subs = all_subgroups(elems, n)
    left = set(subs)
    out = []
    while left:
        h = next(iter(left))
        cls = {frozenset(mul(mul(inv(g), x), g) for x in h) for g in elems}
        left -= cls
        out.append((len(h), tuple(sorted(len(o) for o in orbits_of(h, n)))))
    return sorted(out)


# -- the first sieve step, straight from its definition ------------------------


def step1_reference(v, stab_order):
    out = set()
    for k in range(3, v - 1):
        if k % 2:
            continue
        step = (v - 1) // gcd(v - 1, k - 1)  # r(k-1) divisible by v-1
        r = step
        while r <= 2 * stab_order:
            if r % 2 == 0 and stab_order % (r // 2) == 0:
                lam = r * (k - 1) // (v - 1)
                if (v * r) % k == 0:
                    b = v * r // k
                    g2 = gcd(r, 2 * lam)
                    if b >= v and lam >= g2 * g2:
                        out.add((v, b, r, k, lam))
            r += step
    return out
