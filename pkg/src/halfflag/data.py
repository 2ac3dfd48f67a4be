"""Built-in groups and designs, and the on-disk fixture catalog.

Catalog layout: one directory per entry holding ``group.grp``, optional
``block-*.set`` files, optional subgroup files under ``subgroups/`` and a
``meta.json`` with the claimed order, stabilizer order, subdegrees and a
source tag (``paper-text`` or ``derived``).
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .action import subdegrees
from .design import IncidenceStructure, from_base_blocks
from .group import PermGroup
from .io import FormatError, read_group, read_set
from .perm import Permutation, PointSet, parse_permutation

CATALOG_ENV = "HALFFLAG_FIXTURES"


class CatalogError(ValueError):
    pass


def catalog_root() -> Path:
    env = os.environ.get(CATALOG_ENV)
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "catalog"


@dataclass
class CatalogEntry:
    name: str
    group: PermGroup
    blocks: dict[str, PointSet]
    meta: dict
    path: Path

    @property
    def stab_order(self) -> int:
        return self.meta["stab_order"]

    def subgroup_fixtures(self) -> dict[int, list[PermGroup]]:
        """Subgroup classes listed in the metadata, keyed by index b.

        Every generator is checked for membership and every order against
        the parent order divided by b.
        """
        from .subgroups import load_subgroup_fixture, verify_subgroup

        out: dict[int, list[PermGroup]] = {}
        for b, files in self.meta.get("subgroups", {}).items():
            hs = []
            for f in files:
                h = load_subgroup_fixture(self.group, self.path / "subgroups" / f)
                h.label = Path(f).stem
                verify_subgroup(self.group, h, int(b))
                hs.append(h)
            out[int(b)] = hs
        return out

    @property
    def subgroups_complete(self) -> bool:
        """Whether the listed classes are claimed to be all classes for every b."""
        return bool(self.meta.get("subgroups_complete", False))


def _check_entry(name: str, g: PermGroup, meta: dict) -> None:
    if g.order() != meta["order"]:
        raise CatalogError(f"{name}: order {g.order()} but metadata says {meta['order']}")
    if not g.is_transitive():
        raise CatalogError(f"{name}: group is not transitive")
    stab = g.order() // g.degree
    if stab != meta["stab_order"]:
        raise CatalogError(f"{name}: stabilizer order {stab} but metadata says {meta['stab_order']}")
    if "subdegrees" in meta:
        sd = list(subdegrees(g))
        if sd != sorted(meta["subdegrees"]):
            raise CatalogError(f"{name}: subdegrees {sd} but metadata says {meta['subdegrees']}")


def load_entry(path: str | Path, verify: bool = True) -> CatalogEntry:
    path = Path(path)
    meta = json.loads((path / "meta.json").read_text(encoding="utf-8"))
    g = read_group(path / "group.grp")
    g.label = meta.get("name", path.name)
    blocks = {p.stem[len("block-"):]: read_set(p) for p in sorted(path.glob("block-*.set"))}
    if verify:
        _check_entry(path.name, g, meta)
    return CatalogEntry(path.name, g, blocks, meta, path)


class FixtureCatalog:
    """Read-only view of a catalog directory."""

    def __init__(self, root: str | Path | None = None):
        self.root = Path(root) if root is not None else catalog_root()
        self._cache: dict[str, CatalogEntry] = {}

    def names(self) -> list[str]:
        if not self.root.is_dir():
            return []
        return sorted(p.name for p in self.root.iterdir() if (p / "meta.json").is_file())

    def __contains__(self, name: str) -> bool:
        return (self.root / name / "meta.json").is_file()

    def load(self, name: str, verify: bool = True) -> CatalogEntry:
        if name not in self._cache:
            if name not in self:
                raise CatalogError(f"no catalog entry {name!r} under {self.root}")
            self._cache[name] = load_entry(self.root / name, verify)
        return self._cache[name]


@dataclass
class VerifyResult:
    name: str
    ok: bool
    message: str
    derived: dict = field(default_factory=dict)


def catalog_verify(root: str | Path | None = None) -> list[VerifyResult]:
    """Load every entry, recompute order, stabilizer order and subdegrees.

    Failures are reported per entry; one bad entry never stops the run.
    """
    cat = FixtureCatalog(root)
    out = []
    for name in cat.names():
        try:
            e = load_entry(cat.root / name, verify=False)
            g = e.group
            derived = {
                "order": g.order(),
                "stab_order": g.order() // g.degree,
                "subdegrees": list(subdegrees(g)),
            }
            _check_entry(name, g, e.meta)
            for key, s in e.blocks.items():
                if s.degree != g.degree:
                    raise CatalogError(f"{name}: block {key} has degree {s.degree}")
            e.subgroup_fixtures()
            out.append(VerifyResult(name, True, "ok", derived))
        except (OSError, ValueError, KeyError) as exc:
            out.append(VerifyResult(name, False, f"{type(exc).__name__}: {exc}"))
    return out


# -- constructions ----------------------------------------------------------------


def vector_to_point(c: tuple[int, ...]) -> int:
    """Binary vector (c1..c4) to point 1 + sum c_i 2^(i-1)."""
    return 1 + sum(ci << i for i, ci in enumerate(c))


def point_to_vector(p: int, dim: int = 4) -> tuple[int, ...]:
    return tuple(((p - 1) >> i) & 1 for i in range(dim))


BIPLANE_BASE = (0b0000, 0b0001, 0b0010, 0b0100, 0b1000, 0b1111)


def _affine_perm(cols: tuple[int, ...], c: int) -> tuple[int, ...]:
    """x -> Ax + c on 4-bit integers, A given by the images of e_1..e_4."""
    img = []
    for x in range(16):
        y = c
        for i in range(4):
            if x >> i & 1:
                y ^= cols[i]
        img.append(y)
    return tuple(img)


def _find_order3_affine() -> tuple[int, ...]:
    """First affine map (in a fixed search order) of order 3 stabilizing the
    base block and splitting it into two orbits of length 3."""
    base = set(BIPLANE_BASE)
    for c in BIPLANE_BASE:
        # images of e_i must land in base - c for the map to preserve the base
        options = [x ^ c for x in BIPLANE_BASE if x ^ c]
        for cols in itertools.product(options, repeat=4):
            img = _affine_perm(cols, c)
            if len(set(img)) != 16 or {img[x] for x in base} != base:
                continue
            p = Permutation(tuple(x + 1 for x in img))
            if p.order() != 3:
                continue
            cyc = [cy for cy in p.cycles() if cy[0] - 1 in base]
            if sorted(len(cy) for cy in cyc) == [3, 3]:
                return img
    raise AssertionError("no order-3 affine map found")


def build_affine_biplane() -> tuple[PermGroup, IncidenceStructure]:
    """The (16,6,2) biplane from the difference set {0, e1..e4, e1+..+e4}.

    The group is the 16 translations together with an affine map of
    order 3 fixing the base block; it has order 48.
    """
    trans = [Permutation(tuple((x ^ (1 << i)) + 1 for x in range(16))) for i in range(4)]
    a = Permutation(tuple(x + 1 for x in _find_order3_affine()))
    g = PermGroup(trans + [a], 16, label="biplane-16")
    blocks = [[(x ^ t) + 1 for x in BIPLANE_BASE] for t in range(16)]
    return g, IncidenceStructure(16, blocks)


def wreath_product_action(k: PermGroup, m: int = 2) -> PermGroup:
    """K wr S_2 on ordered pairs; pair (a, b) is point (a-1)*n + b."""
    if m != 2:
        raise ValueError("only m = 2 is supported")
    if not k.is_transitive():
        raise ValueError("component group must be transitive")
    n = k.degree

    def pt(a, b):
        return a * n + b

    gens = []
    for s in k._raw:
        gens.append(Permutation(tuple(pt(s[a], b) + 1 for a in range(n) for b in range(n))))
        gens.append(Permutation(tuple(pt(a, s[b]) + 1 for a in range(n) for b in range(n))))
    gens.append(Permutation(tuple(pt(b, a) + 1 for a in range(n) for b in range(n))))
    label = f"{k.label} wr S2" if k.label else None
    return PermGroup(gens, n * n, label=label)


def pair_point(a: int, b: int, n: int) -> int:
    """Point number of the ordered pair (a, b), both 1-based."""
    return (a - 1) * n + b


def two_transitive_degree5() -> dict[str, PermGroup]:
    """The 2-transitive groups of degree 5: AGL(1,5), A5 and S5."""
    p = lambda s: parse_permutation(s, 5)
    return {
        "AGL(1,5)": PermGroup([p("(1,2,3,4,5)"), p("(2,3,5,4)")], 5, label="AGL(1,5)"),
        "A5": PermGroup([p("(1,2,3,4,5)"), p("(1,2,3)")], 5, label="A5"),
        "S5": PermGroup([p("(1,2,3,4,5)"), p("(1,2)")], 5, label="S5"),
    }


def two_transitive_degree7() -> dict[str, PermGroup]:
    """The 2-transitive groups of degree 7: AGL(1,7), L3(2), A7 and S7."""
    p = lambda s: parse_permutation(s, 7)
    return {
        "AGL(1,7)": PermGroup([p("(1,2,3,4,5,6,7)"), p("(2,4,3,7,5,6)")], 7, label="AGL(1,7)"),
        "L3(2)": PermGroup([p("(1,2,3,4,5,6,7)"), p("(2,3,5)(4,7,6)"), p("(1,2)(3,6)")], 7, label="L3(2)"),
        "A7": PermGroup([p("(1,2,3,4,5,6,7)"), p("(1,2,3)")], 7, label="A7"),
        "S7": PermGroup([p("(1,2,3,4,5,6,7)"), p("(1,2)")], 7, label="S7"),
    }


# -- built-in examples ------------------------------------------------------------


@dataclass
class Example:
    name: str
    group: PermGroup
    bases: list[PointSet]
    meta: dict = field(default_factory=dict)

    def design(self) -> IncidenceStructure:
        return from_base_blocks(self.group, self.bases)


PSL29_GENS = ("(3,9,7,8)(4,10,5,6)", "(1,8,2)(3,4,5)(6,10,7)")
PSL29_BASES = ((1, 2, 4, 5), (1, 2, 3, 7))

# catalog entry and block file behind each derived example
_CATALOG_EXAMPLES = {
    "imprimitive-25": ("imprimitive-25", ["B"]),
    "hs-176-d1": ("HS-176", ["D1"]),
    "hs-176-d2": ("HS-176", ["D2"]),
}

MATHIEU_ENTRIES = ("M11-11", "M11-12", "M11-55", "M12-12", "M22-22", "M22-176", "M22.2-22", "M23-23", "M24-24")


def builtin_names() -> list[str]:
    return ["psl29-10", "biplane-16", *_CATALOG_EXAMPLES, *MATHIEU_ENTRIES]


def builtin_example(name: str, catalog: FixtureCatalog | None = None) -> Example:
    if name == "psl29-10":
        g = PermGroup([parse_permutation(s, 10) for s in PSL29_GENS], 10, label="PSL(2,9)")
        if g.order() != 360 or not g.is_transitive():
            raise CatalogError("psl29-10 generators do not give a transitive group of order 360")
        return Example(name, g, [PointSet(10, b) for b in PSL29_BASES], {"order": 360, "source": "paper-text"})
    if name == "biplane-16":
        g, d = build_affine_biplane()
        if g.order() != 48:
            raise CatalogError("biplane group does not have order 48")
        return Example(name, g, [d.blocks[0]], {"order": 48, "source": "derived"})
    cat = catalog or FixtureCatalog()
    if name in _CATALOG_EXAMPLES:
        entry_name, keys = _CATALOG_EXAMPLES[name]
        e = cat.load(entry_name)
        return Example(name, e.group, [e.blocks[k] for k in keys], e.meta)
    if name in MATHIEU_ENTRIES:
        e = cat.load(name)
        return Example(name, e.group, [], e.meta)
    raise KeyError(f"unknown example {name!r}; known: {', '.join(builtin_names())}")


def incidence_rows(d: IncidenceStructure) -> np.ndarray:
    """Sorted block member lists as a (b, k) array (uniform block size)."""
    return np.array([B.members for B in d.blocks])
