"""Turn the GAP output in tools/gap into the package fixture catalog.

Every group is re-verified with the package's own code before it is
written: orders, subgroup membership, subdegrees, and for the HS entry the
block orbit lengths of the two base blocks.
"""

import json
import shutil
import sys
from pathlib import Path

from halfflag.action import subdegrees
from halfflag.group import PermGroup
from halfflag.io import format_group, write_set
from halfflag.perm import PointSet, parse_permutation
from halfflag.pipeline import SPORADIC_CANDIDATES

HERE = Path(__file__).parent
CATALOG = HERE.parent / "src" / "halfflag" / "catalog"


def parse_derived(text):
    rows = {}
    cur = None
    target = None
    for line in text.splitlines():
        key, _, rest = line.partition(" ")
        if key == "ROW":
            name, order, degree = rest.split()
            cur = {"order": int(order), "degree": int(degree), "gens": [], "subs": []}
            rows[name] = cur
            target = cur["gens"]
        elif key == "SUB":
            b, pos, order = map(int, rest.split())
            sub = {"b": b, "tom": pos, "order": order, "gens": []}
            cur["subs"].append(sub)
            target = sub["gens"]
        elif key == "gen":
            target.append(rest)
        elif key == "END":
            cur = None
    return rows


def signature(h):
    return tuple(sorted(len(o) for o in h.orbits()))


def write_group_file(path, g, name, order):
    path.write_text(format_group(g, name, order), encoding="utf-8")


def build_rows():
    data = parse_derived((HERE / "gap" / "derived.txt").read_text())
    for row in SPORADIC_CANDIDATES:
        d = data[row.entry]
        n = d["degree"]
        g = PermGroup([parse_permutation(s, n) for s in d["gens"]], n)
        assert g.order() == d["order"] == row.v * row.stab_order, row.entry
        sd = list(subdegrees(g))
        if sd != [1, *row.subdegrees]:
            # some printed rows list a 2-transitive action for a rank-3 group
            assert row.entry in ("M23-253a", "M23-253b", "HS-100", "HS.2-100"), (row.entry, sd)
            print(f"  {row.entry}: table subdegrees {[1, *row.subdegrees]}, computed {sd}")
        out = CATALOG / row.entry
        if out.exists():
            shutil.rmtree(out)
        (out / "subgroups").mkdir(parents=True)
        write_group_file(out / "group.grp", g, f"{row.group} on {row.v} points", d["order"])
        subs = {}
        labels = {}
        for s in d["subs"]:
            h = PermGroup([parse_permutation(x, n) for x in s["gens"]], n)
            assert h.order() == s["order"] and h.order() * s["b"] == g.order()
            assert h.is_subgroup_of(g)
            fname = f"b{s['b']}-c{s['tom']}.grp"
            write_group_file(out / "subgroups" / fname, h, None, s["order"])
            subs.setdefault(str(s["b"]), []).append(fname)
            labels[fname] = list(signature(h))
        for b in sorted({str(b) for b in _step1_bs(row)} - set(subs), key=int):
            subs[b] = []
        meta = {
            "name": f"{row.group} on {row.v} points",
            "group": row.group,
            "stabilizer": row.stabilizer,
            "order": d["order"],
            "stab_order": row.stab_order,
            "subdegrees": sd,
            "table_subdegrees": [1, *row.subdegrees],
            "source": "derived",
            "provenance": "tables of marks in GAP (tomlib); see tools/gap/derive.g",
            "subgroups": dict(sorted(subs.items(), key=lambda kv: int(kv[0]))),
            "subgroup_signatures": labels,
            "subgroups_complete": True,
        }
        (out / "meta.json").write_text(json.dumps(meta, indent=1) + "\n")
        print(row.entry, g.order(), sd, sum(len(v) for v in subs.values()), "classes")


def _step1_bs(row):
    from halfflag.sieve import step1_enumerate

    c = row.candidate()
    return {t.b for t in step1_enumerate(c.v, c.stab_order, True, c.r_max)}


def _class_with(entry, b, sig):
    meta = json.loads((CATALOG / entry / "meta.json").read_text())
    hits = [f for f in meta["subgroups"][str(b)] if tuple(meta["subgroup_signatures"][f]) == sig]
    assert len(hits) == 1, (b, sig, hits)
    return hits[0]


def build_hs_blocks():
    from halfflag.io import read_group

    out = CATALOG / "HS-176"
    g = read_group(out / "group.grp")
    meta = json.loads((out / "meta.json").read_text())
    aliases = {
        "H1": _class_with("HS-176", 23100, (16, 80, 80)),
        "H2": _class_with("HS-176", 23100, (40, 40, 96)),
        "H3": _class_with("HS-176", 28875, (16, 64, 96)),
        "H4": _class_with("HS-176", 28875, (48, 64, 64)),
    }
    meta["aliases"] = aliases
    from halfflag.io import read_group as rg

    def orbits(label):
        h = rg(out / "subgroups" / aliases[label])
        return [PointSet(176, o) for o in h.orbits()]

    o = orbits("H1")
    d1 = [x for x in o if len(x) == 80]
    B1 = d1[0] | d1[1]
    assert g.set_orbit(B1) == 23100
    o = orbits("H4")
    d2 = [x for x in o if len(x) == 64]
    B2 = d2[0] | d2[1]
    assert g.set_orbit(B2) == 28875
    write_set(B1, out / "block-D1.set")
    write_set(B2, out / "block-D2.set")
    meta["blocks"] = {"D1": "union of the two 80-orbits of H1", "D2": "union of the two 64-orbits of H4"}
    (out / "meta.json").write_text(json.dumps(meta, indent=1) + "\n")
    print("HS-176 blocks written")


def build_imprimitive25():
    lines = (HERE / "gap" / "imprimitive25.txt").read_text().splitlines()
    gens = [parse_permutation(x.partition(" ")[2], 25) for x in lines if x.startswith("gen ")]
    g = PermGroup(gens, 25)
    assert g.order() == 400
    B = PointSet(25, [1, 2, 9, 24])
    assert g.set_orbit(B) == 100
    out = CATALOG / "imprimitive-25"
    if out.exists():
        shutil.rmtree(out)
    out.mkdir(parents=True)
    write_group_file(out / "group.grp", g, "transitive group 25/32", 400)
    write_set(B, out / "block-B.set")
    meta = {
        "name": "transitive group 25/32",
        "order": 400,
        "stab_order": 16,
        "subdegrees": list(subdegrees(g)),
        "source": "derived",
        "provenance": "TransitiveGroup(25,32) in GAP (transgrp); see tools/gap/imprimitive25.g",
    }
    (out / "meta.json").write_text(json.dumps(meta, indent=1) + "\n")
    print("imprimitive-25", meta["subdegrees"])


if __name__ == "__main__":
    sys.setrecursionlimit(10000)
    build_rows()
    build_hs_blocks()
    build_imprimitive25()
