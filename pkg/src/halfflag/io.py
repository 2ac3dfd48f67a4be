"""Plain-text formats for groups, point sets and designs.

Group file::

    degree 10
    name psl29-10
    order 360
    gen (3,9,7,8)(4,10,5,6)
    gen (1,8,2)(3,4,5)(6,10,7)

Set file: ``degree <n>`` and ``set <comma-separated points>``.
Design file: ``v <n>`` then one ``block <comma-separated points>`` per block.
Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .design import IncidenceStructure
from .group import PermGroup
from .perm import PointSet, parse_permutation


class FormatError(ValueError):
    pass


@dataclass
class GroupFile:
    group: PermGroup
    declared_order: int | None


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            key, _, rest = line.partition(" ")
            yield no, key, rest.strip()


def _int(value: str, no: int, what: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise FormatError(f"line {no}: bad {what} {value!r}") from None


def parse_group(text: str, check_order: bool = True) -> GroupFile:
    degree = None
    name = None
    order = None
    gens_text = []
    for no, key, rest in _lines(text):
        if key == "degree":
            degree = _int(rest, no, "degree")
        elif key == "name":
            name = rest
        elif key == "order":
            order = _int(rest, no, "order")
        elif key == "gen":
            gens_text.append((no, rest))
        else:
            raise FormatError(f"line {no}: unknown keyword {key!r}")
    if degree is None:
        raise FormatError("missing 'degree' line")
    gens = []
    for no, t in gens_text:
        try:
            gens.append(parse_permutation(t, degree))
        except ValueError as e:
            raise FormatError(f"line {no}: {e}") from None
    g = PermGroup(gens, degree, label=name)
    if check_order and order is not None and g.order() != order:
        raise FormatError(f"declared order {order} but the generators give {g.order()}")
    return GroupFile(g, order)


def read_group(path: str | Path, check_order: bool = True) -> PermGroup:
    return parse_group(Path(path).read_text(encoding="utf-8"), check_order).group


def format_group(g: PermGroup, name: str | None = None, order: int | None = None) -> str:
    lines = [f"degree {g.degree}"]
    if name or g.label:
        lines.append(f"name {name or g.label}")
    if order is not None:
        lines.append(f"order {order}")
    lines += [f"gen {p}" for p in g.generators]
    return "\n".join(lines) + "\n"


def write_group(g: PermGroup, path: str | Path, name: str | None = None, order: int | None = None) -> None:
    Path(path).write_text(format_group(g, name, order), encoding="utf-8")


def _points(rest: str, no: int) -> list[int]:
    if not rest:
        return []
    try:
        return [int(x) for x in rest.split(",")]
    except ValueError:
        raise FormatError(f"line {no}: bad point list {rest!r}") from None


def parse_set(text: str) -> PointSet:
    degree = None
    members = None
    for no, key, rest in _lines(text):
        if key == "degree":
            degree = _int(rest, no, "degree")
        elif key == "set":
            members = _points(rest, no)
        else:
            raise FormatError(f"line {no}: unknown keyword {key!r}")
    if degree is None or members is None:
        raise FormatError("set file needs 'degree' and 'set' lines")
    try:
        return PointSet(degree, members)
    except ValueError as e:
        raise FormatError(str(e)) from None


def read_set(path: str | Path) -> PointSet:
    return parse_set(Path(path).read_text(encoding="utf-8"))


def format_set(s: PointSet) -> str:
    return f"degree {s.degree}\nset {','.join(map(str, s.members))}\n"


def write_set(s: PointSet, path: str | Path) -> None:
    Path(path).write_text(format_set(s), encoding="utf-8")


def parse_design(text: str) -> IncidenceStructure:
    v = None
    blocks = []
    for no, key, rest in _lines(text):
        if key == "v":
            v = _int(rest, no, "v")
        elif key == "block":
            blocks.append(_points(rest, no))
        else:
            raise FormatError(f"line {no}: unknown keyword {key!r}")
    if v is None:
        raise FormatError("missing 'v' line")
    try:
        return IncidenceStructure(v, blocks)
    except ValueError as e:
        raise FormatError(str(e)) from None


def read_design(path: str | Path) -> IncidenceStructure:
    return parse_design(Path(path).read_text(encoding="utf-8"))


def format_design(d: IncidenceStructure) -> str:
    lines = [f"v {d.v}"]
    lines += ["block " + ",".join(map(str, B.members)) for B in d.blocks]
    return "\n".join(lines) + "\n"


def write_design(d: IncidenceStructure, path: str | Path) -> None:
    Path(path).write_text(format_design(d), encoding="utf-8")
