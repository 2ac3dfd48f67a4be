"""Permutations and point sets on {1, ..., n}.

Points are 1-based at every public surface. Internally a permutation is a
tuple of 0-based images, which is what the group algorithms work on.

Composition is left-to-right: ``a * b`` applies ``a`` first, then ``b``,
so ``(a * b)(x) == b(a(x))``.
"""

from __future__ import annotations

import re
from functools import reduce
from math import lcm
from typing import Iterable, Sequence

import numpy as np

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    """An immutable bijection of {1..degree}."""

    __slots__ = ("_img", "_hash")

    def __init__(self, images: Sequence[int]):
        img = tuple(int(x) - 1 for x in images)
        n = len(img)
        if n < 1:
            raise ValueError("degree must be at least 1")
        if sorted(img) != list(range(n)):
            raise ValueError("images do not form a bijection of {1..%d}" % n)
        self._img = img
        self._hash = None

    @classmethod
    def _raw(cls, img: tuple[int, ...]) -> "Permutation":
        # trusted 0-based tuple, no validation
        p = object.__new__(cls)
        p._img = img
        p._hash = None
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        if degree < 1:
            raise ValueError("degree must be at least 1")
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        img = list(range(degree))
        seen: set[int] = set()
        for cyc in cycles:
            for x in cyc:
                if not 1 <= x <= degree:
                    raise ValueError(f"point {x} out of range 1..{degree}")
                if x in seen:
                    raise ValueError(f"point {x} repeated across cycles")
                seen.add(x)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                img[a - 1] = b - 1
        return cls._raw(tuple(img))

    @property
    def degree(self) -> int:
        return len(self._img)

    @property
    def images(self) -> tuple[int, ...]:
        """1-based image list: ``images[i-1]`` is the image of point ``i``."""
        return tuple(x + 1 for x in self._img)

    def __call__(self, point: int) -> int:
        if not 1 <= point <= len(self._img):
            raise ValueError(f"point {point} out of range 1..{len(self._img)}")
        return self._img[point - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        if not isinstance(other, Permutation):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")
        return Permutation._raw(compose(self._img, other._img))

    def __pow__(self, e: int) -> "Permutation":
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        acc = tuple(range(self.degree))
        b = base._img
        while e:
            if e & 1:
                acc = compose(acc, b)
            b = compose(b, b)
            e >>= 1
        return Permutation._raw(acc)

    def inverse(self) -> "Permutation":
        return Permutation._raw(invert(self._img))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self._img))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point, 1-based."""
        seen = [False] * len(self._img)
        out = []
        for i in range(len(self._img)):
            if seen[i] or self._img[i] == i:
                continue
            cyc = [i]
            seen[i] = True
            j = self._img[i]
            while j != i:
                seen[j] = True
                cyc.append(j)
                j = self._img[j]
            out.append(tuple(x + 1 for x in cyc))
        return out

    def order(self) -> int:
        return reduce(lcm, (len(c) for c in self.cycles()), 1)

    def moved_points(self) -> list[int]:
        return [i + 1 for i, x in enumerate(self._img) if i != x]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self._img == other._img

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._img)
        return self._hash

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation({self}, degree={self.degree})"


def compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """0-based left-to-right product: apply ``a`` then ``b``."""
    return tuple([b[x] for x in a])


def invert(a: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


def parse_permutation(text: str, degree: int) -> Permutation:
    """Parse disjoint-cycle notation such as ``"(1,8,2)(3,4,5)"``.

    Points may be separated by commas and/or whitespace. ``"()"`` is the
    identity. Points absent from every cycle are fixed.
    """
    if degree < 1:
        raise ValueError("degree must be at least 1")
    s = text.strip()
    if not s:
        raise ValueError("empty permutation text")
    pos = 0
    cycles = []
    for m in _CYCLE_RE.finditer(s):
        if s[pos:m.start()].strip():
            raise ValueError(f"malformed cycle notation: {text!r}")
        pos = m.end()
        body = m.group(1).strip()
        if not body:
            continue
        parts = [p for p in re.split(r"[,\s]+", body) if p]
        try:
            pts = [int(p) for p in parts]
        except ValueError:
            raise ValueError(f"malformed cycle notation: {text!r}") from None
        cycles.append(pts)
    if s[pos:].strip() or pos == 0:
        raise ValueError(f"malformed cycle notation: {text!r}")
    for cyc in cycles:
        if len(set(cyc)) != len(cyc):
            raise ValueError(f"point repeated within a cycle: {text!r}")
    return Permutation.from_cycles(cycles, degree)


class PointSet:
    """An immutable subset of {1..degree}.

    The canonical key is a little-endian bit vector of ceil(degree/8) bytes,
    bit ``i-1`` set iff point ``i`` is a member.
    """

    __slots__ = ("_degree", "_members", "_key")

    def __init__(self, degree: int, members: Iterable[int]):
        if degree < 1:
            raise ValueError("degree must be at least 1")
        pts = sorted(set(int(x) for x in members))
        if pts and (pts[0] < 1 or pts[-1] > degree):
            raise ValueError(f"members must lie in 1..{degree}")
        self._degree = degree
        self._members = tuple(pts)
        self._key = encode_points(np.asarray(pts, dtype=np.int64) - 1, degree)

    @classmethod
    def from_key(cls, degree: int, key: bytes) -> "PointSet":
        bits = np.unpackbits(np.frombuffer(key, dtype=np.uint8), bitorder="little")[:degree]
        return cls(degree, (np.flatnonzero(bits) + 1).tolist())

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def members(self) -> tuple[int, ...]:
        return self._members

    @property
    def key(self) -> bytes:
        return self._key

    def indices(self) -> np.ndarray:
        """0-based member indices as an int array."""
        return np.asarray(self._members, dtype=np.int64) - 1

    def image(self, perm: Permutation) -> "PointSet":
        if perm.degree != self._degree:
            raise ValueError("degree mismatch")
        return PointSet(self._degree, (perm._img[x - 1] + 1 for x in self._members))

    def __len__(self) -> int:
        return len(self._members)

    def __iter__(self):
        return iter(self._members)

    def __contains__(self, x: object) -> bool:
        return x in set(self._members)

    def __or__(self, other: "PointSet") -> "PointSet":
        if other.degree != self._degree:
            raise ValueError("degree mismatch")
        return PointSet(self._degree, self._members + other._members)

    def isdisjoint(self, other: "PointSet") -> bool:
        return set(self._members).isdisjoint(other._members)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PointSet)
            and other._degree == self._degree
            and other._key == self._key
        )

    def __hash__(self) -> int:
        return hash((self._degree, self._key))

    def __repr__(self) -> str:
        return f"PointSet({self._degree}, {list(self._members)})"


def encode_points(idx: np.ndarray, degree: int) -> bytes:
    bits = np.zeros(((degree + 7) // 8) * 8, dtype=np.uint8)
    bits[idx] = 1
    return np.packbits(bits, bitorder="little").tobytes()


def encode_rows(rows: np.ndarray, degree: int) -> np.ndarray:
    """Canonical keys for many equal-size sets at once.

    ``rows`` is an (m, k) array of 0-based points; returns an (m, nbytes)
    uint8 array whose rows are the little-endian bit vectors.
    """
    m = rows.shape[0]
    width = ((degree + 7) // 8) * 8
    bits = np.zeros((m, width), dtype=np.uint8)
    if rows.size:
        bits[np.arange(m)[:, None], rows] = 1
    return np.packbits(bits, axis=1, bitorder="little")
