"""Arithmetic conditions on design parameters.

Everything here is exact integer arithmetic; Python ints cover the large
group orders without a separate big-integer path.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import asdict, dataclass, field
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

SIEVE_COLUMNS = ("v", "b", "r", "k", "lambda", "gcd_r_2lambda", "passes")


class InconsistentParameters(ValueError):
    pass


@dataclass(frozen=True)
class ParamTuple:
    v: int
    b: int
    r: int
    k: int
    lam: int

    @property
    def g2(self) -> int:
        """gcd(r, 2*lambda)."""
        return gcd(self.r, 2 * self.lam)

    @property
    def reduced_r(self) -> int:
        """r / gcd(r, 2*lambda)."""
        return self.r // self.g2


@dataclass(frozen=True)
class CandidateAction:
    label: str
    v: int
    stab_order: int
    subdegrees: tuple[int, ...]  # nontrivial ones only
    group_order: int = 0
    r_max: int = field(init=False)

    def __post_init__(self):
        if sum(self.subdegrees) != self.v - 1:
            raise InconsistentParameters(
                f"{self.label}: nontrivial subdegrees sum to {sum(self.subdegrees)}, expected {self.v - 1}"
            )
        if not self.group_order:
            object.__setattr__(self, "group_order", self.v * self.stab_order)
        object.__setattr__(self, "r_max", r_max(self.v, self.stab_order, self.subdegrees))


def r_max(v: int, stab_order: int, subdegrees: Sequence[int]) -> int:
    """gcd(v-1, |G_alpha|, d_1, ..., d_s) over the nontrivial subdegrees."""
    sd = [d for d in subdegrees]
    if sd and sd[0] == 1 and sum(sd) == v:
        sd = sd[1:]
    if sum(sd) != v - 1:
        raise InconsistentParameters(f"subdegrees sum to {sum(sd)}, expected {v - 1}")
    return reduce(gcd, sd, gcd(v - 1, stab_order))


def passes_rmax(v: int, rmax: int) -> bool:
    return rmax * rmax > v


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def step1_enumerate(
    v: int,
    stab_order: int,
    require_rmax_divisibility: bool = False,
    rmax: int | None = None,
) -> list[ParamTuple]:
    """All (v, b, r, k, lambda) allowed by the first sieve step, sorted by (b, k).

    Conditions: k and r even with 2 < k < v-1; r/2 divides |G_alpha|;
    lambda = r(k-1)/(v-1) and b = vr/k are integers; b >= v; and
    lambda >= gcd(r, 2 lambda)^2. With ``require_rmax_divisibility`` the
    tuple must also have r/gcd(r, 2 lambda) dividing ``rmax``.
    """
    if v < 4:
        raise ValueError("v must be at least 4")
    if require_rmax_divisibility and rmax is None:
        raise ValueError("rmax is required for the divisibility filter")
    halves = divisors(stab_order)
    out = []
    for k in range(4, v - 1, 2):
        for h in halves:
            r = 2 * h
            num = r * (k - 1)
            if num % (v - 1):
                continue
            lam = num // (v - 1)
            if (v * r) % k:
                continue
            b = v * r // k
            if b < v:
                continue
            g2 = gcd(r, 2 * lam)
            if lam < g2 * g2:
                continue
            if require_rmax_divisibility and rmax % (r // g2):
                continue
            out.append(ParamTuple(v, b, r, k, lam))
    out.sort(key=lambda t: (t.b, t.k))
    return out


def group_by_b(tuples: Iterable[ParamTuple]) -> dict[int, list[ParamTuple]]:
    out: dict[int, list[ParamTuple]] = {}
    for t in tuples:
        out.setdefault(t.b, []).append(t)
    return out


def check_tuple(t: ParamTuple) -> list[str]:
    """Independent re-check of a sieve tuple; returns the failed conditions."""
    fails = []
    if t.v * t.r != t.b * t.k:
        fails.append("vr = bk")
    if t.lam * (t.v - 1) != t.r * (t.k - 1):
        fails.append("lambda(v-1) = r(k-1)")
    if not 2 < t.k < t.v - 1:
        fails.append("2 < k < v-1")
    if t.b < t.v:
        fails.append("b >= v")
    if t.k % 2 or t.r % 2:
        fails.append("k, r even")
    if t.lam < t.g2 ** 2:
        fails.append("lambda >= gcd(r,2lambda)^2")
    return fails


def _require_consistent(v: int, k: int, lam: int, r: int) -> None:
    if lam * (v - 1) != r * (k - 1):
        raise InconsistentParameters(f"lambda(v-1) = {lam * (v - 1)} but r(k-1) = {r * (k - 1)}")


@dataclass(frozen=True)
class PrimitivityCriteria:
    """Each flag, when true, forces a half-flag-transitive group to be point-primitive."""

    lambda_bound: bool  # lambda >= gcd(r, 2 lambda)^2
    replication_bound: bool  # r > 4 lambda (k - 2)
    gcd_bound: bool  # gcd(v-1, 2k-2) <= 2

    @property
    def any(self) -> bool:
        return self.lambda_bound or self.replication_bound or self.gcd_bound


def theorem1_criteria(v: int, k: int, lam: int, r: int) -> PrimitivityCriteria:
    _require_consistent(v, k, lam, r)
    g2 = gcd(r, 2 * lam)
    return PrimitivityCriteria(
        lambda_bound=lam >= g2 * g2,
        replication_bound=r > 4 * lam * (k - 2),
        gcd_bound=gcd(v - 1, 2 * k - 2) <= 2,
    )


def prop31_witness(v: int, k: int, lam: int, r: int) -> tuple[bool, bool]:
    """Necessary conditions for an imprimitive half-flag-transitive group.

    Returns (lambda < gcd(r,2 lambda)^2, r <= 4 lambda (k-2)).
    """
    _require_consistent(v, k, lam, r)
    g2 = gcd(r, 2 * lam)
    return lam < g2 * g2, r <= 4 * lam * (k - 2)


def reduced_r_squared_exceeds_v(v: int, r: int, lam: int) -> bool:
    """r^2 / gcd(r, 2 lambda)^2 > v."""
    return (r // gcd(r, 2 * lam)) ** 2 > v


def lemma25_filter(group_order: int, stab_order: int) -> bool:
    """True iff |G| <= 4 |G_alpha|^3, i.e. the candidate survives."""
    if stab_order <= 0 or group_order % stab_order:
        raise ValueError("stabilizer order must divide the group order")
    return group_order <= 4 * stab_order ** 3


def lemma23_divides(r: int, lam: int, subdegrees: Iterable[int]) -> bool:
    """r / gcd(r, 2 lambda) divides every nontrivial subdegree."""
    q = r // gcd(r, 2 * lam)
    return all(d % q == 0 for d in subdegrees if d != 1)


# Monster and the almost-simple candidates X <= H <= Aut(X) not in the Atlas list
MONSTER_ORDER = 808017424794512875886459904961710757005754368000000000
MONSTER_CANDIDATE_AUT_ORDERS = {
    "L2(13)": 2184,
    "U3(4)": 249600,
    "U3(8)": 99283968,
    "Sz(8)": 87360,
}


def monster_exclusions() -> dict[str, bool]:
    """Whether each candidate stabilizer survives the |G| <= 4|G_alpha|^3 bound in M."""
    out = {}
    for name, aut in MONSTER_CANDIDATE_AUT_ORDERS.items():
        # |H| <= |Aut(X)|, so failing at |Aut(X)| fails for every H
        out[name] = MONSTER_ORDER <= 4 * aut ** 3
    return out


# -- serialization -----------------------------------------------------------


def _row(t: ParamTuple, rmax: int | None) -> dict:
    passes = True if rmax is None else rmax % t.reduced_r == 0
    return {"v": t.v, "b": t.b, "r": t.r, "k": t.k, "lambda": t.lam, "gcd_r_2lambda": t.g2, "passes": passes}


def to_csv(tuples: Iterable[ParamTuple], rmax: int | None = None) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SIEVE_COLUMNS, lineterminator="\n")
    w.writeheader()
    for t in tuples:
        w.writerow(_row(t, rmax))
    return buf.getvalue()


def to_json(tuples: Iterable[ParamTuple], rmax: int | None = None) -> str:
    return json.dumps([_row(t, rmax) for t in tuples], indent=1)


@dataclass
class BListDiff:
    only_in_sieve: list[int]
    only_in_list: list[int]
    common: list[int]

    def to_dict(self) -> dict:
        return asdict(self)


def compare_b_values(tuples: Iterable[ParamTuple], listed: Iterable[int]) -> BListDiff:
    mine = {t.b for t in tuples}
    theirs = set(listed)
    return BListDiff(sorted(mine - theirs), sorted(theirs - mine), sorted(mine & theirs))


def parse_b_list(text: str) -> list[int]:
    """Integers from a free-form list such as ``{1500, 1536, ...}``; ``#`` starts a comment."""
    body = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    return [int(x) for x in re.findall(r"\d+", body)]
