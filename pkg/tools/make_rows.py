"""Write tools/gap/rows.g: the candidate rows and their sieve b values."""

from pathlib import Path

from halfflag.pipeline import SPORADIC_CANDIDATES
from halfflag.sieve import step1_enumerate

TOM_NAMES = {"M22:2": "M22.2", "HS:2": "HS.2"}
# the two M23 stabilizers of order 40320 differ in perfectness
PERFECT = {"M23-253a": "false", "M23-253b": "true"}


def main():
    lines = ["ROWS := ["]
    for r in SPORADIC_CANDIDATES:
        c = r.candidate()
        bs = sorted({t.b for t in step1_enumerate(c.v, c.stab_order, True, c.r_max)})
        tom = TOM_NAMES.get(r.group, r.group)
        perf = PERFECT.get(r.entry, "fail")
        lines.append(
            f' rec(entry:="{r.entry}", tom:="{tom}", v:={c.v}, stab:={c.stab_order}, perfect:={perf}, bs:={bs}),'
        )
    lines[-1] = lines[-1].rstrip(",")
    lines.append("];")
    out = Path(__file__).parent / "gap" / "rows.g"
    out.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
