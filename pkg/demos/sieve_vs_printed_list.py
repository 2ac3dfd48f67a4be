"""
The Step-1 sieve for HS on 176 points
=====================================

Arithmetic alone leaves a list of candidate block counts b. Here the sieve
output is set against the list printed with the original result.
"""

from pathlib import Path

from halfflag import r_max, step1_enumerate
from halfflag.sieve import compare_b_values, group_by_b, parse_b_list

v, stab = 176, 252000
rm = r_max(v, stab, (175,))
tuples = step1_enumerate(v, stab, True, rm)
print(f"r_max = {rm}, {len(tuples)} tuples, {len(group_by_b(tuples))} distinct b")

printed = Path(__file__).resolve().parent.parent / "tests" / "data" / "hs176_printed_b.txt"
diff = compare_b_values(tuples, parse_b_list(printed.read_text()))
print(f"common: {len(diff.common)}")
print(f"only from the sieve ({len(diff.only_in_sieve)}):", diff.only_in_sieve)
print(f"only in the printed list ({len(diff.only_in_list)}):", diff.only_in_list)

# 1500 fails vr = bk with integral lambda
for k in (44, 88, 132):
    r, rem = divmod(1500 * k, v)
    print(f"b=1500, k={k}: r={r}{' (not integral)' if rem else ''}, r(k-1)/(v-1) = {r * (k - 1) / (v - 1):.3f}")
