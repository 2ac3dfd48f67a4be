"""
Two half-flag-transitive designs on 176 points
==============================================

HS acts primitively on 176 points. Two of its block orbits are 2-designs on
which it acts half-flag-transitively.
"""

import time

from halfflag import builtin_example, classify_parameters, is_half_flag_transitive, is_primitive

# each example is the HS fixture plus one verified base block
for name in ("hs-176-d1", "hs-176-d2"):
    t0 = time.monotonic()
    ex = builtin_example(name)
    d = ex.design()
    p = classify_parameters(d)
    hf = is_half_flag_transitive(ex.group, d)
    print(f"{name}: {p}")
    print(f"  |G| = {ex.group.order()}, primitive: {is_primitive(ex.group)}")
    print(f"  |G_B| = {hf.stabilizer_order}, G_B orbits {list(hf.stabilizer_signature)}, on B {list(hf.restricted_orbits)}")
    print(f"  half-flag-transitive: {bool(hf)} ({time.monotonic() - t0:.1f}s)")
