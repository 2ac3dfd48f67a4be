"""
Half-flag-transitive on an imprimitive group
============================================

Small lambda leaves room for imprimitive groups: the biplane on 16 points
and a 2-(25,4,2) both carry half-flag-transitive actions of imprimitive
groups. Both sit below the bound lambda >= gcd(r, 2 lambda)^2.
"""

from math import gcd

from halfflag import builtin_example, classify_parameters, find_block_system, is_half_flag_transitive, is_primitive

for name in ("biplane-16", "imprimitive-25"):
    ex = builtin_example(name)
    d = ex.design()
    p = classify_parameters(d)
    hf = is_half_flag_transitive(ex.group, d)
    g2 = gcd(p.r, 2 * p.lam)
    print(f"{name}: {p}, |G| = {ex.group.order()}")
    print(f"  half-flag: {bool(hf)}, G_B on B {list(hf.restricted_orbits)}")
    print(f"  primitive: {is_primitive(ex.group)}, a block system: {find_block_system(ex.group)}")
    print(f"  lambda = {p.lam} < gcd(r,2lambda)^2 = {g2 * g2}")
