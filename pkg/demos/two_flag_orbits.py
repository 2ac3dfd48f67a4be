"""
Two equal flag orbits are not enough
====================================

PSL(2,9) on 10 points has two block orbits, each a flag-transitive
2-(10,4,2). Their union is a 2-(10,4,4) with two flag orbits of equal size,
but the group is not half-flag-transitive on it.
"""

from halfflag import builtin_example, classify_parameters, flag_orbits, from_base_blocks, is_flag_transitive, is_half_flag_transitive

ex = builtin_example("psl29-10")
d = ex.design()
print(classify_parameters(d))
print("flag orbits:", flag_orbits(ex.group, d).orbit_sizes)

hf = is_half_flag_transitive(ex.group, d)
print("half-flag-transitive:", bool(hf), "-", hf.reason)

# each base block alone
for b in ex.bases:
    part = from_base_blocks(ex.group, [b])
    print(f"  orbit of {list(b.members)}: {classify_parameters(part)}, flag-transitive {is_flag_transitive(ex.group, part)}")
