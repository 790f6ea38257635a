"""Minimal and maximal cones of su(2,2) and a point that separates them.

Run: python3 demos/su22_cones.py
"""
from wedgelab import models, roots, suites

spec, rs, pos, mm = suites.root_data("su22")
print(f"{len(rs.roots)} restricted roots, multiplicities {sorted({r.multiplicity for r in rs.roots})}")
print(f"compact roots: {len(rs.compact_indices())}, order of W_k: {len(roots.weyl_group_k(rs))}")

z = models.diag_to_a(spec, [2, 2, 1, -5])
print("z = diag(2, 2, 1, -5) in a-coordinates:", z)
print("z in C_max:", roots.in_cone(mm.c_max, z))
print("z in C_min:", roots.in_cone(mm.c_min, z))

for name in suites.ROOT_SPECS:
    *_, cones = suites.root_data(name)
    print(f"{name:12} C_min inside C_max: {cones.certificates['min_in_max']}")
