"""Five membership tests for the right wedge of de Sitter space, side by side.

Run: python3 demos/desitter_wedge.py
"""
import numpy as np

from wedgelab import quadric, wedge

rng = np.random.default_rng(7)
points = quadric.sample_desitter(2, 6, rng)

print("point on dS^2                        wedge  positive  kms    fixed-tube  polar")
for x in points:
    row = [
        quadric.in_right_wedge(x),
        quadric.positivity_member(x, on_quadric=True),
        quadric.kms_member(x, on_quadric=True),
        quadric.fixed_tube_member(x, on_quadric=True),
        quadric.polar_chart_inverse(x).inside,
    ]
    print(np.array2string(x, precision=3, suppress_small=True).ljust(37),
          "  ".join(str(bool(v)).ljust(6) for v in row))

# The base point e2 sits on the edge of the wedge; every test rejects it.
e2 = np.array([0.0, 0.0, 1.0])
print("\nbase point", e2, "in wedge:", bool(quadric.in_right_wedge(e2)))

for d in (2, 3, 4):
    rep = wedge.desitter_equalities(d, 2000, seed=0)
    print(f"dS^{d}: {rep.N} samples, {rep.disagreements} disagreements, "
          f"{rep.indeterminate_count} within the boundary band")
