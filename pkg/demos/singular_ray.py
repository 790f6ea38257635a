"""Where the exponential and polar maps of sl(2) stop being regular along t(e - f).

Run: python3 demos/singular_ray.py
"""
import numpy as np

from wedgelab import models, polar, suites

ctx = polar.polar_context(models.get_spec("sl2-cayley"))
direction = np.array([0.0, 1.0, -1.0])

print("   t      exp regular  polar regular  tangent rank")
for t in sorted([0.25, 0.5, 0.7, np.pi / 4, 0.9, 1.2, np.pi / 2, 1.8]):
    x = t * direction
    print(f"{t:6.3f}   {str(polar.exp_regular(ctx, x)):11}  {str(polar.polar_regular(ctx, x)):13}  "
          f"{polar.tangent_rank(ctx, x)}")

found = suites.ray_singularities()
print(f"\npolar map singular at t = {found['polar']} (pi/4 = {np.pi / 4:.9f})")
print(f"exponential singular at t = {found['exp']} (pi/2 = {np.pi / 2:.9f})")
