"""
Checking the transport integrator
=================================

The holonomy is computed with classical RK4 on the matrix ODE ``a' = -B a``.
Halving the step should cut the error by about 16, and the frame should stay
unitary without any correction.
"""
import numpy as np

from holonomy_lab.holonomy import convergence_slope, convergence_sweep, lift_path, sampled_curve, transport
from holonomy_lab.lie import make_hopf_disk, random_umn

surface = make_hopf_disk(random_umn(5, 3, seed=11).X)
loop = sampled_curve(lambda t: 0.7 + 0.3 * np.cos(2 * np.pi * t),
                     lambda t: 2.0 + 0.9 * np.sin(2 * np.pi * t), samples=6)

rows = convergence_sweep(surface, loop, [16, 32, 64, 128, 256, 512])
for steps, dev in rows:
    print(f"{steps:4d} steps  deviation {dev:.3e}")
print(f"observed order {convergence_slope(rows):.3f}")

res = transport(lift_path(surface, loop), 512, correct=False)
print(f"unitarity drift at 512 steps: {res.drift:.2e}")
