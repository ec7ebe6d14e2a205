"""
Flat surfaces carry no holonomy
===============================

When ``X* Y = mu I`` with real mu, the brackets of hat(X) and hat(Y) land in
the isotropy algebra and the surface exp(u hat X + v hat Y) is flat. Every
loop on it brings the frame back unchanged, whatever area it encloses.
"""
import numpy as np

from holonomy_lab.holonomy import SampledUV, holonomy_report
from holonomy_lab.lie import flat_pair_generate, hat
from holonomy_lab.matcore import BlockShape, commutator, proj_m

pair = flat_pair_generate(m=5, n=2, mu=-0.3, eta=1.2, seed=7)

# %%
# The bracket of the generators has no off-diagonal part.
B = commutator(hat(pair.X.X), hat(pair.Y.X))
print("off-diagonal part of [X^, Y^]:", np.max(np.abs(proj_m(B, BlockShape(2, 5)))))

# %%
# A star-shaped polygon in the (u, v) coefficient plane.
angles = np.linspace(0, 2 * np.pi, 11)
radii = np.where(np.arange(11) % 2 == 0, 1.0, 0.4)
loop = SampledUV(np.column_stack([radii * np.cos(angles), radii * np.sin(angles)]))
rep = holonomy_report(pair, loop, steps=1000)
print(f"enclosed area {rep.area_surface_S:.4f}, |V - I| = {rep.deviation:.2e}")
