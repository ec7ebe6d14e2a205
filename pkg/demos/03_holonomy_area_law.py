"""
Holonomy equals area
====================

Transport an n-frame around a loop on a Hopf sphere in G_{n,m}. The frame
comes back rotated by the scalar ``exp(i theta)`` with
``theta = 2 (n+m)/(2n) * area``. Here the rotation is measured by
integrating the horizontality ODE and compared with the closed form.
"""
import numpy as np

from holonomy_lab.holonomy import (
    Rect,
    area_model_B,
    area_numeric,
    area_surface_S,
    holonomy_report,
    sampled_curve,
)
from holonomy_lab.lie import make_hopf_disk, random_umn

n, m = 2, 3
surface = make_hopf_disk(random_umn(m, n, lam=1.5, seed=4).X)
rect = Rect(p=0.2, a=0.7, q=0.0, b=2.5)

# %%
# Two independent routes to the enclosed area on the surface.
print("closed form :", area_surface_S(rect, n, m))
print("quadrature  :", area_numeric(surface, rect))
print("model area  :", area_model_B(rect), "ratio", area_surface_S(rect, n, m) / area_model_B(rect))

# %%
# The transported frame against the prediction. The sign of theta follows
# the orientation of the loop.
for loop, name in [(rect, "rectangle"), (rect.reversed(), "reversed")]:
    rep = holonomy_report(surface, loop, steps=512)
    print(f"{name:9s} theta={rep.theta_predicted:+.6f}  deviation={rep.deviation:.2e}")
    print("  V_measured diagonal:", np.round(np.diag(rep.V_measured), 8))

# %%
# Any closed curve works, not just coordinate rectangles.
blob = sampled_curve(lambda t: 0.7 + 0.3 * np.cos(2 * np.pi * t),
                     lambda t: 1.0 + 0.8 * np.sin(2 * np.pi * t) + 0.2 * np.sin(6 * np.pi * t), 300)
rep = holonomy_report(surface, blob, steps=2400)
print(f"smooth loop  theta={rep.theta_predicted:+.6f}  deviation={rep.deviation:.2e}")
