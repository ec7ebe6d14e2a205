"""
The Hopf model inside SU(2)
===========================

Unit quaternions act as 2x2 special unitary matrices. Killing the circle
``diag(e^{-iz}, e^{iz})`` leaves the 2-sphere, and the map ``p(w) = w w~``
realizes that quotient inside SU(2) itself.
"""
import numpy as np

from holonomy_lab.matcore import matrix_exp
from holonomy_lab.su2model import (
    E1,
    E2,
    conformal_h_check,
    cp1_point,
    fiber_element,
    hopf_p,
    random_su2,
    t_point,
)

rng = np.random.default_rng(1)

# %%
# The surface T is swept out by exp(x (cos y E1 + sin y E2)).
x, y = 0.6, 2.1
w = t_point(x, y)
print("t_point matrix:\n", np.round(w.matrix, 6))
print("matches exp:", np.allclose(w.matrix, matrix_exp(x * (np.cos(y) * E1 + np.sin(y) * E2))))

# %%
# p forgets the fiber: right multiplication by a circle element does not move p(w).
w = random_su2(rng)
for z in (0.3, 1.7, 4.0):
    print(f"z={z}: p(wv) - p(w) =", np.max(np.abs(hopf_p(w @ fiber_element(z)).quaternion - hopf_p(w).quaternion)))

# %%
# On T, p is squaring: the point at height x lands at height 2x on the sphere.
print("p(t_point(x, y)) = t_point(2x, y):",
      np.allclose(hopf_p(t_point(x, y)).quaternion, t_point(2 * x, y).quaternion))
print("sphere point:", cp1_point(hopf_p(t_point(x, y))))

# %%
# The induced map from the coset space to the unit sphere doubles lengths in
# both chart directions, so it is conformal rather than isometric.
check = conformal_h_check(np.pi / 6, 1.0)
print(f"length ratios: {check.ratio1:.8f}, {check.ratio2:.8f}")
