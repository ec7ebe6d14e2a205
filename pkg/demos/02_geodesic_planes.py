"""
Which 2-planes give totally geodesic surfaces?
==============================================

A plane in the off-diagonal part of u(n+m) exponentiates to a totally
geodesic surface of the Grassmannian exactly when it is closed under the
triple bracket. For ``X* Y = mu I`` this happens for real ``mu`` (a flat
surface) and for ``Y = iX`` (a round sphere), but not for a genuinely complex
``mu`` with iX outside the plane.
"""
import numpy as np

from holonomy_lab.lie import (
    flat_pair_generate,
    hat,
    random_umn,
    skew_pair_generate,
    span_closure_check,
    triple_bracket_direct,
    triple_bracket_formula,
    unhat,
)
from holonomy_lab.matcore import BlockShape

# %%
# The column-wise bracket formula agrees with brute-force matrix commutators.
rng = np.random.default_rng(3)
X = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
Y = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
direct = unhat(triple_bracket_direct(hat(X), hat(Y), hat(X)), BlockShape(2, 4))
print("formula vs direct:", np.max(np.abs(direct - triple_bracket_formula(X, Y))))

# %%
# Three kinds of plane in G_{2,4}.
pair = flat_pair_generate(4, 2, mu=0.4, eta=1.0, seed=0)
print("flat pair      ", span_closure_check(pair.basis()))

X = random_umn(4, 2, seed=1)
print("X and iX       ", span_closure_check([X.X, 1j * X.X]))

Xs, Ys = skew_pair_generate(4, 2, mu=0.3 + 0.5j, eta=1.0, seed=2)
print("complex mu pair", span_closure_check([Xs.X, Ys]))
