"""The SU(2) / Hopf model and its embedding into U(n+m).

A unit quaternion ``w1 + w2 i + w3 j + w4 k`` is realized as the 2x2 matrix
``[[z1bar, -z2bar], [z2, z1]]`` with ``z1 = w1 + i w2`` and ``z2 = w3 + i w4``.
Its real 4x4 image under :func:`~holonomy_lab.matcore.real_embedding` is the
usual left-regular representation.  In this realization
``w = w1 I + w3 E1 + w4 E2 + w2 E3``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .lie import UmnElement, hat, k_matrix
from .matcore import dagger, inner_product, matrix_exp, real_embedding

E1 = np.array([[0, -1], [1, 0]], dtype=np.complex128)
E2 = np.array([[0, 1j], [1j, 0]], dtype=np.complex128)
E3 = np.array([[-1j, 0], [0, 1j]], dtype=np.complex128)
SU2_BASIS = (E1, E2, E3)

e1, e2, e3 = (real_embedding(E) for E in SU2_BASIS)

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class SU2Element:
    w1: float
    w2: float
    w3: float
    w4: float

    def __post_init__(self):
        r = self.w1**2 + self.w2**2 + self.w3**2 + self.w4**2
        if abs(r - 1.0) > _NORM_TOL:
            raise ValueError(f"not a unit quaternion: |w|^2 = {r!r}")

    @classmethod
    def from_matrix(cls, M) -> "SU2Element":
        M = np.asarray(M)
        z1, z2 = M[1, 1], M[1, 0]
        return cls(float(z1.real), float(z1.imag), float(z2.real), float(z2.imag))

    @classmethod
    def normalized(cls, q) -> "SU2Element":
        q = np.asarray(q, dtype=float)
        return cls(*(q / np.linalg.norm(q)))

    @property
    def quaternion(self) -> np.ndarray:
        return np.array([self.w1, self.w2, self.w3, self.w4])

    @property
    def matrix(self) -> np.ndarray:
        z1 = complex(self.w1, self.w2)
        z2 = complex(self.w3, self.w4)
        return np.array([[z1.conjugate(), -z2.conjugate()], [z2, z1]])

    def __matmul__(self, other: "SU2Element") -> "SU2Element":
        return SU2Element.from_matrix(self.matrix @ other.matrix)

    def inverse(self) -> "SU2Element":
        return SU2Element(self.w1, -self.w2, -self.w3, -self.w4)


IDENTITY = SU2Element(1.0, 0.0, 0.0, 0.0)


def random_su2(rng) -> SU2Element:
    return SU2Element.normalized(rng.standard_normal(4))


def fiber_element(z: float) -> SU2Element:
    """``diag(e^{-iz}, e^{iz})``, a point of the circle S(U(1) x U(1))."""
    return SU2Element(np.cos(z), np.sin(z), 0.0, 0.0)


def t_point(x: float, y: float) -> SU2Element:
    """``[[cos x, -sin x e^{-iy}], [sin x e^{iy}, cos x]] = exp(x(cos y E1 + sin y E2))``."""
    return SU2Element(np.cos(x), 0.0, np.sin(x) * np.cos(y), np.sin(x) * np.sin(y))


def t_point_matrix(x, y) -> np.ndarray:
    """Vectorized 2x2 matrices of :func:`t_point` for arrays x, y."""
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    out = np.empty(x.shape + (2, 2), dtype=np.complex128)
    c, s = np.cos(x), np.sin(x)
    out[..., 0, 0] = c
    out[..., 1, 1] = c
    out[..., 0, 1] = -s * np.exp(-1j * y)
    out[..., 1, 0] = s * np.exp(1j * y)
    return out


def i_conjugate(w: SU2Element) -> SU2Element:
    return SU2Element(w.w1, -w.w2, w.w3, w.w4)


def hopf_p(w: SU2Element) -> SU2Element:
    """Orbit map ``p(w) = w w~`` onto the slice {w2 = 0} identified with CP^1."""
    return w @ i_conjugate(w)


def cp1_point(w: SU2Element) -> np.ndarray:
    """The (x, y, z) coordinates in S^2 of a point of the CP^1 slice."""
    return np.array([w.w1, w.w3, w.w4])


def su2_coefficients(A):
    """Real (a, b, c) with ``A = a E1 + b E2 + c E3``; vectorized over leading axes."""
    A = np.asarray(A)
    return A[..., 1, 0].real, A[..., 1, 0].imag, A[..., 1, 1].imag


def su2_log(w: SU2Element):
    """Coefficients (a, b, c) of the principal logarithm in the E1, E2, E3 basis.

    At ``w = -I`` the axis is undefined; it is fixed to E1.
    """
    axis = np.array([w.w3, w.w4, w.w2])
    s = np.linalg.norm(axis)
    angle = np.arctan2(s, w.w1)
    if s == 0.0:
        return (np.pi, 0.0, 0.0) if w.w1 < 0 else (0.0, 0.0, 0.0)
    a, b, c = angle * axis / s
    return float(a), float(b), float(c)


class ConformalCheck(NamedTuple):
    ratio1: float
    ratio2: float
    coset_norms: tuple
    image_norms: tuple


def _horizontal_norm(xi):
    # E1, E2, E3 are orthonormal for (1/2) Re Tr(A* B); horizontal = Span{E1, E2}
    return np.hypot(inner_product(E1, xi), inner_product(E2, xi))


def conformal_h_check(x: float, y: float, step: float = 1e-6) -> ConformalCheck:
    """Compare the coset chart with its image under h by central differences.

    ``|D_j(wH)|`` is the horizontal length of ``w^{-1} dw/dj`` for ``w = t_point(x, y)``;
    ``|D_j h(wH)|`` is the Euclidean length of the derivative of ``hopf_p(w)`` in R^3.
    """
    if abs(np.sin(2 * x)) < 1e-8:
        raise ValueError(f"chart is degenerate at x={x} (sin 2x = 0)")

    def coset_speed(dx, dy):
        w = t_point(x, y).matrix
        dw = (t_point(x + dx, y + dy).matrix - t_point(x - dx, y - dy).matrix) / (2 * step)
        return _horizontal_norm(dagger(w) @ dw)

    def image_speed(dx, dy):
        plus = cp1_point(hopf_p(t_point(x + dx, y + dy)))
        minus = cp1_point(hopf_p(t_point(x - dx, y - dy)))
        return np.linalg.norm((plus - minus) / (2 * step))

    c1, c2 = coset_speed(step, 0.0), coset_speed(0.0, step)
    i1, i2 = image_speed(step, 0.0), image_speed(0.0, step)
    return ConformalCheck(i1 / c1, i2 / c2, (c1, c2), (i1, i2))


# -- embedding into U(n+m) -----------------------------------------------------

def f_alg(a, b, c, X: UmnElement) -> np.ndarray:
    """Image of ``a E1 + b E2 + c E3`` in u(n+m).

    ``(a/sqrt(lam)) hat(X) + (b/sqrt(lam)) hat(iX) + (c/lam) K``.  The
    coefficients may be arrays, giving a stack of matrices.
    """
    a, b, c = (np.asarray(t, dtype=float)[..., None, None] for t in (a, b, c))
    r = np.sqrt(X.lam)
    return (a / r) * hat(X.X) + (b / r) * hat(1j * X.X) + (c / X.lam) * k_matrix(X)


def f_group(w: SU2Element, X: UmnElement) -> np.ndarray:
    """The group homomorphism SU(2) -> U(n+m) integrating :func:`f_alg`."""
    return matrix_exp(f_alg(*su2_log(w), X))


def fiber_exp(theta: float, X: UmnElement) -> np.ndarray:
    """``diag(e^{i theta} I_n, I_m + ((e^{-i theta} - 1)/lam) X X*)``."""
    n, m = X.n, X.m
    out = np.zeros((n + m, n + m), dtype=np.complex128)
    out[:n, :n] = np.exp(1j * theta) * np.eye(n)
    out[n:, n:] = np.eye(m) + (np.exp(-1j * theta) - 1) / X.lam * (X.X @ dagger(X.X))
    return out


def basis_image_norms(X: UmnElement):
    """Norms of f(E1), f(E2), f(E3) in the trace form of u(n+m)."""
    k = X.n + X.m
    return tuple(np.sqrt(inner_product(F, F, k)) for F in (f_alg(1, 0, 0, X), f_alg(0, 1, 0, X), f_alg(0, 0, 1, X)))


def conformal_factor(n: int, m: int, X: UmnElement, tol: float = 1e-12) -> float:
    """``sqrt(2n/(n+m))``, after checking it against the actual image norms."""
    if (X.n, X.m) != (n, m):
        raise ValueError(f"X has shape {X.m}x{X.n}, expected {m}x{n}")
    alpha = np.sqrt(2 * n / (n + m))
    norms = basis_image_norms(X)
    if max(abs(v - alpha) for v in norms) > tol:
        raise ArithmeticError(f"image norms {norms} differ from {alpha}")
    return float(alpha)
