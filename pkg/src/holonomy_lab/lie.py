"""Scaled isometries C^n -> C^m, their embedding into u(n+m), and the
bracket conditions that decide when a 2-plane of the off-diagonal part
exponentiates to a totally geodesic surface of the Grassmannian.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from ._random import complex_gaussian, make_rng
from .errors import (
    DependentBasisError,
    DimensionObstructionError,
    NotScalarError,
    NotUmnError,
    TrivialMatrixError,
)
from .matcore import DEFAULT_TOL, BlockShape, as_matrix, commutator, dagger, matrix_from_json, matrix_to_json, max_norm


@dataclass(frozen=True, eq=False)
class UmnElement:
    """An m x n matrix with ``X* X = lam I_n``, ``lam > 0``."""

    X: np.ndarray
    lam: float

    @property
    def m(self) -> int:
        return self.X.shape[0]

    @property
    def n(self) -> int:
        return self.X.shape[1]

    @property
    def shape(self) -> BlockShape:
        return BlockShape(self.n, self.m)


def hat(X) -> np.ndarray:
    """``[[0, -X*], [X, 0]]``, an element of the off-diagonal part of u(n+m)."""
    X = np.asarray(X, dtype=np.complex128)
    m, n = X.shape[-2:]
    out = np.zeros(X.shape[:-2] + (n + m, n + m), dtype=np.complex128)
    out[..., :n, n:] = -dagger(X)
    out[..., n:, :n] = X
    return out


def unhat(A, shape: BlockShape) -> np.ndarray:
    """Lower-left m x n block of an (n+m)-square matrix."""
    A = np.asarray(A)
    return A[..., shape.n:, :shape.n].copy()


def validate_umn(X, tol: float = DEFAULT_TOL) -> UmnElement:
    """Check ``X* X = lam I`` and return the element with ``lam = Tr(X*X)/n``.

    The zero test runs first so a tiny matrix is reported as trivial rather
    than as failing the scalar test.
    """
    X = as_matrix(X)
    if max_norm(X) <= tol:
        raise TrivialMatrixError("X is the zero matrix")
    n = X.shape[1]
    gram = dagger(X) @ X
    lam = float(np.trace(gram).real) / n
    residual = max_norm(gram - lam * np.eye(n))
    if residual > tol:
        raise NotUmnError(f"X*X is not a scalar matrix (residual {residual:.3e})")
    if lam <= tol:
        raise TrivialMatrixError(f"lambda={lam:.3e} is not positive")
    return UmnElement(X, lam)


def _orthonormal_frame(rng, m, k, avoid=None):
    """k orthonormal columns in C^m, orthogonal to the columns of ``avoid``."""
    G = complex_gaussian(rng, (m, k))
    if avoid is not None:
        Q0, _ = np.linalg.qr(avoid)
        G = G - Q0 @ (dagger(Q0) @ G)
    Q, R = np.linalg.qr(G)
    # fix the phase ambiguity of QR so the frame is a function of the draw only
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_umn(m: int, n: int, lam: float = 1.0, seed=None) -> UmnElement:
    if n > m:
        raise DimensionObstructionError(f"need n <= m, got n={n}, m={m}")
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    rng = make_rng(seed)
    X = np.sqrt(lam) * _orthonormal_frame(rng, m, n)
    return UmnElement(X, float(lam))


def pair_mu(X: UmnElement, Y, tol: float = DEFAULT_TOL) -> complex:
    """The scalar ``mu`` with ``X* Y = mu I_n``."""
    Y = as_matrix(Y)
    if Y.shape != X.X.shape:
        raise ValueError(f"shape mismatch: X is {X.X.shape}, Y is {Y.shape}")
    G = dagger(X.X) @ Y
    mu = complex(np.trace(G)) / X.n
    residual = max_norm(G - mu * np.eye(X.n))
    if residual > tol:
        raise NotScalarError(f"X*Y is not a scalar matrix (residual {residual:.3e})")
    return mu


# -- surfaces -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FlatPair:
    """Plane spanned by hat(X), hat(Y) with ``X* Y = mu I``, mu real."""

    X: UmnElement
    Y: UmnElement
    mu: float
    eta: float

    kind = "flat"

    @property
    def shape(self) -> BlockShape:
        return self.X.shape

    def basis(self):
        return [self.X.X, self.Y.X]


@dataclass(frozen=True, eq=False)
class HopfDisk:
    """Plane spanned by hat(X), hat(iX)."""

    X: UmnElement

    kind = "hopf"

    @property
    def shape(self) -> BlockShape:
        return self.X.shape

    def basis(self):
        return [self.X.X, 1j * self.X.X]


GeodesicSurface = Union[FlatPair, HopfDisk]


def _real_coords(Ms):
    """Flatten complex m x n matrices into real vectors of length 2mn."""
    Ms = np.asarray(Ms, dtype=np.complex128)
    flat = Ms.reshape(Ms.shape[0], -1)
    return np.concatenate([flat.real, flat.imag], axis=1)


def _real_rank(Ms, tol):
    coords = _real_coords(Ms)
    s = np.linalg.svd(coords, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))


def make_flat_pair(X, Y, tol: float = DEFAULT_TOL) -> FlatPair:
    """Validate a flat pair built from user-supplied matrices."""
    X = X if isinstance(X, UmnElement) else validate_umn(X, tol)
    Y = Y if isinstance(Y, UmnElement) else validate_umn(Y, tol)
    mu = pair_mu(X, Y.X, tol)
    if abs(mu.imag) > tol:
        raise NotScalarError(f"X*Y = mu I with non-real mu={mu}")
    if _real_rank([X.X, Y.X], tol) < 2:
        raise DependentBasisError("hat(X) and hat(Y) are linearly dependent")
    return FlatPair(X, Y, mu.real, Y.lam)


def make_hopf_disk(X, tol: float = DEFAULT_TOL) -> HopfDisk:
    X = X if isinstance(X, UmnElement) else validate_umn(X, tol)
    return HopfDisk(X)


def _partner(X: UmnElement, mu, eta, rng):
    """Y = (mu/lam) X + c W with W an n-frame orthogonal to X and ``Y*Y = eta I``."""
    m, n = X.m, X.n
    if 2 * n > m:
        raise DimensionObstructionError(
            f"an independent partner needs 2n <= m (X*W = 0 for an n-frame W), got n={n}, m={m}")
    c2 = eta - abs(mu) ** 2 / X.lam
    if c2 <= 0:
        raise ValueError(f"need eta > |mu|^2/lambda = {abs(mu) ** 2 / X.lam}, got eta={eta}")
    W = _orthonormal_frame(rng, m, n, avoid=X.X)
    return (mu / X.lam) * X.X + np.sqrt(c2) * W


def flat_pair_generate(m: int, n: int, mu: float, eta: float, seed=None,
                       lam: float = 1.0, X=None) -> FlatPair:
    """Seeded flat pair; pass ``X`` to fix the first generator."""
    if 2 * n > m:
        raise DimensionObstructionError(
            f"an independent flat partner needs 2n <= m, got n={n}, m={m}")
    rng = make_rng(seed)
    if X is None:
        X = UmnElement(np.sqrt(lam) * _orthonormal_frame(rng, m, n), float(lam))
    elif not isinstance(X, UmnElement):
        X = validate_umn(X)
    Y = _partner(X, float(mu), eta, rng)
    return make_flat_pair(X, Y)


def skew_pair_generate(m: int, n: int, mu: complex, eta: float, seed=None, lam: float = 1.0):
    """Pair (X, Y) with ``X*Y = mu I`` for complex mu and iX outside Span_R{X, Y}.

    For ``Im mu != 0`` these are the planes that fail the geodesic test.
    """
    rng = make_rng(seed)
    if 2 * n > m:
        raise DimensionObstructionError(f"need 2n <= m, got n={n}, m={m}")
    X = UmnElement(np.sqrt(lam) * _orthonormal_frame(rng, m, n), float(lam))
    return X, _partner(X, complex(mu), eta, rng)


def surface_to_json(surface: GeodesicSurface) -> dict:
    out = {"type": surface.kind, "X": matrix_to_json(surface.X.X)}
    if isinstance(surface, FlatPair):
        out["Y"] = matrix_to_json(surface.Y.X)
    return out


def surface_from_json(obj: dict, tol: float = DEFAULT_TOL) -> GeodesicSurface:
    kind = obj.get("type")
    if kind == "hopf":
        return make_hopf_disk(matrix_from_json(obj["X"]), tol)
    if kind == "flat":
        return make_flat_pair(matrix_from_json(obj["X"]), matrix_from_json(obj["Y"]), tol)
    raise ValueError(f"unknown surface type {kind!r}")


# -- brackets -------------------------------------------------------------------

def triple_bracket_direct(U, V, W) -> np.ndarray:
    """``[[U, V], W]`` by matrix products."""
    U, V, W = (np.asarray(A, dtype=np.complex128) for A in (U, V, W))
    if not (U.shape == V.shape == W.shape):
        raise ValueError(f"shape mismatch: {U.shape}, {V.shape}, {W.shape}")
    return commutator(commutator(U, V), W)


def triple_bracket_formula(X, Y) -> np.ndarray:
    """The Z with ``hat(Z) = [[hat X, hat Y], hat X]``, assembled column by column.

    With ``h(v, w) = v* w`` and X_j, Y_j the columns,
    ``Z[r, k] = sum_j X[r, j] (-2 h(Y_j, X_k) + h(X_j, Y_k)) + sum_j Y[r, j] h(X_j, X_k)``.
    """
    X = np.asarray(X, dtype=np.complex128)
    Y = np.asarray(Y, dtype=np.complex128)
    if X.shape != Y.shape:
        raise ValueError(f"shape mismatch: {X.shape} vs {Y.shape}")
    # h_ab[j, k] = h(A_j, B_k)
    h_yx = np.einsum("rj,rk->jk", Y.conj(), X)
    h_xy = np.einsum("rj,rk->jk", X.conj(), Y)
    h_xx = np.einsum("rj,rk->jk", X.conj(), X)
    return np.einsum("rj,jk->rk", X, -2 * h_yx + h_xy) + np.einsum("rj,jk->rk", Y, h_xx)


class ClosureResult(NamedTuple):
    is_geodesic: bool
    residual: float


def span_closure_check(basis, tol: float = DEFAULT_TOL) -> ClosureResult:
    """Test ``[[m', m'], m'] in m'`` for ``m' = Span_R{hat(B) : B in basis}``.

    Every ordered triple of basis hats is bracketed; the off-diagonal part of
    the result is projected onto the span by real least squares.  The
    reported residual is the largest relative residual, with 0/0 read as 0.
    """
    basis = [as_matrix(B) for B in basis]
    if not basis:
        raise ValueError("empty basis")
    if len({B.shape for B in basis}) != 1:
        raise ValueError("basis matrices differ in shape")
    m, n = basis[0].shape
    shape = BlockShape(n, m)
    if _real_rank(basis, 1e-10) < len(basis):
        raise DependentBasisError("basis is linearly dependent over R")

    coords = _real_coords(basis).T  # (2mn, k)
    hats = [hat(B) for B in basis]
    worst = 0.0
    for U, V, W in itertools.product(hats, repeat=3):
        Z = unhat(triple_bracket_direct(U, V, W), shape)
        z = _real_coords([Z])[0]
        znorm = np.linalg.norm(z)
        if znorm == 0.0:
            continue
        coef, *_ = np.linalg.lstsq(coords, z, rcond=None)
        worst = max(worst, float(np.linalg.norm(coords @ coef - z) / znorm))
    return ClosureResult(worst <= tol, worst)


def k_matrix(X: UmnElement) -> np.ndarray:
    """``diag(-i lam I_n, i X X*)``, half the bracket of hat(X) and hat(iX)."""
    n, m = X.n, X.m
    K = np.zeros((n + m, n + m), dtype=np.complex128)
    K[:n, :n] = -1j * X.lam * np.eye(n)
    K[n:, n:] = 1j * (X.X @ dagger(X.X))
    return K
