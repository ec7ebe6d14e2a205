"""Dense complex matrix helpers shared by the rest of the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Everything here
is a pure function; nothing holds state.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-10


class ConvergenceError(ArithmeticError):
    """Raised when the matrix exponential cannot be evaluated reliably."""

    def __init__(self, message, norm, depth):
        super().__init__(f"{message} (norm={norm:.3e}, scaling depth={depth})")
        self.norm = norm
        self.depth = depth


@dataclass(frozen=True)
class BlockShape:
    """Block split of u(n+m): an n x n block on top, an m x m block below."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError(f"block sizes must be positive, got n={self.n}, m={self.m}")

    @property
    def size(self) -> int:
        return self.n + self.m


def as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def _square(A, name="matrix"):
    A = np.asarray(A)
    if A.ndim < 2 or A.shape[-1] != A.shape[-2]:
        raise ValueError(f"{name} must be square, got shape {A.shape}")
    return A


def dagger(A):
    return np.conj(np.swapaxes(A, -1, -2))


def inner_product(A, B, k: int | None = None) -> float:
    """Normalized trace form ``(1/k) Re Tr(A* B)``.

    ``k`` defaults to the matrix size; passing it explicitly guards against
    mixing up blocks of different sizes.
    """
    A = _square(np.asarray(A, dtype=np.complex128), "A")
    B = _square(np.asarray(B, dtype=np.complex128), "B")
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    if k is None:
        k = A.shape[0]
    elif k != A.shape[0]:
        raise ValueError(f"k={k} does not match matrix size {A.shape[0]}")
    return float(np.real(np.vdot(A, B))) / k


def real_inner_product(C, D) -> float:
    """``(1/2k) Tr(C^t D)`` on gl(2k, R)."""
    C = _square(np.asarray(C, dtype=float), "C")
    D = _square(np.asarray(D, dtype=float), "D")
    if C.shape != D.shape:
        raise ValueError(f"dimension mismatch: {C.shape} vs {D.shape}")
    return float(np.sum(C * D)) / C.shape[0]


def real_embedding(A, k: int | None = None) -> np.ndarray:
    """Replace each entry ``x + iy`` by the real block ``[[x, -y], [y, x]]``."""
    A = _square(np.asarray(A, dtype=np.complex128))
    if k is not None and A.shape[0] != k:
        raise ValueError(f"k={k} does not match matrix size {A.shape[0]}")
    size = A.shape[0]
    R = np.empty((2 * size, 2 * size))
    R[0::2, 0::2] = A.real
    R[0::2, 1::2] = -A.imag
    R[1::2, 0::2] = A.imag
    R[1::2, 1::2] = A.real
    return R


def commutator(A, B):
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape[-2:] != B.shape[-2:]:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    return A @ B - B @ A


# Degree-13 diagonal Pade coefficients and the matching 1-norm bound
# (Higham, SIAM J. Matrix Anal. Appl. 26, 2005).
_PADE13 = np.array([
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0,
    670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
    960960.0, 16380.0, 182.0, 1.0,
])
_THETA13 = 5.371920351148152
_MAX_DEPTH = 64


def _one_norm(A):
    return np.abs(A).sum(axis=-2).max(axis=-1)


def _expm_pade(A):
    b = _PADE13
    norm = float(np.max(_one_norm(A))) if A.size else 0.0
    s = 0 if norm <= _THETA13 else int(np.ceil(np.log2(norm / _THETA13)))
    if s > _MAX_DEPTH:
        raise ConvergenceError("matrix too large to exponentiate", norm, s)
    A = A / 2.0**s
    eye = np.broadcast_to(np.eye(A.shape[-1], dtype=A.dtype), A.shape)
    A2 = A @ A
    A4 = A2 @ A2
    A6 = A4 @ A2
    U = A @ (A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2)
             + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * eye)
    V = (A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2)
         + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * eye)
    R = np.linalg.solve(V - U, V + U)
    for _ in range(s):
        R = R @ R
    if not np.all(np.isfinite(R)):
        raise ConvergenceError("Pade evaluation produced non-finite entries", norm, s)
    return R


def _expm_series(A, max_terms=80):
    norm = float(np.max(_one_norm(A))) if A.size else 0.0
    s = 0 if norm <= 0.5 else int(np.ceil(np.log2(norm / 0.5)))
    if s > _MAX_DEPTH:
        raise ConvergenceError("matrix too large to exponentiate", norm, s)
    A = A / 2.0**s
    eye = np.broadcast_to(np.eye(A.shape[-1], dtype=A.dtype), A.shape)
    total = eye.copy()
    term = eye.copy()
    eps = np.finfo(float).eps
    for j in range(1, max_terms):
        term = term @ A / j
        total = total + term
        if np.max(np.abs(term)) <= eps * 1e-2 * max(1.0, float(np.max(np.abs(total)))):
            break
    else:
        raise ConvergenceError("power series did not converge", norm, s)
    for _ in range(s):
        total = total @ total
    return total


def matrix_exp(A, method: str = "pade") -> np.ndarray:
    """Matrix exponential by scaling and squaring.

    ``method="pade"`` (default) uses the degree-13 diagonal Pade approximant.
    ``method="series"`` sums the Taylor series instead and is kept as an
    independent reference. Works on stacks of matrices (``(..., N, N)``).
    """
    A = _square(np.asarray(A, dtype=np.complex128))
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    if method == "pade":
        return _expm_pade(A)
    if method == "series":
        return _expm_series(A)
    raise ValueError(f"unknown method {method!r}")


def _check_shape(A, shape: BlockShape):
    A = _square(np.asarray(A, dtype=np.complex128))
    if A.shape[-1] != shape.size:
        raise ValueError(f"matrix of size {A.shape[-1]} does not fit block shape n={shape.n}, m={shape.m}")
    return A


def proj_h(A, shape: BlockShape) -> np.ndarray:
    """Block-diagonal part: u(n) + u(m)."""
    A = _check_shape(A, shape)
    out = np.zeros_like(A)
    n = shape.n
    out[..., :n, :n] = A[..., :n, :n]
    out[..., n:, n:] = A[..., n:, n:]
    return out


def proj_m(A, shape: BlockShape) -> np.ndarray:
    """Off-diagonal part, the complement of :func:`proj_h`."""
    A = _check_shape(A, shape)
    return A - proj_h(A, shape)


def unitary_check(U, tol: float = DEFAULT_TOL) -> bool:
    U = np.asarray(U, dtype=np.complex128)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        return False
    return bool(np.max(np.abs(dagger(U) @ U - np.eye(U.shape[0]))) <= tol)


def skew_check(A, tol: float = DEFAULT_TOL) -> bool:
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    return bool(np.max(np.abs(A + dagger(A)), initial=0.0) <= tol)


def unitary_drift(U) -> float:
    U = np.asarray(U)
    return float(np.max(np.abs(dagger(U) @ U - np.eye(U.shape[-1]))))


def polar_unitary(U) -> np.ndarray:
    """Closest unitary matrix in Frobenius norm (unitary factor of the polar decomposition)."""
    W, _, Vh = np.linalg.svd(U)
    return W @ Vh


def max_norm(A) -> float:
    return float(np.max(np.abs(A), initial=0.0))


# -- shared matrix JSON format ------------------------------------------------

def matrix_to_json(A) -> dict:
    A = as_matrix(A)
    rows, cols = A.shape
    data = [[float(z.real), float(z.imag)] for z in A.ravel()]
    return {"rows": rows, "cols": cols, "data": data}


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from None
    if len(data) != rows * cols:
        raise ValueError(f"matrix JSON has {len(data)} entries, expected {rows}x{cols}")
    try:
        flat = np.array([complex(re, im) for re, im in data], dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix entry: {exc}") from None
    return as_matrix(flat.reshape(rows, cols))
