"""Loops, enclosed areas, and two independent holonomy computations.

Conventions
-----------
Model loops live in the chart ``(x, y) -> t_point(x, y)`` of the SU(2) model,
``0 <= x <= pi/2``.  A loop is a closed polygon; edge ``k`` of an ``N``-edge
polygon is traversed during ``t in [k/N, (k+1)/N]``.  A :class:`Rect` is the
polygon ``(p,q) -> (p+a,q) -> (p+a,q+b) -> (p,q+b) -> (p,q)``.

Areas are signed by traversal: a Rect has positive area.  Transporting a
frame around a positively traversed loop on a Hopf surface returns
``exp(-i theta) I_n`` with ``theta = 2 (n+m)/(2n) A_S``; the reversed loop
returns ``exp(+i theta) I_n``.  ``theta_predicted`` in a report carries that
sign, so ``V_predicted = exp(i theta_predicted) I_n`` for the loop as given.

Transport
---------
Given any lift ``w(t)`` of the loop into U(n+m), the horizontal lift in
U(n+m)/U(m) is ``w(t) diag(a(t), I_m)`` where ``a`` solves
``a' = -B(t) a``, ``a(0) = I_n`` and ``B`` is the upper-left n x n block of
``w^{-1} w'``.  The holonomy is ``a(1)``.  The U(m) side is the same with the
lower-right block.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Union

import numpy as np

from .lie import FlatPair, HopfDisk, UmnElement, hat
from .matcore import (
    BlockShape,
    dagger,
    inner_product,
    matrix_exp,
    matrix_to_json,
    max_norm,
    polar_unitary,
    proj_m,
    unitary_drift,
)
from .su2model import f_alg, su2_coefficients, t_point_matrix

log = logging.getLogger(__name__)

HALF_PI = np.pi / 2
_EDGE_TOL = 1e-12
DRIFT_TOL = 1e-10


# -- loops ----------------------------------------------------------------------

@dataclass(frozen=True)
class Rect:
    """Coordinate rectangle ``p <= x <= p+a``, ``q <= y <= q+b`` (a, b may be 0)."""

    p: float
    a: float
    q: float
    b: float

    def __post_init__(self):
        if not (self.p >= 0 and self.a >= 0 and self.p + self.a <= HALF_PI + _EDGE_TOL
                and self.q >= 0 and self.b >= 0):
            raise ValueError(f"rectangle out of range: {self}")

    def polygon(self) -> np.ndarray:
        p, a, q, b = self.p, self.a, self.q, self.b
        return np.array([(p, q), (p + a, q), (p + a, q + b), (p, q + b), (p, q)], dtype=float)

    def reversed(self) -> "SampledXY":
        return SampledXY(self.polygon()[::-1])

    def split_x(self, frac: float):
        """Cut along ``x = p + frac*a`` into two rectangles sharing an edge."""
        a1 = frac * self.a
        return Rect(self.p, a1, self.q, self.b), Rect(self.p + a1, self.a - a1, self.q, self.b)


def _closed_points(points, what):
    pts = np.array(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"{what} points must have shape (N, 2), got {pts.shape}")
    if len(pts) < 4:
        raise ValueError(f"{what} needs at least 4 points, got {len(pts)}")
    if np.max(np.abs(pts[0] - pts[-1])) > _EDGE_TOL:
        raise ValueError(f"{what} is not closed: first point {pts[0]} != last point {pts[-1]}")
    pts[-1] = pts[0]
    return pts


@dataclass(frozen=True, eq=False)
class SampledXY:
    """Closed polygon in the (x, y) chart of the model sphere."""

    points: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "points", _closed_points(self.points, "XY loop"))

    def polygon(self) -> np.ndarray:
        return self.points

    def reversed(self) -> "SampledXY":
        return SampledXY(self.points[::-1])


@dataclass(frozen=True, eq=False)
class SampledUV:
    """Closed polygon of coefficients (u, v) of ``u hat(X) + v hat(Y)``."""

    points: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "points", _closed_points(self.points, "UV loop"))

    def polygon(self) -> np.ndarray:
        return self.points

    def reversed(self) -> "SampledUV":
        return SampledUV(self.points[::-1])


XYLoop = Union[Rect, SampledXY]
Loop = Union[Rect, SampledXY, SampledUV]


def sampled_curve(x_of_t, y_of_t, samples: int = 200) -> SampledXY:
    """Sample a closed parametrized chart curve on ``t in [0, 1]``."""
    t = np.linspace(0.0, 1.0, samples + 1)
    pts = np.column_stack([x_of_t(t), y_of_t(t)])
    pts[-1] = pts[0]
    return SampledXY(pts)


def _xy_polygon(loop) -> np.ndarray:
    if isinstance(loop, SampledUV):
        raise TypeError("expected an (x, y) loop, got a (u, v) loop")
    return loop.polygon()


# -- areas ----------------------------------------------------------------------

def area_rect_cp1(p: float, a: float, q: float, b: float) -> float:
    """Area of the rectangle's image on the unit sphere CP^1: ``2b(sin^2(p+a) - sin^2 p)``."""
    Rect(p, a, q, b)
    return 2 * b * (np.sin(p + a) ** 2 - np.sin(p) ** 2)


def _sin2_dy_exact(pts):
    """Exact ``oint sin^2(x) dy`` over a polygon, edge by edge."""
    x0, y0 = pts[:-1].T
    x1, y1 = pts[1:].T
    dx, dy = x1 - x0, y1 - y0
    mid = 0.5 * (x0 + x1)
    # mean of sin^2 over a straight edge: 1/2 - cos(2 mid) sin(dx) / (2 dx)
    mean = 0.5 - 0.5 * np.cos(2 * mid) * np.sinc(dx / np.pi)
    return float(np.sum(dy * mean))


def area_model_B(loop: XYLoop) -> float:
    """Signed area enclosed on the base of SU(2) -> SU(2)/S(U(1)xU(1)).

    That base is the sphere of radius 1/2, so this is a quarter of the CP^1
    area.  Rectangles use the closed form; other loops use Green's theorem
    with the primitive ``2 sin^2 x dy`` of the CP^1 area form ``2 sin 2x dx dy``.
    """
    if isinstance(loop, Rect):
        return 0.25 * area_rect_cp1(loop.p, loop.a, loop.q, loop.b)
    pts = _xy_polygon(loop)
    return 0.25 * 2.0 * _sin2_dy_exact(pts)


def area_surface_S(loop: XYLoop, n: int, m: int) -> float:
    """Area on the Hopf surface in G_{n,m}: lengths scale by sqrt(2n/(n+m))."""
    return 2 * n / (n + m) * area_model_B(loop)


def area_flat_uv(loop: SampledUV, surface: FlatPair) -> float:
    """Signed area of a (u, v) polygon on a flat surface (the exponential is a local isometry there)."""
    pts = loop.polygon()
    u, v = pts[:-1].T
    u1, v1 = pts[1:].T
    shoelace = 0.5 * float(np.sum(u * v1 - u1 * v))
    k = surface.shape.size
    Xh, Yh = hat(surface.X.X), hat(surface.Y.X)
    gram = np.array([[inner_product(Xh, Xh, k), inner_product(Xh, Yh, k)],
                     [inner_product(Yh, Xh, k), inner_product(Yh, Yh, k)]])
    return shoelace * float(np.sqrt(np.linalg.det(gram)))


def hopf_chart_lift(x, y, X: UmnElement) -> np.ndarray:
    """``f~(t_point(x, y)) = exp(f(x cos y E1 + x sin y E2))``, vectorized."""
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    return matrix_exp(f_alg(x * np.cos(y), x * np.sin(y), np.zeros_like(x), X))


def area_numeric(surface: HopfDisk, rect: Rect, mesh: int = 64, step: float = 1e-6) -> float:
    """Area of the rectangle's image on the Hopf surface from the induced metric.

    The chart tangents of ``(x, y) -> f~(t_point(x, y))`` are obtained by
    central differences, left-translated to the identity and projected onto
    the off-diagonal part, whose trace-form length is the length on the base.
    The resulting ``sqrt(EG - F^2)`` is integrated with a Gauss-Legendre rule.
    """
    if not isinstance(surface, HopfDisk):
        raise TypeError("area_numeric needs a HopfDisk surface")
    if mesh < 8:
        raise ValueError(f"mesh {mesh} is too coarse, need at least 8 nodes per side")
    if rect.a == 0 or rect.b == 0:
        return 0.0
    X = surface.X
    shape = BlockShape(X.n, X.m)
    k = shape.size
    nodes, weights = np.polynomial.legendre.leggauss(mesh)
    xs = rect.p + 0.5 * rect.a * (nodes + 1)
    ys = rect.q + 0.5 * rect.b * (nodes + 1)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    w = hopf_chart_lift(gx, gy, X)
    winv = dagger(w)
    dx = proj_m(winv @ (hopf_chart_lift(gx + step, gy, X) - hopf_chart_lift(gx - step, gy, X)) / (2 * step), shape)
    dy = proj_m(winv @ (hopf_chart_lift(gx, gy + step, X) - hopf_chart_lift(gx, gy - step, X)) / (2 * step), shape)

    def form(A, B):
        return np.real(np.sum(np.conj(A) * B, axis=(-2, -1))) / k

    E, F, G = form(dx, dx), form(dx, dy), form(dy, dy)
    density = np.sqrt(np.maximum(E * G - F * F, 0.0))
    jac = 0.25 * rect.a * rect.b
    return float(jac * np.einsum("i,j,ij->", weights, weights, density))


# -- the model fiber ODE ----------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def z_holonomy(loop: XYLoop, panels: int = 4) -> float:
    """Total change of the fiber angle z, ``int_0^1 sin^2(x(t)) y'(t) dt``.

    Integrated in t by composite Gauss-Legendre quadrature on each edge.
    """
    pts = _xy_polygon(loop)
    nseg = len(pts) - 1
    total = 0.0
    for (x0, y0), (x1, y1) in zip(pts[:-1], pts[1:]):
        # edge occupies dt = 1/nseg; y'(t) = (y1 - y0) * nseg
        edges = np.linspace(0.0, 1.0, panels + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            s = lo + 0.5 * (hi - lo) * (_GL_NODES + 1)
            x = x0 + s * (x1 - x0)
            integrand = np.sin(x) ** 2 * (y1 - y0) * nseg
            total += 0.5 * (hi - lo) / nseg * float(integrand @ _GL_WEIGHTS)
    return total


# -- lifts ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LiftedPath:
    """A closed piecewise-smooth path in U(n+m), one smooth piece per loop edge.

    ``value(k, s)`` and ``maurer_cartan(k, s)`` evaluate piece ``k`` at local
    parameters ``s in [0, 1]`` (arrays allowed); the Maurer-Cartan form
    ``w^{-1} dw/dt`` is with respect to the global parameter t.
    """

    n: int
    m: int
    pieces: int
    piece_value: Callable[[int, np.ndarray], np.ndarray]
    piece_maurer_cartan: Callable[[int, np.ndarray], np.ndarray]

    def value(self, t: float) -> np.ndarray:
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"t={t} outside [0, 1]")
        k = min(int(t * self.pieces), self.pieces - 1)
        return self.piece_value(k, np.array([t * self.pieces - k]))[0]

    def maurer_cartan(self, t: float) -> np.ndarray:
        k = min(int(t * self.pieces), self.pieces - 1)
        return self.piece_maurer_cartan(k, np.array([t * self.pieces - k]))[0]


def _t_point_derivative(x, y, dx, dy):
    """d/ds of t_point(x0 + s dx, y0 + s dy) at the given points."""
    c, s = np.cos(x), np.sin(x)
    out = np.empty(np.shape(x) + (2, 2), dtype=np.complex128)
    eiy = np.exp(1j * y)
    out[..., 0, 0] = -s * dx
    out[..., 1, 1] = -s * dx
    out[..., 0, 1] = -(c * dx - 1j * s * dy) * np.conj(eiy)
    out[..., 1, 0] = (c * dx + 1j * s * dy) * eiy
    return out


def lift_path_hopf(loop: XYLoop, X: UmnElement) -> LiftedPath:
    """``t -> f~(t_point(x(t), y(t)))``.

    The Maurer-Cartan form comes from the chain rule: it is f applied to
    ``t_point^{-1} d t_point/dt``, computed from the 2x2 derivative.
    """
    pts = _xy_polygon(loop)
    nseg = len(pts) - 1

    def edge(k, s):
        (x0, y0), (x1, y1) = pts[k], pts[k + 1]
        s = np.asarray(s, dtype=float)
        return x0 + s * (x1 - x0), y0 + s * (y1 - y0), x1 - x0, y1 - y0

    def value(k, s):
        x, y, _, _ = edge(k, s)
        return hopf_chart_lift(x, y, X)

    def maurer_cartan(k, s):
        x, y, dx, dy = edge(k, s)
        xi = dagger(t_point_matrix(x, y)) @ _t_point_derivative(x, y, dx, dy)
        a, b, c = su2_coefficients(xi)
        return nseg * f_alg(a, b, c, X)

    return LiftedPath(X.n, X.m, nseg, value, maurer_cartan)


_FD_STEP = 1e-5


def lift_path_flat(loop: SampledUV, surface: FlatPair) -> LiftedPath:
    """``t -> exp(u(t) hat(X) + v(t) hat(Y))``; derivative by 4th-order central differences."""
    if not isinstance(loop, SampledUV):
        raise TypeError("flat lifts need a (u, v) loop")
    pts = loop.polygon()
    nseg = len(pts) - 1
    Xh, Yh = hat(surface.X.X), hat(surface.Y.X)

    def value(k, s):
        (u0, v0), (u1, v1) = pts[k], pts[k + 1]
        s = np.asarray(s, dtype=float)[..., None, None]
        return matrix_exp((u0 + s * (u1 - u0)) * Xh + (v0 + s * (v1 - v0)) * Yh)

    def maurer_cartan(k, s):
        s = np.asarray(s, dtype=float)
        h = _FD_STEP
        deriv = (-value(k, s + 2 * h) + 8 * value(k, s + h) - 8 * value(k, s - h) + value(k, s - 2 * h)) / (12 * h)
        return nseg * dagger(value(k, s)) @ deriv

    return LiftedPath(surface.X.n, surface.X.m, nseg, value, maurer_cartan)


# -- transport ------------------------------------------------------------------

class TransportResult(NamedTuple):
    holonomy: np.ndarray
    drift: float
    corrected: bool


_MAX_STEPS = 10**7


def transport(path: LiftedPath, steps: int = 512, fiber: str = "n", correct: bool = True) -> TransportResult:
    """Integrate the horizontality ODE ``a' = -B a`` with classical RK4.

    ``fiber="n"`` uses the upper-left block (the U(n) bundle); ``fiber="m"``
    the lower-right block (the U(m) bundle).  Steps are shared out over the
    smooth pieces so no stage straddles a corner.  If the result drifts from
    unitarity by more than 1e-10 it is replaced by its polar factor, unless
    ``correct`` is false.  The reported drift is always the raw one.
    """
    if steps < 16:
        raise ValueError(f"need at least 16 steps, got {steps}")
    if steps > _MAX_STEPS:
        raise ValueError(f"{steps} steps would underflow the step size")
    if fiber == "n":
        block = (slice(0, path.n), slice(0, path.n))
        size = path.n
    elif fiber == "m":
        block = (slice(path.n, None), slice(path.n, None))
        size = path.m
    else:
        raise ValueError(f"fiber must be 'n' or 'm', got {fiber!r}")
    start = path.piece_value(0, np.array([0.0]))[0]
    end = path.piece_value(path.pieces - 1, np.array([1.0]))[0]
    if max_norm(start - end) > 1e-9:
        raise ValueError("path is not closed")

    counts = np.full(path.pieces, steps // path.pieces)
    counts[: steps % path.pieces] += 1
    counts = np.maximum(counts, 1)

    a = np.eye(size, dtype=np.complex128)
    for k, count in enumerate(counts):
        # half-step grid; B is given per unit global t, piece spans 1/pieces
        grid = np.linspace(0.0, 1.0, 2 * count + 1)
        B = path.piece_maurer_cartan(k, grid)[(Ellipsis,) + block]
        h = 1.0 / (count * path.pieces)
        for j in range(count):
            B0, Bh, B1 = B[2 * j], B[2 * j + 1], B[2 * j + 2]
            k1 = -B0 @ a
            k2 = -Bh @ (a + 0.5 * h * k1)
            k3 = -Bh @ (a + 0.5 * h * k2)
            k4 = -B1 @ (a + h * k3)
            a = a + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    drift = unitary_drift(a)
    corrected = correct and drift > DRIFT_TOL
    if corrected:
        log.info("transport drifted from unitarity by %.3e; applying polar correction", drift)
        a = polar_unitary(a)
    return TransportResult(a, drift, corrected)


def holonomy_transport(path: LiftedPath, steps: int = 512) -> np.ndarray:
    return transport(path, steps).holonomy


# -- closed forms ---------------------------------------------------------------

class Prediction(NamedTuple):
    V: np.ndarray
    theta: float
    theta_model: Optional[float]
    area_model_B: Optional[float]
    area_surface_S: Optional[float]
    flat: bool


def holonomy_analytic(surface, loop: Loop) -> Prediction:
    """Closed-form holonomy of a loop on a totally geodesic surface.

    Flat pairs give the identity.  Hopf disks give ``exp(i theta) I_n`` with
    ``|theta| = 2 (n+m)/(2n) A_S``, signed by the loop's orientation (see the
    module docstring).  ``theta_model = -2 A_B`` is the same number reached
    through the model area; the two agree because ``A_S = (2n/(n+m)) A_B``.
    """
    n, m = surface.X.n, surface.X.m
    if isinstance(surface, FlatPair):
        if not isinstance(loop, SampledUV):
            raise TypeError("flat surfaces take (u, v) loops")
        return Prediction(np.eye(n, dtype=np.complex128), 0.0, None, None, area_flat_uv(loop, surface), True)
    if isinstance(surface, HopfDisk):
        if isinstance(loop, SampledUV):
            raise TypeError("Hopf surfaces take (x, y) loops")
        a_b = area_model_B(loop)
        a_s = area_surface_S(loop, n, m)
        theta = -2 * (n + m) / (2 * n) * a_s
        return Prediction(np.exp(1j * theta) * np.eye(n), theta, -2 * a_b, a_b, a_s, False)
    raise TypeError(f"unknown surface {type(surface).__name__}")


def holonomy_um(theta: float, X: UmnElement) -> np.ndarray:
    """Holonomy on the U(m) side: ``I_m + ((e^{-i theta} - 1)/lam) X X*``."""
    return np.eye(X.m) + (np.exp(-1j * theta) - 1) / X.lam * (X.X @ dagger(X.X))


def lift_path(surface, loop: Loop) -> LiftedPath:
    if isinstance(surface, HopfDisk):
        return lift_path_hopf(loop, surface.X)
    if isinstance(surface, FlatPair):
        return lift_path_flat(loop, surface)
    raise TypeError(f"unknown surface {type(surface).__name__}")


# -- reports --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HolonomyReport:
    V_measured: np.ndarray
    V_predicted: np.ndarray
    theta_predicted: float
    theta_model: Optional[float]
    area_model_B: Optional[float]
    area_surface_S: Optional[float]
    deviation: float
    steps: int
    flat: bool
    unitarity_drift: float
    n: int
    m: int

    def to_json(self) -> dict:
        return {
            "V_measured": matrix_to_json(self.V_measured),
            "V_predicted": matrix_to_json(self.V_predicted),
            "theta_predicted": self.theta_predicted,
            "theta_model": self.theta_model,
            "area_model_B": self.area_model_B,
            "area_surface_S": self.area_surface_S,
            "deviation": self.deviation,
            "steps": self.steps,
            "flat": self.flat,
            "unitarity_drift": self.unitarity_drift,
            "n": self.n,
            "m": self.m,
        }


def holonomy_report(surface, loop: Loop, steps: int = 512) -> HolonomyReport:
    """Run the transport integrator and the closed form on the same loop."""
    pred = holonomy_analytic(surface, loop)
    result = transport(lift_path(surface, loop), steps)
    return HolonomyReport(
        V_measured=result.holonomy,
        V_predicted=pred.V,
        theta_predicted=pred.theta,
        theta_model=pred.theta_model,
        area_model_B=pred.area_model_B,
        area_surface_S=pred.area_surface_S,
        deviation=max_norm(result.holonomy - pred.V),
        steps=steps,
        flat=pred.flat,
        unitarity_drift=result.drift,
        n=surface.X.n,
        m=surface.X.m,
    )


def convergence_sweep(surface, loop: Loop, steps_list) -> list:
    """(steps, deviation from the closed form) for each step count."""
    pred = holonomy_analytic(surface, loop)
    path = lift_path(surface, loop)
    return [(int(s), max_norm(transport(path, int(s), correct=False).holonomy - pred.V)) for s in steps_list]


def convergence_slope(rows) -> float:
    """Least-squares slope of log(deviation) against log(steps), sign flipped."""
    steps, dev = np.array(rows, dtype=float).T
    slope, _ = np.polyfit(np.log(steps), np.log(dev), 1)
    return float(-slope)
