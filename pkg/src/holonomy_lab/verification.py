"""Seeded verification suites, one per acceptance criterion.

Each suite returns a :class:`SuiteResult`; ``run_all`` gathers them in a
fixed order.  Trial ``k`` of suite ``s`` draws from ``make_rng(seed, s, k)``
so results do not depend on execution order or on the worker count.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._random import complex_gaussian, make_rng
from .holonomy import (
    Rect,
    SampledUV,
    area_model_B,
    area_numeric,
    area_rect_cp1,
    area_surface_S,
    convergence_slope,
    convergence_sweep,
    lift_path,
    sampled_curve,
    transport,
    z_holonomy,
)
from .lie import (
    HopfDisk,
    flat_pair_generate,
    random_umn,
    skew_pair_generate,
    span_closure_check,
    triple_bracket_direct,
    triple_bracket_formula,
    hat,
    k_matrix,
)
from .matcore import inner_product, matrix_exp, max_norm, real_embedding, real_inner_product
from .su2model import basis_image_norms, fiber_element, fiber_exp, hopf_p, random_su2, t_point

AREA_LAW_SHAPES = ((1, 1), (1, 2), (2, 2), (2, 3), (3, 5))
FLAT_SHAPES = ((1, 2), (1, 3), (2, 4), (2, 5), (3, 6))


@dataclass
class SuiteResult:
    name: str
    passed: bool
    worst: float
    threshold: float
    relation: str = "<"
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.name:<22} worst={self.worst:.3e} "
                f"(need {self.relation} {self.threshold:.1e})  [{self.seconds:.2f}s]")


def worker_count() -> int:
    cap = os.environ.get("HOLONOMY_LAB_THREADS")
    default = min(4, os.cpu_count() or 1)
    if cap is None:
        return default
    try:
        return max(1, min(default, int(cap)))
    except ValueError:
        return default


def _map(fn, items, workers):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def random_rect(rng, min_side=0.05) -> Rect:
    p = rng.uniform(0.0, np.pi / 2 - 2 * min_side)
    a = rng.uniform(min_side, np.pi / 2 - p)
    q = rng.uniform(0.0, 2 * np.pi)
    b = rng.uniform(min_side, 2 * np.pi)
    return Rect(p, a, q, b)


def random_uv_polygon(rng, max_vertices=8) -> SampledUV:
    k = int(rng.integers(3, max_vertices + 1))
    pts = rng.uniform(-1.0, 1.0, size=(k, 2))
    return SampledUV(np.vstack([pts, pts[:1]]))


def _lam(rng):
    return float(rng.uniform(0.5, 2.0))


# -- suites ---------------------------------------------------------------------

def suite_area_law(seed, tol=1e-6, steps=512, workers=1, surfaces=20, rects=5):
    """Hopf surfaces: transport equals exp(+i theta) I_n on the reversed
    (clockwise) rectangle boundary and exp(-i theta) I_n on the forward one,
    ``theta = 2 (n+m)/(2n) A_S``."""
    jobs = [(shape_id, s) for shape_id in range(len(AREA_LAW_SHAPES)) for s in range(surfaces)]

    def trial(job):
        shape_id, s = job
        n, m = AREA_LAW_SHAPES[shape_id]
        rng = make_rng(seed, 1, shape_id, s)
        X = random_umn(m, n, _lam(rng), seed=rng)
        surface = HopfDisk(X)
        worst = 0.0
        for _ in range(rects):
            rect = random_rect(rng)
            theta = 2 * (n + m) / (2 * n) * area_surface_S(rect, n, m)
            cw = transport(lift_path(surface, rect.reversed()), steps).holonomy
            ccw = transport(lift_path(surface, rect), steps).holonomy
            worst = max(worst, max_norm(cw - np.exp(1j * theta) * np.eye(n)),
                        max_norm(ccw - np.exp(-1j * theta) * np.eye(n)))
        return worst

    devs = _map(trial, jobs, workers)
    worst = max(devs)
    return SuiteResult("area-law", worst < tol, worst, tol,
                       detail={"transports": 2 * len(jobs) * rects})


def suite_flatness(seed, tol=1e-6, steps=512, workers=1, pairs=50, loops=2):
    def trial(k):
        rng = make_rng(seed, 2, k)
        n, m = FLAT_SHAPES[k % len(FLAT_SHAPES)]
        lam = _lam(rng)
        mu = float(rng.uniform(-1.0, 1.0))
        eta = mu * mu / lam + float(rng.uniform(0.2, 2.0))
        surface = flat_pair_generate(m, n, mu, eta, seed=rng, lam=lam)
        worst = 0.0
        for _ in range(loops):
            loop = random_uv_polygon(rng)
            V = transport(lift_path(surface, loop), steps).holonomy
            worst = max(worst, max_norm(V - np.eye(n)))
        return worst

    worst = max(_map(trial, range(pairs), workers))
    return SuiteResult("flatness", worst < tol, worst, tol)


def suite_cp1_law(seed, tol=1e-9, count=100):
    worst = 0.0
    for k in range(count):
        rect = random_rect(make_rng(seed, 3, k), min_side=0.0)
        z = z_holonomy(rect)
        closed = rect.b * (np.sin(rect.p + rect.a) ** 2 - np.sin(rect.p) ** 2)
        half_area = 0.5 * area_rect_cp1(rect.p, rect.a, rect.q, rect.b)
        worst = max(worst, abs(z - closed), abs(z - half_area))
    return SuiteResult("cp1-law", worst < tol, worst, tol)


def suite_conformal(seed, tol=1e-12, area_tol=1e-3, count=100, area_cases=5, mesh=64):
    worst_norm = 0.0
    for k in range(count):
        rng = make_rng(seed, 4, k)
        n = int(rng.integers(1, 4))
        m = int(rng.integers(n, n + 5))
        X = random_umn(m, n, _lam(rng), seed=rng)
        alpha = np.sqrt(2 * n / (n + m))
        worst_norm = max(worst_norm, *(abs(v - alpha) for v in basis_image_norms(X)))
    worst_area = 0.0
    for k in range(area_cases):
        rng = make_rng(seed, 4, count + k)
        n, m = AREA_LAW_SHAPES[k % len(AREA_LAW_SHAPES)]
        X = random_umn(m, n, _lam(rng), seed=rng)
        rect = random_rect(rng, min_side=0.1)
        ratio = area_numeric(HopfDisk(X), rect, mesh) / area_model_B(rect)
        worst_area = max(worst_area, abs(ratio - 2 * n / (n + m)))
    passed = worst_norm < tol and worst_area <= area_tol
    return SuiteResult("conformal-factor", passed, worst_norm, tol,
                       detail={"area_ratio_worst": worst_area, "area_tol": area_tol})


def suite_bracket_formula(seed, tol=1e-12, count=1000):
    worst = 0.0
    for k in range(count):
        rng = make_rng(seed, 5, k)
        m = int(rng.integers(1, 6))
        n = int(rng.integers(1, 5))
        X = complex_gaussian(rng, (m, n)) / np.sqrt(2)
        Y = complex_gaussian(rng, (m, n)) / np.sqrt(2)
        direct = triple_bracket_direct(hat(X), hat(Y), hat(X))
        worst = max(worst, max_norm(hat(triple_bracket_formula(X, Y)) - direct))
    return SuiteResult("bracket-formula", worst < tol, worst, tol)


def suite_fiber_exp(seed, tol=1e-10, count=100, grid=41):
    thetas = np.linspace(-2 * np.pi, 2 * np.pi, grid)
    worst = 0.0
    for k in range(count):
        rng = make_rng(seed, 6, k)
        n = int(rng.integers(1, 4))
        m = int(rng.integers(n, n + 4))
        X = random_umn(m, n, _lam(rng), seed=rng)
        K = k_matrix(X)
        exps = matrix_exp(-(thetas / X.lam)[:, None, None] * K)
        for theta, E in zip(thetas, exps):
            worst = max(worst, max_norm(fiber_exp(theta, X) - E))
        for theta, phi in rng.choice(thetas, size=(10, 2)):
            worst = max(worst, max_norm(fiber_exp(theta, X) @ fiber_exp(phi, X) - fiber_exp(theta + phi, X)))
    return SuiteResult("fiber-exp", worst < tol, worst, tol)


def suite_geodesic(seed, tol=1e-10, floor=1e-6, count=50):
    worst_true = 0.0
    for k in range(count):
        rng = make_rng(seed, 7, k)
        n, m = FLAT_SHAPES[k % len(FLAT_SHAPES)]
        lam = _lam(rng)
        mu = float(rng.uniform(-1.0, 1.0))
        flat = flat_pair_generate(m, n, mu, mu * mu / lam + float(rng.uniform(0.2, 2.0)), seed=rng, lam=lam)
        hopf = HopfDisk(random_umn(m, n, lam, seed=rng))
        worst_true = max(worst_true, span_closure_check(flat.basis()).residual,
                         span_closure_check(hopf.basis()).residual)
    least_false = np.inf
    for k in range(count):
        rng = make_rng(seed, 7, count + k)
        n, m = FLAT_SHAPES[k % len(FLAT_SHAPES)]
        lam = _lam(rng)
        mu = complex(rng.uniform(-1.0, 1.0), rng.choice([-1, 1]) * rng.uniform(0.2, 1.0))
        X, Y = skew_pair_generate(m, n, mu, abs(mu) ** 2 / lam + float(rng.uniform(0.2, 2.0)), seed=rng, lam=lam)
        least_false = min(least_false, span_closure_check([X.X, Y]).residual)
    passed = worst_true < tol and least_false > floor
    return SuiteResult("geodesic-condition", passed, worst_true, tol,
                       detail={"counterexample_min_residual": float(least_false), "floor": floor})


def suite_hopf(seed, tol=1e-12, floor=1e-3, count=100):
    worst_fiber = 0.0
    least_off = np.inf
    worst_square = 0.0
    for k in range(count):
        rng = make_rng(seed, 8, k)
        w = random_su2(rng)
        pw = hopf_p(w).matrix
        v = fiber_element(rng.uniform(0, 2 * np.pi))
        worst_fiber = max(worst_fiber, max_norm(hopf_p(w @ v).matrix - pw))
        u = random_su2(rng)
        least_off = min(least_off, max_norm(hopf_p(w @ u).matrix - pw))
        t = t_point(rng.uniform(0, np.pi / 2), rng.uniform(0, 2 * np.pi))
        worst_square = max(worst_square, max_norm(hopf_p(t).matrix - t.matrix @ t.matrix))
    worst = max(worst_fiber, worst_square)
    return SuiteResult("hopf-projection", worst < tol and least_off > floor, worst, tol,
                       detail={"non_fiber_min_deviation": float(least_off), "floor": floor})


def suite_isometry(seed, tol=1e-12, count=500):
    worst = 0.0
    for k in range(count):
        rng = make_rng(seed, 9, k)
        size = int(rng.integers(1, 7))
        A, B = (complex_gaussian(rng, (size, size)) for _ in range(2))
        A, B = A - A.conj().T, B - B.conj().T
        worst = max(worst, abs(inner_product(A, B) - real_inner_product(real_embedding(A), real_embedding(B))))
    return SuiteResult("real-embedding", worst < tol, worst, tol)


def convergence_loop(rng):
    cx = rng.uniform(0.5, 0.9)
    rx = rng.uniform(0.2, 0.4)
    cy = rng.uniform(1.0, 5.0)
    ry = rng.uniform(0.5, 1.0)
    return sampled_curve(lambda t: cx + rx * np.cos(2 * np.pi * t),
                         lambda t: cy + ry * np.sin(2 * np.pi * t), samples=6)


def suite_integrator(seed, tol=1e-10, slope_band=0.3, cases=3):
    steps = [16, 32, 64, 128, 256, 512]
    slopes = []
    worst_drift = 0.0
    for k in range(cases):
        rng = make_rng(seed, 10, k)
        n, m = AREA_LAW_SHAPES[k % len(AREA_LAW_SHAPES)]
        surface = HopfDisk(random_umn(m, n, _lam(rng), seed=rng))
        loop = convergence_loop(rng)
        slopes.append(convergence_slope(convergence_sweep(surface, loop, steps)))
        worst_drift = max(worst_drift, transport(lift_path(surface, loop), 512, correct=False).drift)
    slope_err = max(abs(s - 4.0) for s in slopes)
    passed = slope_err <= slope_band and worst_drift < tol
    return SuiteResult("integrator", passed, worst_drift, tol,
                       detail={"slopes": slopes, "slope_band": slope_band})


SUITES = {
    "area-law": suite_area_law,
    "flatness": suite_flatness,
    "cp1-law": suite_cp1_law,
    "conformal-factor": suite_conformal,
    "bracket-formula": suite_bracket_formula,
    "fiber-exp": suite_fiber_exp,
    "geodesic-condition": suite_geodesic,
    "hopf-projection": suite_hopf,
    "real-embedding": suite_isometry,
    "integrator": suite_integrator,
}

_PARALLEL = {"area-law", "flatness"}


def run_all(seed: int = 0, tol: float | None = None, workers: int | None = None):
    """Run every suite.  ``tol`` replaces each suite's upper-bound tolerance."""
    workers = worker_count() if workers is None else workers
    results = []
    for name, suite in SUITES.items():
        kwargs = {}
        if tol is not None:
            kwargs["tol"] = tol
        if name in _PARALLEL:
            kwargs["workers"] = workers
        start = time.perf_counter()
        res = suite(seed, **kwargs)
        res.seconds = time.perf_counter() - start
        results.append(res)
    return results
