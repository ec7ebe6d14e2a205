import json

import numpy as np
import pytest

from holonomy_lab.holonomy import (
    Rect,
    SampledUV,
    SampledXY,
    area_flat_uv,
    area_model_B,
    area_numeric,
    area_rect_cp1,
    area_surface_S,
    convergence_slope,
    convergence_sweep,
    holonomy_analytic,
    holonomy_report,
    holonomy_um,
    lift_path,
    lift_path_flat,
    lift_path_hopf,
    sampled_curve,
    transport,
    z_holonomy,
)
from holonomy_lab.lie import flat_pair_generate, hat, make_hopf_disk, random_umn, validate_umn
from holonomy_lab.matcore import matrix_exp, max_norm
from holonomy_lab.su2model import f_group, fiber_exp, t_point


def simpson_2d(f, x0, x1, y0, y1, n=400):
    """Composite Simpson rule on a rectangle; oracle for the closed-form areas."""
    x = np.linspace(x0, x1, n + 1)
    y = np.linspace(y0, y1, n + 1)
    w = np.ones(n + 1)
    w[1:-1:2], w[2:-1:2] = 4, 2
    wx = w * (x1 - x0) / (3 * n)
    wy = w * (y1 - y0) / (3 * n)
    X, Y = np.meshgrid(x, y, indexing="ij")
    return float(wx @ f(X, Y) @ wy)


def ellipse(cx, cy, rx, ry, samples=400):
    return sampled_curve(lambda t: cx + rx * np.cos(2 * np.pi * t),
                         lambda t: cy + ry * np.sin(2 * np.pi * t), samples)


# -- loops ----------------------------------------------------------------------

def test_rect_validation():
    Rect(0, 0, 0, 0)
    with pytest.raises(ValueError):
        Rect(1.0, 1.0, 0, 1)
    with pytest.raises(ValueError):
        Rect(-0.1, 0.2, 0, 1)
    with pytest.raises(ValueError):
        Rect(0.1, 0.2, 0, -1)


def test_sampled_loop_validation():
    with pytest.raises(ValueError):
        SampledXY([(0, 0), (1, 0), (1, 1), (0, 1)])
    with pytest.raises(ValueError):
        SampledUV([(0, 0), (1, 0), (0, 0)])
    with pytest.raises(ValueError):
        SampledXY([[0, 0, 0]] * 4)


# -- areas ----------------------------------------------------------------------

def test_area_rect_cp1_examples():
    assert area_rect_cp1(0, np.pi / 2, 0, 2 * np.pi) == pytest.approx(4 * np.pi)
    assert area_rect_cp1(0, np.pi / 4, 0, 1) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        area_rect_cp1(1.0, 1.0, 0, 1)


@pytest.mark.parametrize("p,a,q,b", [(0.1, 0.6, 0.0, 1.0), (0.4, 1.1, 2.0, 3.5), (0.0, 0.3, 1.0, 0.2)])
def test_area_rect_cp1_matches_simpson(p, a, q, b):
    oracle = simpson_2d(lambda x, y: 2 * np.sin(2 * x), p, p + a, q, q + b)
    assert area_rect_cp1(p, a, q, b) == pytest.approx(oracle, abs=1e-9)


def test_area_model_B_examples():
    assert area_model_B(Rect(0, np.pi / 2, 0, 2 * np.pi)) == pytest.approx(np.pi)
    r = Rect(0.2, 0.5, 0.3, 1.1)
    assert area_surface_S(r, 2, 2) == area_model_B(r)
    assert area_surface_S(r, 1, 3) == pytest.approx(0.5 * area_model_B(r))


def test_area_model_B_green_matches_closed_form():
    r = Rect(0.2, 0.9, 0.5, 2.0)
    assert area_model_B(SampledXY(r.polygon())) == pytest.approx(area_model_B(r), abs=1e-14)
    assert area_model_B(r.reversed()) == pytest.approx(-area_model_B(r), abs=1e-14)


def test_area_model_B_ellipse_matches_simpson():
    cx, cy, rx, ry = 0.7, 1.0, 0.3, 0.5
    loop = ellipse(cx, cy, rx, ry, samples=4000)

    def inside(x, y):
        return (((x - cx) / rx) ** 2 + ((y - cy) / ry) ** 2 <= 1.0) * 0.5 * np.sin(2 * x)

    oracle = simpson_2d(inside, cx - rx, cx + rx, cy - ry, cy + ry, n=2000)
    # polygon inscribed in the ellipse: error O(1/samples^2); indicator quadrature O(1/n)
    assert area_model_B(loop) == pytest.approx(oracle, abs=2e-4)


def test_area_numeric_examples():
    disk = make_hopf_disk([[1]])
    assert area_numeric(disk, Rect(0, np.pi / 2, 0, 2 * np.pi)) == pytest.approx(np.pi, abs=1e-3)
    disk12 = make_hopf_disk(random_umn(2, 1, seed=3).X)
    r = Rect(0.3, 0.6, 0.2, 1.4)
    assert area_numeric(disk12, r) / area_model_B(r) == pytest.approx(2 / 3, abs=1e-4)
    assert area_numeric(disk12, Rect(0.3, 0.0, 0.2, 1.4)) == 0.0
    with pytest.raises(ValueError):
        area_numeric(disk12, r, mesh=4)


@pytest.mark.parametrize("n,m", [(1, 1), (2, 3), (3, 5)])
def test_area_numeric_matches_area_surface_S(n, m):
    disk = make_hopf_disk(random_umn(m, n, 1.8, seed=n + m).X)
    r = Rect(0.15, 0.8, 0.4, 2.2)
    assert area_numeric(disk, r) == pytest.approx(area_surface_S(r, n, m), abs=1e-4)


def test_area_flat_uv_scales_with_gram():
    pair = flat_pair_generate(4, 1, 0.0, 1.0, seed=1)
    square = SampledUV([(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)])
    # X*Y = 0, X*X = Y*Y = I: |hat X|^2 = 2/(n+m)
    assert area_flat_uv(square, pair) == pytest.approx(2 / 5)
    assert area_flat_uv(square.reversed(), pair) == pytest.approx(-2 / 5)


# -- z integrator ---------------------------------------------------------------

@pytest.mark.parametrize("p,a,q,b", [(0.0, np.pi / 4, 0.0, 1.0), (0.3, 0.9, 1.0, 2.5), (np.pi / 8, np.pi / 8, 0, np.pi / 2)])
def test_z_holonomy_rect(p, a, q, b):
    expected = b * (np.sin(p + a) ** 2 - np.sin(p) ** 2)
    assert z_holonomy(Rect(p, a, q, b)) == pytest.approx(expected, abs=1e-9)


def test_z_holonomy_constant_y_is_zero():
    loop = SampledXY([(0.1, 0.5), (0.8, 0.5), (1.2, 0.5), (0.1, 0.5)])
    assert z_holonomy(loop) == pytest.approx(0.0, abs=1e-15)


def test_z_holonomy_is_twice_model_area():
    for loop in [ellipse(0.7, 1.0, 0.3, 0.5), ellipse(0.5, 3.0, 0.2, 1.5, 300)]:
        assert z_holonomy(loop) == pytest.approx(2 * area_model_B(loop), abs=1e-6)


# -- lifts ----------------------------------------------------------------------

def test_hopf_lift_matches_f_group():
    X = random_umn(3, 2, 1.2, seed=4)
    r = Rect(0.2, 0.5, 0.3, 1.1)
    path = lift_path_hopf(r, X)
    for t, (x, y) in [(0.0, (0.2, 0.3)), (0.125, (0.45, 0.3)), (0.5, (0.7, 1.4))]:
        np.testing.assert_allclose(path.value(t), f_group(t_point(x, y), X), atol=1e-12)


def test_hopf_lift_maurer_cartan_matches_differences():
    X = random_umn(3, 1, seed=0)
    path = lift_path_hopf(Rect(0.2, 0.5, 0.3, 1.1), X)
    t, h = 0.6, 1e-6
    fd = (path.value(t + h) - path.value(t - h)) / (2 * h)
    np.testing.assert_allclose(path.maurer_cartan(t), path.value(t).conj().T @ fd, atol=1e-7)


def test_flat_lift_is_geodesic_on_axis():
    pair = flat_pair_generate(4, 2, 0.2, 1.0, seed=3)
    loop = SampledUV([(0, 0), (1.5, 0), (0.7, 0), (0, 0)])
    path = lift_path_flat(loop, pair)
    np.testing.assert_allclose(path.value(1 / 6), matrix_exp(0.75 * hat(pair.X.X)), atol=1e-13)


def test_constant_loop_gives_identity():
    X = random_umn(3, 2, seed=1)
    path = lift_path_hopf(Rect(0.4, 0, 0.2, 0), X)
    for t in (0.0, 0.3, 1.0):
        np.testing.assert_allclose(path.value(t), path.value(0.0))
    np.testing.assert_allclose(transport(path, 64).holonomy, np.eye(2), atol=1e-15)


# -- transport ------------------------------------------------------------------

def test_transport_model_rectangle():
    X = validate_umn([[1]])
    r = Rect(np.pi / 8, np.pi / 8, 0, np.pi / 2)
    theta = 2 * area_model_B(r)
    assert theta == pytest.approx(np.pi / 2 * (np.sin(np.pi / 4) ** 2 - np.sin(np.pi / 8) ** 2))
    assert theta == pytest.approx(z_holonomy(r))
    forward = transport(lift_path_hopf(r, X), 1024).holonomy
    backward = transport(lift_path_hopf(r.reversed(), X), 1024).holonomy
    # positively traversed rectangle picks up exp(-i theta)
    np.testing.assert_allclose(forward, [[np.exp(-1j * theta)]], atol=1e-6)
    np.testing.assert_allclose(backward, [[np.exp(1j * theta)]], atol=1e-6)
    np.testing.assert_allclose(backward, fiber_exp(theta, X)[:1, :1], atol=1e-6)


def test_transport_flat_polygon_is_identity():
    pair = flat_pair_generate(5, 2, -0.4, 1.3, seed=8)
    loop = SampledUV([(0, 0), (0.9, -0.3), (1.2, 0.8), (0.1, 1.1), (-0.4, 0.5), (0, 0)])
    res = transport(lift_path_flat(loop, pair), 512)
    np.testing.assert_allclose(res.holonomy, np.eye(2), atol=1e-6)


def test_transport_errors():
    X = random_umn(2, 1, seed=0)
    path = lift_path_hopf(Rect(0.1, 0.2, 0.0, 0.5), X)
    with pytest.raises(ValueError):
        transport(path, 8)
    with pytest.raises(ValueError):
        transport(path, 10**8)
    with pytest.raises(ValueError):
        transport(path, 64, fiber="k")


def test_transport_rejects_open_path():
    X = random_umn(2, 1, seed=0)
    good = lift_path_hopf(Rect(0.1, 0.2, 0.0, 0.5), X)
    broken = type(good)(good.n, good.m, good.pieces,
                        lambda k, s: good.piece_value(k, s) * (1 + 0.1 * (k == good.pieces - 1) * np.asarray(s)[..., None, None]),
                        good.piece_maurer_cartan)
    with pytest.raises(ValueError):
        transport(broken, 64)


@pytest.mark.parametrize("n,m", [(1, 2), (2, 3)])
def test_reversal_conjugates_holonomy(n, m):
    X = random_umn(m, n, 1.1, seed=n * m)
    r = Rect(0.25, 0.7, 0.1, 1.9)
    V = transport(lift_path_hopf(r, X), 1024).holonomy
    W = transport(lift_path_hopf(r.reversed(), X), 1024).holonomy
    np.testing.assert_allclose(W, V.conj().T, atol=1e-8)


def test_reversal_conjugates_general_loop():
    X = random_umn(3, 2, seed=5)
    loop = ellipse(0.6, 0.9, 0.25, 0.7, 40)
    V = transport(lift_path_hopf(loop, X), 2048).holonomy
    W = transport(lift_path_hopf(loop.reversed(), X), 2048).holonomy
    np.testing.assert_allclose(W, V.conj().T, atol=1e-8)


def test_split_rectangle_multiplies():
    X = random_umn(4, 2, 0.9, seed=12)
    r = Rect(0.2, 0.9, 0.4, 1.6)
    left, right = r.split_x(0.35)
    V = transport(lift_path_hopf(r, X), 1024).holonomy
    V1 = transport(lift_path_hopf(left, X), 1024).holonomy
    V2 = transport(lift_path_hopf(right, X), 1024).holonomy
    np.testing.assert_allclose(V1 @ V2, V, atol=1e-6)


def test_m_side_transport_matches_holonomy_um():
    X = random_umn(3, 1, 1.5, seed=2)
    disk = make_hopf_disk(X.X)
    r = Rect(0.2, 0.5, 0.3, 1.2)
    pred = holonomy_analytic(disk, r)
    Vm = transport(lift_path(disk, r), 1024, fiber="m").holonomy
    np.testing.assert_allclose(Vm, holonomy_um(pred.theta, X), atol=1e-6)


def test_holonomy_um_examples():
    X = random_umn(4, 2, 1.7, seed=3)
    np.testing.assert_allclose(holonomy_um(0.0, X), np.eye(4), atol=1e-15)
    np.testing.assert_allclose(holonomy_um(1.3, X), fiber_exp(1.3, X)[2:, 2:], atol=1e-15)


# -- closed form ----------------------------------------------------------------

def test_holonomy_analytic_examples():
    pair = flat_pair_generate(4, 2, 0.1, 1.0, seed=0)
    pred = holonomy_analytic(pair, SampledUV([(0, 0), (1, 0), (0, 1), (0, 0)]))
    assert pred.flat and pred.theta == 0.0
    np.testing.assert_array_equal(pred.V, np.eye(2))

    disk = make_hopf_disk(random_umn(2, 2, seed=1).X)
    r = Rect(0.1, 0.7, 0.0, 1.3)
    pred = holonomy_analytic(disk, r)
    assert abs(pred.theta) == pytest.approx(2 * area_model_B(r))

    one = make_hopf_disk([[1]])
    pred = holonomy_analytic(one, Rect(0, np.pi / 4, 0, 1))
    assert pred.theta == pytest.approx(-0.5)
    np.testing.assert_allclose(pred.V, [[np.exp(-0.5j)]])
    rev = holonomy_analytic(one, Rect(0, np.pi / 4, 0, 1).reversed())
    np.testing.assert_allclose(rev.V, [[np.exp(0.5j)]])


def test_holonomy_analytic_two_routes_agree():
    for n, m in [(1, 2), (2, 3), (3, 5)]:
        disk = make_hopf_disk(random_umn(m, n, seed=m).X)
        pred = holonomy_analytic(disk, Rect(0.2, 0.4, 0.0, 2.0))
        assert pred.theta == pytest.approx(pred.theta_model, rel=1e-14)


def test_holonomy_analytic_rejects_mismatched_loop():
    disk = make_hopf_disk(random_umn(2, 1, seed=1).X)
    pair = flat_pair_generate(2, 1, 0.0, 1.0, seed=1)
    with pytest.raises(TypeError):
        holonomy_analytic(disk, SampledUV([(0, 0), (1, 0), (0, 1), (0, 0)]))
    with pytest.raises(TypeError):
        holonomy_analytic(pair, Rect(0.1, 0.1, 0, 1))


def test_holonomy_report_fields():
    disk = make_hopf_disk(random_umn(2, 1, seed=4).X)
    rep = holonomy_report(disk, Rect(0.3, 0.4, 0, 1.5), steps=512)
    assert rep.deviation < 1e-6 and rep.deviation == max_norm(rep.V_measured - rep.V_predicted)
    assert rep.unitarity_drift < 1e-8 and not rep.flat
    obj = json.loads(json.dumps(rep.to_json()))
    assert obj["steps"] == 512 and obj["n"] == 1 and obj["m"] == 2


def test_convergence_order():
    disk = make_hopf_disk(random_umn(3, 2, seed=0).X)
    loop = ellipse(0.7, 1.0, 0.4, 0.9, 6)
    rows = convergence_sweep(disk, loop, [16, 32, 64, 128, 256])
    assert all(b[1] < a[1] for a, b in zip(rows, rows[1:]))
    assert convergence_slope(rows) == pytest.approx(4.0, abs=0.3)
