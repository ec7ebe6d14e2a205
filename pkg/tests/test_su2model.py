import itertools

import numpy as np
import pytest

from holonomy_lab.lie import UmnElement, hat, k_matrix, random_umn, validate_umn
from holonomy_lab.matcore import commutator, matrix_exp, unitary_check
from holonomy_lab.su2model import (
    E1,
    E2,
    E3,
    IDENTITY,
    SU2_BASIS,
    SU2Element,
    basis_image_norms,
    conformal_factor,
    conformal_h_check,
    cp1_point,
    f_alg,
    f_group,
    fiber_element,
    fiber_exp,
    hopf_p,
    i_conjugate,
    random_su2,
    su2_coefficients,
    su2_log,
    t_point,
    t_point_matrix,
)


def test_su2_element_rejects_non_unit():
    with pytest.raises(ValueError):
        SU2Element(1.0, 1.0, 0.0, 0.0)


def test_su2_matrix_is_special_unitary(rng):
    for _ in range(20):
        M = random_su2(rng).matrix
        assert unitary_check(M, 1e-12)
        assert np.linalg.det(M) == pytest.approx(1.0, abs=1e-12)


def test_quaternion_product_matches_matrix(rng):
    w, v = random_su2(rng), random_su2(rng)
    np.testing.assert_allclose((w @ v).matrix, w.matrix @ v.matrix, atol=1e-15)
    np.testing.assert_allclose((w @ w.inverse()).quaternion, IDENTITY.quaternion, atol=1e-15)


def test_quaternion_in_basis_coordinates(rng):
    w = random_su2(rng)
    expected = w.w1 * np.eye(2) + w.w3 * E1 + w.w4 * E2 + w.w2 * E3
    np.testing.assert_allclose(w.matrix, expected, atol=1e-15)


def test_t_point_examples():
    np.testing.assert_allclose(t_point(0.0, 2.3).matrix, np.eye(2))
    np.testing.assert_allclose(t_point(np.pi / 2, 0.0).matrix, [[0, -1], [1, 0]], atol=1e-16)


def test_t_point_matches_exponential():
    rng = np.random.default_rng(4)
    for x, y in rng.uniform(-4, 4, size=(25, 2)):
        expected = matrix_exp(x * (np.cos(y) * E1 + np.sin(y) * E2), method="series")
        np.testing.assert_allclose(t_point(x, y).matrix, expected, atol=1e-12)
        np.testing.assert_allclose(t_point_matrix(x, y), expected, atol=1e-12)


def test_i_conjugate_examples(rng):
    w = SU2Element.normalized([0.3, 0.0, 0.0, 0.0])
    assert i_conjugate(w) == w
    assert i_conjugate(SU2Element(0, 1, 0, 0)) == SU2Element(0, -1, 0, 0)
    for _ in range(100):
        w = random_su2(rng)
        assert i_conjugate(i_conjugate(w)) == w


def test_hopf_p_examples(rng):
    assert hopf_p(IDENTITY).quaternion == pytest.approx(IDENTITY.quaternion)
    for x, y in [(0.3, 1.1), (1.2, -2.0), (0.7, 4.0)]:
        np.testing.assert_allclose(hopf_p(t_point(x, y)).quaternion, t_point(2 * x, y).quaternion, atol=1e-15)
    for _ in range(50):
        w = random_su2(rng)
        p = hopf_p(w)
        assert abs(p.w2) < 1e-15
        v = fiber_element(rng.uniform(0, 2 * np.pi))
        np.testing.assert_allclose(hopf_p(w @ v).quaternion, p.quaternion, atol=1e-14)


def test_hopf_p_separates_off_fiber(rng):
    worst = np.inf
    for _ in range(50):
        w, v = random_su2(rng), random_su2(rng)
        if np.hypot(v.w3, v.w4) < 0.1:
            continue
        worst = min(worst, np.max(np.abs(hopf_p(w @ v).quaternion - hopf_p(w).quaternion)))
    assert worst > 1e-3


def test_cp1_point_on_unit_sphere(rng):
    assert np.linalg.norm(cp1_point(hopf_p(random_su2(rng)))) == pytest.approx(1.0)


def test_conformal_h_check_examples():
    x, y = np.pi / 6, 1.0
    res = conformal_h_check(x, y)
    assert res.ratio1 == pytest.approx(2.0, abs=1e-6)
    assert res.ratio2 == pytest.approx(2.0, abs=1e-6)
    assert res.coset_norms[0] == pytest.approx(1.0, abs=1e-6)
    assert res.image_norms[0] == pytest.approx(2.0, abs=1e-6)
    assert res.coset_norms[1] == pytest.approx(0.5 * abs(np.sin(2 * x)), abs=1e-6)
    assert res.image_norms[1] == pytest.approx(abs(np.sin(2 * x)), abs=1e-6)
    with pytest.raises(ValueError):
        conformal_h_check(0.0, 1.0)
    with pytest.raises(ValueError):
        conformal_h_check(np.pi / 2, 1.0)


def test_su2_log_inverts_exp(rng):
    for _ in range(30):
        w = random_su2(rng)
        a, b, c = su2_log(w)
        np.testing.assert_allclose(matrix_exp(a * E1 + b * E2 + c * E3), w.matrix, atol=1e-13)
    assert su2_log(IDENTITY) == (0.0, 0.0, 0.0)
    minus = SU2Element(-1.0, 0.0, 0.0, 0.0)
    a, b, c = su2_log(minus)
    np.testing.assert_allclose(matrix_exp(a * E1 + b * E2 + c * E3), -np.eye(2), atol=1e-15)


def test_su2_coefficients():
    np.testing.assert_allclose(su2_coefficients(2 * E1 - E2 + 0.5 * E3), (2, -1, 0.5))


def test_f_alg_examples():
    X = random_umn(4, 2, 2.0, seed=3)
    np.testing.assert_allclose(f_alg(1, 0, 0, X), hat(X.X) / np.sqrt(2.0))
    one = validate_umn([[1]])
    for E, coeffs in zip(SU2_BASIS, np.eye(3)):
        np.testing.assert_allclose(f_alg(*coeffs, one), E)


@pytest.mark.parametrize("m,n", [(1, 1), (3, 1), (3, 2), (5, 2)])
def test_f_alg_preserves_brackets(m, n):
    X = random_umn(m, n, 1.7, seed=m * 10 + n)
    for i, j in itertools.product(range(3), repeat=2):
        ei, ej = np.eye(3)[i], np.eye(3)[j]
        bracket = commutator(SU2_BASIS[i], SU2_BASIS[j])
        lhs = f_alg(*su2_coefficients(bracket), X)
        rhs = commutator(f_alg(*ei, X), f_alg(*ej, X))
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_f_alg_vectorized():
    X = random_umn(3, 1, seed=0)
    a = np.array([0.1, 0.2])
    stack = f_alg(a, 0.0, a, X)
    assert stack.shape == (2, 4, 4)
    np.testing.assert_allclose(stack[1], f_alg(0.2, 0.0, 0.2, X))


def test_f_group_examples(rng):
    X = random_umn(4, 2, 1.3, seed=5)
    np.testing.assert_allclose(f_group(IDENTITY, X), np.eye(6), atol=1e-15)
    for theta in [0.3, 1.7, -2.5]:
        # exp(theta Phi) with Phi = -E3 is fiber_element(-theta)
        np.testing.assert_allclose(f_group(fiber_element(-theta), X), fiber_exp(theta, X), atol=1e-12)
    for x, y in rng.uniform(0, 1.5, size=(5, 2)):
        np.testing.assert_allclose(f_group(t_point(x, y), X),
                                   matrix_exp(f_alg(x * np.cos(y), x * np.sin(y), 0.0, X), method="series"),
                                   atol=1e-12)


def test_f_group_is_homomorphism(rng):
    X = random_umn(5, 2, 0.8, seed=9)
    for _ in range(20):
        w, v = random_su2(rng), random_su2(rng)
        np.testing.assert_allclose(f_group(w @ v, X), f_group(w, X) @ f_group(v, X), atol=1e-11)


def test_f_group_fiber_is_block_diagonal(rng):
    X = random_umn(4, 1, seed=2)
    for z in rng.uniform(-np.pi, np.pi, 10):
        U = f_group(fiber_element(z), X)
        assert np.max(np.abs(U[:1, 1:])) < 1e-10 and np.max(np.abs(U[1:, :1])) < 1e-10


def test_fiber_exp_examples():
    X = random_umn(4, 2, seed=1)
    np.testing.assert_allclose(fiber_exp(0.0, X), np.eye(6), atol=1e-15)
    np.testing.assert_allclose(fiber_exp(2 * np.pi, X), np.eye(6), atol=1e-14)
    X1 = validate_umn([[1], [0]])
    np.testing.assert_allclose(fiber_exp(np.pi, X1), np.diag([-1, -1, 1]), atol=1e-15)
    np.testing.assert_allclose(matrix_exp(-np.pi * k_matrix(X1)), np.diag([-1, -1, 1]), atol=1e-14)


def test_fiber_exp_group_law(rng):
    X = random_umn(5, 2, 2.2, seed=6)
    for theta, phi in rng.uniform(-7, 7, size=(10, 2)):
        U = fiber_exp(theta, X)
        assert unitary_check(U, 1e-12)
        np.testing.assert_array_equal(U[:2, :2], np.exp(1j * theta) * np.eye(2))
        np.testing.assert_allclose(U @ fiber_exp(phi, X), fiber_exp(theta + phi, X), atol=1e-12)
        np.testing.assert_allclose(U, matrix_exp(-(theta / X.lam) * k_matrix(X)), atol=1e-10)


def test_conformal_factor_examples():
    X = random_umn(2, 2, seed=0)
    assert conformal_factor(2, 2, X) == pytest.approx(1.0)
    assert conformal_factor(1, 3, random_umn(3, 1, seed=1)) == pytest.approx(np.sqrt(0.5))
    X = random_umn(3, 2, 1.9, seed=2)
    alpha = conformal_factor(2, 3, X)
    assert max(abs(v - alpha) for v in basis_image_norms(X)) < 1e-12
    with pytest.raises(ValueError):
        conformal_factor(1, 3, X)


def test_conformal_factor_detects_mismatch():
    bad = UmnElement(np.array([[1.0], [0.0]]), 2.0)  # wrong lam on purpose
    with pytest.raises(ArithmeticError):
        conformal_factor(1, 2, bad)
