import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from ncharm.rotations import (NORTH_POLE, EulerZYZ, SpherePoint, act_on_point, check_rotation_matrix,
                              compose, euler_to_matrix, geodesic_distance, inverse, make_so3_grid,
                              make_sphere_grid, matrix_to_euler, nearest_grid_index, random_rotation,
                              random_sphere_point)
from ncharm.special_functions import sph_harm

angles = st.floats(-10.0, 10.0, allow_nan=False)


def test_identity_matrix():
    assert np.array_equal(euler_to_matrix(EulerZYZ(0, 0, 0)), np.eye(3))


def test_quarter_turn_about_y_sends_z_to_x():
    R = euler_to_matrix(EulerZYZ(0, np.pi / 2, 0))
    np.testing.assert_allclose(R @ [0, 0, 1], [1, 0, 0], atol=1e-15)


def test_half_turn_about_z():
    R = euler_to_matrix(EulerZYZ(np.pi, 0, 0))
    np.testing.assert_allclose(R, np.diag([-1.0, -1.0, 1.0]), atol=1e-15)


@settings(max_examples=200, deadline=None)
@given(angles, angles, angles)
def test_matrix_matches_scipy(a, b, c):
    np.testing.assert_allclose(euler_to_matrix(EulerZYZ(a, b, c)), oracles.euler_matrix(a, b, c), atol=1e-13)


def test_canonical_ranges():
    g = EulerZYZ(-1.0, -0.5, 7.0)
    assert 0 <= g.alpha < 2 * np.pi and 0 <= g.beta <= np.pi and 0 <= g.gamma < 2 * np.pi
    np.testing.assert_allclose(euler_to_matrix(g), oracles.euler_matrix(-1.0, -0.5, 7.0), atol=1e-14)


def test_matrix_to_euler_identity():
    assert matrix_to_euler(np.eye(3)).as_tuple() == (0.0, 0.0, 0.0)


def test_round_trip_random(rng):
    err = 0.0
    for _ in range(1000):
        R = oracles.random_matrix(rng)
        err = max(err, np.abs(euler_to_matrix(matrix_to_euler(R)) - R).max())
    assert err <= 1e-10


@pytest.mark.parametrize("beta", [0.0, 1e-13, 1e-9, np.pi - 1e-9, np.pi - 1e-13, np.pi])
def test_round_trip_near_gimbal(rng, beta):
    for _ in range(50):
        a, c = rng.uniform(0, 2 * np.pi, 2)
        R = oracles.euler_matrix(a, beta, c)
        assert np.abs(euler_to_matrix(matrix_to_euler(R)) - R).max() <= 1e-10


def test_z_rotations_merge_with_gamma_zero():
    g = matrix_to_euler(oracles.euler_matrix(1.0, 0, 0) @ oracles.euler_matrix(0.5, 0, 0))
    np.testing.assert_allclose(g.as_tuple(), (1.5, 0.0, 0.0), atol=1e-14)


def test_compose_z_rotations():
    g = compose(EulerZYZ(4.0, 0, 0), EulerZYZ(3.0, 0, 0))
    np.testing.assert_allclose(g.as_tuple(), (7.0 - 2 * np.pi, 0, 0), atol=1e-14)


def test_inverse_identity():
    assert inverse(EulerZYZ()).as_tuple() == (0.0, 0.0, 0.0)


def test_compose_and_inverse(rng):
    for _ in range(100):
        g1, g2, g3 = (random_rotation(rng) for _ in range(3))
        lhs = euler_to_matrix(compose(compose(g1, g2), g3))
        rhs = euler_to_matrix(compose(g1, compose(g2, g3)))
        assert np.abs(lhs - rhs).max() <= 1e-10
        np.testing.assert_allclose(euler_to_matrix(compose(g1, g2)),
                                   euler_to_matrix(g1) @ euler_to_matrix(g2), atol=1e-12)
        np.testing.assert_allclose(euler_to_matrix(compose(g1, inverse(g1))), np.eye(3), atol=1e-12)


def test_check_rotation_matrix_rejects():
    with pytest.raises(ValueError):
        check_rotation_matrix(np.diag([1.0, 1.0, -1.0]))
    with pytest.raises(ValueError):
        check_rotation_matrix(2 * np.eye(3))


def test_act_on_point_identity(rng):
    x = random_sphere_point(rng)
    y = act_on_point(EulerZYZ(), x)
    assert abs(y.theta - x.theta) < 1e-14 and abs(y.phi - x.phi) < 1e-14


def test_act_on_north_pole_gives_coset_coordinates():
    y = act_on_point(EulerZYZ(0.8, 1.1, 0.0), NORTH_POLE)
    np.testing.assert_allclose((y.theta, y.phi), (1.1, 0.8), atol=1e-14)


@pytest.mark.parametrize("gamma", [0.3, 2.0, 5.9])
def test_stabilizer_of_north_pole(gamma):
    y = act_on_point(EulerZYZ(0, 0, gamma), NORTH_POLE)
    assert y.theta < 1e-15


def test_sphere_point_validation():
    with pytest.raises(ValueError):
        SpherePoint(4.0, 0.0)
    assert SpherePoint(0.1, -0.5).phi == pytest.approx(2 * np.pi - 0.5)


def test_random_rotation_is_haar(rng):
    # E[trace R] = 0 and E[R] = 0 for Haar measure
    Rs = np.stack([euler_to_matrix(random_rotation(rng)) for _ in range(4000)])
    assert np.abs(Rs.mean(axis=0)).max() < 0.05


def test_geodesic_distance():
    assert geodesic_distance(EulerZYZ(), EulerZYZ(0.3, 0, 0)) == pytest.approx(0.3)


def test_sphere_grid_b1():
    g = make_sphere_grid(1)
    np.testing.assert_allclose(g.theta, [np.pi / 4, 3 * np.pi / 4])
    np.testing.assert_allclose(g.weights, [1.0, 1.0], atol=1e-15)


def test_sphere_grid_quadrature_b8():
    g = make_sphere_grid(8)
    T, P = g.mesh()
    y00 = sph_harm(0, 0, T, P)
    assert abs(g.integrate(y00 * np.conj(y00)) - 1.0) <= 1e-12
    assert abs(g.integrate(sph_harm(3, 0, T, P) * np.conj(sph_harm(2, 0, T, P)))) <= 1e-12


@pytest.mark.parametrize("B", [1, 2, 5, 8])
def test_sphere_grid_exact_up_to_degree(B):
    g = make_sphere_grid(B)
    T, P = g.mesh()
    for l in range(2 * B):
        exact = 2 / (l + 1) if l % 2 == 0 else 0.0
        assert abs(np.sum(g.weights * (np.cos(g.theta) ** l)) - exact) < 1e-13


def test_grid_rejects_bad_bandwidth():
    for bad in (0, -1, 2.5):
        with pytest.raises(ValueError):
            make_sphere_grid(bad)
        with pytest.raises(ValueError):
            make_so3_grid(bad)


def test_so3_grid_mass():
    g = make_so3_grid(4)
    assert abs(g.integrate(np.ones(g.shape)) - 1.0) < 1e-14


def test_nearest_grid_index_of_node():
    grid = make_so3_grid(4)
    assert nearest_grid_index(grid.node(3, 2, 7), grid) == (3, 2, 7)
