import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from ncharm.errors import DomainError
from ncharm.rotations import EulerZYZ, compose, random_rotation, random_sphere_point
from ncharm.special_functions import (assoc_legendre, legendre, rotate_sph_harm_vector, sph_harm,
                                      sph_harm_vector, sph_harm_vector_at, wigner_D, wigner_D_angles,
                                      wigner_d, wigner_d_closed, wigner_d_recurrence, wigner_d_table)

betas = st.floats(0.0, np.pi, allow_nan=False)


def test_legendre_values():
    assert legendre(0, 0.3) == 1.0
    assert legendre(1, 0.3) == pytest.approx(0.3, abs=1e-15)
    assert legendre(2, 0.5) == pytest.approx(-0.125, abs=1e-15)


def test_assoc_legendre_values():
    assert assoc_legendre(2, 0, 0.5) == pytest.approx(-0.125, abs=1e-15)
    assert assoc_legendre(1, 1, 0.0) == pytest.approx(-1.0, abs=1e-15)


@pytest.mark.parametrize("l", [0, 1, 2, 5, 10, 16, 17, 25, 40])
def test_assoc_legendre_matches_scipy(l):
    x = np.linspace(-1, 1, 41)
    for m in range(l + 1):
        ref = oracles.assoc_legendre(l, m, x)
        scale = max(1.0, np.abs(ref).max())
        assert np.abs(assoc_legendre(l, m, x) - ref).max() <= 1e-12 * scale


def test_assoc_legendre_from_wigner_d():
    for l in range(9):
        for m in range(l + 1):
            x = np.linspace(-0.95, 0.95, 9)
            d = wigner_d(l, np.arccos(x))[..., m + l, l]
            p = assoc_legendre(l, m, x)
            ref = math.sqrt(math.factorial(l + m) / math.factorial(l - m)) * d
            assert np.abs(p - ref).max() <= 1e-12 * max(1.0, np.abs(p).max())


def test_legendre_domain_errors():
    with pytest.raises(DomainError):
        assoc_legendre(2, 3, 0.1)
    with pytest.raises(DomainError):
        assoc_legendre(2, 1, 1.5)
    with pytest.raises(DomainError):
        legendre(-1, 0.0)


def test_wigner_d_identity_at_zero():
    for l in range(6):
        np.testing.assert_array_almost_equal(wigner_d(l, 0.0), np.eye(2 * l + 1), decimal=15)


def test_wigner_d_l1_center():
    assert wigner_d(1, np.pi / 3)[1, 1] == pytest.approx(0.5, abs=1e-15)
    b = 0.7
    assert wigner_d(1, b)[1, 1] == pytest.approx(np.cos(b), abs=1e-15)


@settings(max_examples=30, deadline=None)
@given(betas)
def test_wigner_d_matches_expm(beta):
    for l in (0, 1, 2, 5, 9, 16, 20):
        assert np.abs(wigner_d(l, beta) - oracles.wigner_d_expm(l, beta)).max() <= 1e-12


@settings(max_examples=30, deadline=None)
@given(betas)
def test_closed_form_agrees_with_recurrence(beta):
    for l in range(17):
        a, b = wigner_d_closed(l, beta), wigner_d_recurrence(l, beta)
        assert np.abs(a - b).max() <= 1e-12 * max(1.0, np.abs(b).max())


def test_wigner_d_table_consistent(rng):
    beta = rng.uniform(0, np.pi, 7)
    tab = wigner_d_table(20, beta)
    for l in (0, 3, 16, 17, 20):
        np.testing.assert_allclose(tab[l], wigner_d(l, beta), atol=1e-14)


def test_wigner_d_symmetries(rng):
    for beta in rng.uniform(0, np.pi, 5):
        for l in (1, 4, 7):
            d = wigner_d(l, beta)
            m = np.arange(-l, l + 1)
            sign = (-1.0) ** (m[:, None] - m[None, :])
            np.testing.assert_allclose(d, sign * d[::-1, ::-1], atol=1e-14)
            np.testing.assert_allclose(d @ d.T, np.eye(2 * l + 1), atol=1e-13)
            np.testing.assert_allclose(wigner_d(l, -beta), d.T, atol=1e-14)


def test_wigner_d_negative_degree():
    with pytest.raises(DomainError):
        wigner_d(-1, 0.1)


def test_wigner_D_matches_expm(rng):
    for _ in range(20):
        g = random_rotation(rng)
        for l in (0, 1, 3, 8):
            ref = oracles.wigner_D_expm(l, g.alpha, g.beta, g.gamma)
            assert np.abs(wigner_D(l, g) - ref).max() <= 1e-12


def test_wigner_D_identity_and_z_rotation():
    for l in range(5):
        np.testing.assert_allclose(wigner_D(l, EulerZYZ()), np.eye(2 * l + 1), atol=1e-15)
        a = 0.9
        m = np.arange(-l, l + 1)
        np.testing.assert_allclose(wigner_D(l, EulerZYZ(a, 0, 0)), np.diag(np.exp(-1j * a * m)), atol=1e-15)


def test_wigner_D_homomorphism_and_unitarity(rng):
    for _ in range(50):
        g1, g2 = random_rotation(rng), random_rotation(rng)
        for l in range(9):
            D1, D2 = wigner_D(l, g1), wigner_D(l, g2)
            assert np.abs(wigner_D(l, compose(g1, g2)) - D1 @ D2).max() <= 1e-10
            assert np.abs(D1 @ D1.conj().T - np.eye(2 * l + 1)).max() <= 1e-12


def test_wigner_D_angles_broadcasts(rng):
    a, b, c = rng.uniform(0, 2, (3, 4, 5))
    D = wigner_D_angles(2, a, b, c)
    assert D.shape == (4, 5, 5, 5)
    np.testing.assert_allclose(D[1, 2], wigner_D(2, EulerZYZ(a[1, 2], b[1, 2], c[1, 2])), atol=1e-15)


def test_sph_harm_values():
    assert sph_harm(0, 0, 0.3, 1.0) == pytest.approx(1 / (2 * np.sqrt(np.pi)), abs=1e-15)
    assert sph_harm(1, 0, 0.0, 0.0) == pytest.approx(np.sqrt(3 / (4 * np.pi)), abs=1e-15)


def test_sph_harm_matches_scipy(rng):
    T = rng.uniform(0, np.pi, 50)
    P = rng.uniform(0, 2 * np.pi, 50)
    for l in range(12):
        for m in range(-l, l + 1):
            assert np.abs(sph_harm(l, m, T, P) - oracles.ylm(l, m, T, P)).max() <= 1e-12


def test_sph_harm_domain():
    with pytest.raises(DomainError):
        sph_harm(2, 3, 0.1, 0.1)


def test_wigner_column_is_conjugate_harmonic(rng):
    for _ in range(20):
        g = random_rotation(rng)
        for l in range(9):
            Y = sph_harm_vector(l, g.beta, g.alpha)
            ref = np.sqrt(4 * np.pi / (2 * l + 1)) * np.conj(Y)
            assert np.abs(wigner_D(l, g)[:, l] - ref).max() <= 1e-12


def test_rotated_harmonics_two_paths(rng):
    for _ in range(100):
        g, x = random_rotation(rng), random_sphere_point(rng)
        for l in range(9):
            assert np.abs(rotate_sph_harm_vector(l, g, x) - sph_harm_vector_at(l, g, x)).max() <= 1e-10


def test_rotated_harmonics_identity(rng):
    x = random_sphere_point(rng)
    np.testing.assert_allclose(rotate_sph_harm_vector(3, EulerZYZ(), x), sph_harm_vector(3, x.theta, x.phi),
                               atol=1e-15)


def test_rotated_harmonics_z_phase(rng):
    x = random_sphere_point(rng)
    a = 1.3
    l = 4
    m = np.arange(-l, l + 1)
    np.testing.assert_allclose(rotate_sph_harm_vector(l, EulerZYZ(a, 0, 0), x),
                               np.exp(1j * m * a) * sph_harm_vector(l, x.theta, x.phi), atol=1e-14)


def test_harmonics_accurate_near_poles():
    T = np.concatenate([np.linspace(1e-8, 1e-2, 20), np.pi - np.linspace(1e-8, 1e-2, 20)])
    P = np.linspace(0, 2 * np.pi, 40)
    for l in (3, 11, 16, 20):
        for m in range(-l, l + 1):
            assert np.abs(sph_harm(l, m, T, P) - oracles.ylm(l, m, T, P)).max() <= 1e-13


def test_harmonic_vector_matches_scalar(rng):
    T, P = rng.uniform(0, np.pi, 6), rng.uniform(0, 2 * np.pi, 6)
    for l in (0, 2, 16, 18):
        vec = sph_harm_vector(l, T, P)
        for m in range(-l, l + 1):
            np.testing.assert_allclose(vec[:, m + l], sph_harm(l, m, T, P), atol=1e-14)
