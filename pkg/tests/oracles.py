"""Independent reference implementations used only by the tests.

Nothing here calls into ncharm: rotations come from scipy, Wigner matrices from
matrix exponentials of angular momentum generators, harmonics and Legendre
functions from scipy.special, Clebsch-Gordan coefficients from sympy, and
integrals from Gauss-Legendre rules rather than the equiangular grid.
"""
from __future__ import annotations

import functools

import numpy as np
from scipy.linalg import expm
from scipy.spatial.transform import Rotation
from scipy.special import lpmv, sph_harm_y


def euler_matrix(alpha, beta, gamma) -> np.ndarray:
    """``Rz(alpha) Ry(beta) Rz(gamma)`` (intrinsic ZYZ)."""
    return Rotation.from_euler("ZYZ", [alpha, beta, gamma]).as_matrix()


def random_matrix(rng) -> np.ndarray:
    return Rotation.random(random_state=rng).as_matrix()


@functools.lru_cache(maxsize=None)
def angular_momentum(l: int) -> tuple[np.ndarray, np.ndarray]:
    """``(Jz, Jy)`` in the basis ``m = -l..l``."""
    m = np.arange(-l, l + 1, dtype=float)
    Jz = np.diag(m)
    Jp = np.zeros((2 * l + 1, 2 * l + 1))
    for i, mm in enumerate(m[:-1]):
        Jp[i + 1, i] = np.sqrt((l - mm) * (l + mm + 1))
    Jy = (Jp - Jp.T) / 2j
    return Jz, Jy


def wigner_d_expm(l: int, beta: float) -> np.ndarray:
    _, Jy = angular_momentum(l)
    return expm(-1j * beta * Jy).real


def wigner_D_expm(l: int, alpha: float, beta: float, gamma: float) -> np.ndarray:
    Jz, Jy = angular_momentum(l)
    return expm(-1j * alpha * Jz) @ expm(-1j * beta * Jy) @ expm(-1j * gamma * Jz)


def ylm(l: int, m: int, theta, phi):
    return sph_harm_y(l, m, theta, phi)


def assoc_legendre(l: int, m: int, x):
    """Includes the Condon-Shortley phase."""
    return lpmv(m, l, x)


def cg(l1: int, m1: int, l2: int, m2: int, l: int, m: int) -> float:
    from sympy.physics.quantum.cg import CG
    return float(CG(l1, m1, l2, m2, l, m).doit())


def sphere_rule(n: int):
    """Gauss-Legendre in cos(theta) times uniform phi; exact for degree < n.

    Returns flattened ``theta, phi, weights`` for the area measure.
    """
    x, w = np.polynomial.legendre.leggauss(n)
    phi = 2 * np.pi * np.arange(2 * n) / (2 * n)
    T, P = np.meshgrid(np.arccos(x), phi, indexing="ij")
    W = np.broadcast_to((w * np.pi / n)[:, None], T.shape)
    return T.ravel(), P.ravel(), W.ravel()


def so3_rule(n: int):
    """Product rule on SO(3) for normalized Haar measure; exact for degree < n."""
    x, w = np.polynomial.legendre.leggauss(n)
    ang = 2 * np.pi * np.arange(2 * n) / (2 * n)
    A, Bt, C = np.meshgrid(ang, np.arccos(x), ang, indexing="ij")
    W = np.broadcast_to(w[None, :, None], A.shape) / (2 * (2 * n) ** 2)
    return A.ravel(), Bt.ravel(), C.ravel(), W.ravel()


def matrices_to_angles(R: np.ndarray):
    """ZYZ angles of a stack of rotation matrices, via scipy."""
    ang = Rotation.from_matrix(R.reshape(-1, 3, 3)).as_euler("ZYZ")
    return ang[:, 0], ang[:, 1], ang[:, 2]


def vectors_to_sphere(v: np.ndarray):
    return np.arctan2(np.hypot(v[..., 0], v[..., 1]), v[..., 2]), np.arctan2(v[..., 1], v[..., 0])


def sphere_vectors(theta, phi) -> np.ndarray:
    return np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)


def synth_sphere(coeffs: dict, theta, phi):
    """``sum c_lm Y_lm`` with scipy harmonics; coeffs maps (l, m) to value."""
    out = np.zeros(np.shape(theta), dtype=complex)
    for (l, m), c in coeffs.items():
        out = out + c * ylm(l, m, theta, phi)
    return out
