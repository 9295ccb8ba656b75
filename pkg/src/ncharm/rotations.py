"""Rotations in ZYZ Euler angles, points on the sphere and equiangular grids.

A rotation ``(alpha, beta, gamma)`` is the matrix ``Rz(alpha) @ Ry(beta) @ Rz(gamma)``
acting on column vectors.  Points on the sphere are ``(theta, phi)`` with theta the
colatitude; the north pole is ``theta = 0``.  A rotation ``(alpha, beta, 0)`` maps the
north pole to ``(theta=beta, phi=alpha)``, so S^2 = SO(3)/SO(2) with the stabilizer of
the north pole being the z-rotations.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NonOrthogonalInput

TWO_PI = 2.0 * np.pi
ANGLE_TOL = 1e-10
# below this |sin(beta)| the rotation is treated as a pure z-rotation (gamma := 0)
_GIMBAL_TOL = 1e-12


def _wrap(angle: float) -> float:
    a = float(np.mod(angle, TWO_PI))
    return 0.0 if a >= TWO_PI else a


def _canonical(alpha: float, beta: float, gamma: float) -> tuple[float, float, float]:
    beta = float(np.mod(beta, TWO_PI))
    if beta > np.pi:
        # Ry(-b) = Rz(pi) Ry(b) Rz(pi)
        beta = TWO_PI - beta
        alpha += np.pi
        gamma += np.pi
    return _wrap(alpha), beta, _wrap(gamma)


@dataclass(frozen=True)
class EulerZYZ:
    """ZYZ Euler angles; any real triple is reduced into the canonical ranges."""

    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        a, b, c = _canonical(self.alpha, self.beta, self.gamma)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "gamma", c)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)

    def matrix(self) -> np.ndarray:
        return euler_to_matrix(self)

    @classmethod
    def identity(cls) -> "EulerZYZ":
        return cls(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class SpherePoint:
    theta: float
    phi: float

    def __post_init__(self):
        theta = float(self.theta)
        if theta < -ANGLE_TOL or theta > np.pi + ANGLE_TOL:
            raise ValueError(f"colatitude {theta} outside [0, pi]")
        object.__setattr__(self, "theta", min(max(theta, 0.0), np.pi))
        object.__setattr__(self, "phi", _wrap(self.phi))

    def vector(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)])

    @classmethod
    def from_vector(cls, v) -> "SpherePoint":
        x, y, z = (float(c) for c in v)
        return cls(np.arctan2(np.hypot(x, y), z), np.arctan2(y, x))


NORTH_POLE = SpherePoint(0.0, 0.0)


def rot_z(angle) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rot_y(angle) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def euler_to_matrix(e: EulerZYZ) -> np.ndarray:
    return rot_z(e.alpha) @ rot_y(e.beta) @ rot_z(e.gamma)


def euler_angles_to_matrices(alpha, beta, gamma) -> np.ndarray:
    """Vectorized ``Rz(alpha) Ry(beta) Rz(gamma)``; returns shape ``(..., 3, 3)``."""
    alpha, beta, gamma = np.broadcast_arrays(
        np.asarray(alpha, float), np.asarray(beta, float), np.asarray(gamma, float))
    ca, sa = np.cos(alpha), np.sin(alpha)
    cb, sb = np.cos(beta), np.sin(beta)
    cc, sc = np.cos(gamma), np.sin(gamma)
    R = np.empty(alpha.shape + (3, 3))
    R[..., 0, 0] = ca * cb * cc - sa * sc
    R[..., 0, 1] = -ca * cb * sc - sa * cc
    R[..., 0, 2] = ca * sb
    R[..., 1, 0] = sa * cb * cc + ca * sc
    R[..., 1, 1] = -sa * cb * sc + ca * cc
    R[..., 1, 2] = sa * sb
    R[..., 2, 0] = -sb * cc
    R[..., 2, 1] = sb * sc
    R[..., 2, 2] = cb
    return R


def matrices_to_euler_angles(R) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized inverse of :func:`euler_angles_to_matrices` (no validation).

    alpha comes from the third column.  gamma comes from whichever of alpha+gamma
    (read where the upper 2x2 block is weighted by 1+cos b) or alpha-gamma
    (weighted by 1-cos b) is well conditioned, which keeps the round trip
    accurate right up to the gimbal configurations.
    """
    R = np.asarray(R, float)
    beta = np.arctan2(np.hypot(R[..., 0, 2], R[..., 1, 2]), R[..., 2, 2])
    s = np.arctan2(R[..., 1, 0] - R[..., 0, 1], R[..., 0, 0] + R[..., 1, 1])
    d = np.arctan2(-(R[..., 1, 0] + R[..., 0, 1]), R[..., 1, 1] - R[..., 0, 0])
    alpha = np.arctan2(R[..., 1, 2], R[..., 0, 2])
    gamma = np.where(R[..., 2, 2] >= 0, s - alpha, alpha - d)
    sb = np.sin(beta)
    north = (sb < _GIMBAL_TOL) & (beta < np.pi / 2)
    south = (sb < _GIMBAL_TOL) & (beta >= np.pi / 2)
    alpha = np.where(north, s, np.where(south, d, alpha))
    gamma = np.where(north | south, 0.0, gamma)
    beta = np.where(north, 0.0, np.where(south, np.pi, beta))
    alpha = np.mod(alpha, TWO_PI)
    gamma = np.mod(gamma, TWO_PI)
    alpha = np.where(alpha >= TWO_PI, 0.0, alpha)
    gamma = np.where(gamma >= TWO_PI, 0.0, gamma)
    return alpha, beta, gamma


def check_rotation_matrix(R, tol: float = 1e-8) -> np.ndarray:
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3) or not np.all(np.isfinite(R)):
        raise NonOrthogonalInput(f"expected a finite 3x3 matrix, got shape {R.shape}")
    ortho = np.abs(R.T @ R - np.eye(3)).max()
    det = np.linalg.det(R)
    if ortho > tol or abs(det - 1.0) > tol:
        raise NonOrthogonalInput(
            f"not a rotation: |R^T R - I| = {ortho:.3g}, det = {det:.12g}")
    return R


def matrix_to_euler(R) -> EulerZYZ:
    R = check_rotation_matrix(R)
    a, b, c = matrices_to_euler_angles(R)
    return EulerZYZ(float(a), float(b), float(c))


def compose(g1: EulerZYZ, g2: EulerZYZ) -> EulerZYZ:
    """The rotation ``g1 g2`` (apply g2 first)."""
    return matrix_to_euler(euler_to_matrix(g1) @ euler_to_matrix(g2))


def inverse(g: EulerZYZ) -> EulerZYZ:
    return matrix_to_euler(euler_to_matrix(g).T)


def act_on_point(g: EulerZYZ, x: SpherePoint) -> SpherePoint:
    return SpherePoint.from_vector(euler_to_matrix(g) @ x.vector())


def random_rotation(rng: np.random.Generator) -> EulerZYZ:
    """Haar-distributed random rotation."""
    q = rng.standard_normal(4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    R = np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
        [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
        [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
    ])
    return matrix_to_euler(R)


def random_sphere_point(rng: np.random.Generator) -> SpherePoint:
    v = rng.standard_normal(3)
    return SpherePoint.from_vector(v / np.linalg.norm(v))


def geodesic_distance(g1: EulerZYZ, g2: EulerZYZ) -> float:
    """Rotation angle of ``g1^-1 g2`` in radians."""
    R = euler_to_matrix(g1).T @ euler_to_matrix(g2)
    return float(np.arccos(np.clip((np.trace(R) - 1.0) / 2.0, -1.0, 1.0)))


# ---------------------------------------------------------------------------
# Equiangular (Driscoll-Healy) sampling

def grid_colatitudes(B: int) -> np.ndarray:
    return np.pi * (2 * np.arange(2 * B) + 1) / (4 * B)


def grid_longitudes(B: int) -> np.ndarray:
    return np.pi * np.arange(2 * B) / B


@lru_cache(maxsize=None)
def _dh_weights(B: int) -> np.ndarray:
    theta = grid_colatitudes(B)
    k = np.arange(B)
    w = (2.0 / B) * np.sin(theta) * (
        np.sin(np.outer(theta, 2 * k + 1)) / (2 * k + 1)).sum(axis=1)
    w.setflags(write=False)
    return w


def quadrature_weights(B: int) -> np.ndarray:
    """Colatitude weights; they sum to 2, approximating the integral of sin(theta)."""
    if B < 1:
        raise ValueError("bandwidth must be >= 1")
    return _dh_weights(int(B))


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """2B x 2B equiangular grid; node ``(j, k)`` is ``(theta[j], phi[k])``.

    ``sum_jk weights[j] * (pi/B) * f(theta_j, phi_k)`` integrates f against the
    area measure (total 4*pi), exactly for band-limited products of degree < 2B.
    """

    bandwidth: int
    theta: np.ndarray
    phi: np.ndarray
    weights: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return (2 * self.bandwidth, 2 * self.bandwidth)

    @property
    def phi_step(self) -> float:
        return np.pi / self.bandwidth

    def node(self, j: int, k: int) -> SpherePoint:
        return SpherePoint(self.theta[j], self.phi[k])

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.theta, self.phi, indexing="ij")

    def integrate(self, values) -> complex:
        values = np.asarray(values)
        return self.phi_step * np.einsum("j,jk->", self.weights, values)


def make_sphere_grid(B: int) -> SphereGrid:
    if int(B) != B or B < 1:
        raise ValueError(f"bandwidth must be a positive integer, got {B!r}")
    B = int(B)
    return SphereGrid(B, grid_colatitudes(B), grid_longitudes(B), quadrature_weights(B))


@dataclass(frozen=True, eq=False)
class SO3Grid:
    """2B x 2B x 2B grid over ``(alpha_j, beta_k, gamma_l)``.

    :meth:`integrate` uses the normalized Haar measure (total mass 1).
    """

    bandwidth: int
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    weights: np.ndarray

    @property
    def shape(self) -> tuple[int, int, int]:
        n = 2 * self.bandwidth
        return (n, n, n)

    def node(self, j: int, k: int, l: int) -> EulerZYZ:
        return EulerZYZ(self.alpha[j], self.beta[k], self.gamma[l])

    def mesh(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return np.meshgrid(self.alpha, self.beta, self.gamma, indexing="ij")

    def integrate(self, values) -> complex:
        values = np.asarray(values)
        return np.einsum("k,jkl->", self.weights, values) / (8.0 * self.bandwidth ** 2)


def make_so3_grid(B: int) -> SO3Grid:
    if int(B) != B or B < 1:
        raise ValueError(f"bandwidth must be a positive integer, got {B!r}")
    B = int(B)
    a = grid_longitudes(B)
    return SO3Grid(B, a, grid_colatitudes(B), a.copy(), quadrature_weights(B))


def nearest_grid_index(g: EulerZYZ, grid: SO3Grid) -> tuple[int, int, int]:
    """Grid node with the smallest geodesic distance to ``g``."""
    A, Bt, C = grid.mesh()
    R = euler_angles_to_matrices(A, Bt, C)
    G = euler_to_matrix(g)
    tr = np.einsum("...ij,ij->...", R, G)
    return tuple(int(i) for i in np.unravel_index(np.argmax(tr), tr.shape))
