"""Spectral convolution and correlation, Clebsch-Gordan products, steerable kernels.

Operations on spectra follow the measures in :mod:`ncharm.spectral`:

* ``spherical_correlate``: ``c(g) = int_{S^2} k(g^-1 x) f(x) dx`` (area measure).
* ``spherical_convolve``: ``(f * k)(x) = int_{SO(3)} f(g nu) k(g^-1 x) dg`` with the
  unnormalized measure ``d alpha sin(beta) d beta d gamma`` (total mass 8 pi^2).
* ``so3_convolve``: ``(f * k)(g) = int f(u) k(u^-1 g) du`` (normalized Haar).
* ``so3_correlate``: ``(f * k)(g) = int f(u) k(g^-1 u) du`` (normalized Haar).

Left translation is ``(lambda_g f)(x) = f(g^-1 x)`` throughout; every operation
above commutes with it in its first argument.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import BandwidthMismatch, DegreeOutOfRange, LengthMismatch
from .rotations import EulerZYZ, SpherePoint, act_on_point, make_so3_grid, random_rotation, random_sphere_point
from .spectral import SO3Spectrum, SO3Signal, SphSpectrum, so3_ft_inverse
from .special_functions import sph_harm_vector, wigner_D


def _same_lmax(a, b) -> int:
    if a.lmax != b.lmax:
        raise BandwidthMismatch(f"spectra have lmax {a.lmax} and {b.lmax}")
    return a.lmax


# ---------------------------------------------------------------------------
# convolution theorems

def spherical_correlate(f: SphSpectrum, k: SphSpectrum) -> SO3Spectrum:
    """Spectrum of ``g -> int k(g^-1 x) f(x) dx``.

    Block l has entries ``k_lm (-1)^n f_{l,-n} / (2l+1)``; for real f this is the
    outer product ``k_l conj(f_l)^T / (2l+1)``.
    """
    L = _same_lmax(f, k)
    blocks = []
    for l in range(L):
        n = np.arange(-l, l + 1)
        fl = ((-1.0) ** n) * f.degree(l)[::-1]
        blocks.append(np.outer(k.degree(l), fl) / (2 * l + 1))
    return SO3Spectrum(L, tuple(blocks))


def spherical_convolve(f: SphSpectrum, k: SphSpectrum) -> SphSpectrum:
    """Coefficient (l, m) is ``2 pi sqrt(4 pi/(2l+1)) f_lm k_l0``.

    Only the zonal part of k contributes.
    """
    L = _same_lmax(f, k)
    out = []
    for l in range(L):
        c = 2 * np.pi * np.sqrt(4 * np.pi / (2 * l + 1)) * k[l, 0]
        out.append(c * f.degree(l))
    return SphSpectrum.from_degrees(out)


def so3_convolve(f: SO3Spectrum, k: SO3Spectrum) -> SO3Spectrum:
    """Block l is ``k_l f_l``."""
    L = _same_lmax(f, k)
    return SO3Spectrum(L, tuple(kb @ fb for fb, kb in zip(f.blocks, k.blocks)))


def so3_correlate(f: SO3Spectrum, k: SO3Spectrum) -> SO3Spectrum:
    """Block l is ``k_l^* f_l``.  Valid when k is real in the spatial domain."""
    L = _same_lmax(f, k)
    return SO3Spectrum(L, tuple(kb.conj().T @ fb for fb, kb in zip(f.blocks, k.blocks)))


@dataclass(frozen=True)
class CorrelationPeak:
    rotation: EulerZYZ
    index: tuple[int, int, int]
    value: float


def correlation_peak(c: SO3Spectrum | SO3Signal, B: int | None = None) -> CorrelationPeak:
    """Grid argmax of the real part of a correlation (no sub-grid refinement)."""
    sig = so3_ft_inverse(c, B) if isinstance(c, SO3Spectrum) else c
    vals = sig.samples.real
    idx = np.unravel_index(int(np.argmax(vals)), vals.shape)
    g = make_so3_grid(sig.bandwidth).node(*idx)
    return CorrelationPeak(g, tuple(int(i) for i in idx), float(vals[idx]))


# ---------------------------------------------------------------------------
# Clebsch-Gordan

@dataclass(frozen=True, eq=False)
class CGTable:
    """Real orthogonal C with ``C^T (D_l1 (x) D_l2) C = (+)_l D_l``.

    Rows use the Kronecker index ``(m1 + l1)(2 l2 + 1) + (m2 + l2)``; columns are
    grouped by output degree in ascending order, each group ordered m = -l..l.
    """

    l1: int
    l2: int
    C: np.ndarray

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(range(abs(self.l1 - self.l2), self.l1 + self.l2 + 1))

    def block_slice(self, l: int) -> slice:
        if l not in self.degrees:
            raise DegreeOutOfRange(f"degree {l} not in {self.l1} x {self.l2}")
        lo = abs(self.l1 - self.l2)
        start = l * l - lo * lo
        return slice(start, start + 2 * l + 1)

    def block(self, l: int) -> np.ndarray:
        return self.C[:, self.block_slice(l)]

    def coefficient(self, m1: int, m2: int, l: int, m: int) -> float:
        """``<l1 m1; l2 m2 | l m>``."""
        row = (m1 + self.l1) * (2 * self.l2 + 1) + (m2 + self.l2)
        return float(self.block(l)[row, m + l])


def _lowering(l: int) -> np.ndarray:
    """J_- on the basis m = -l..l: ``J_- |l,m> = sqrt((l+m)(l-m+1)) |l,m-1>``."""
    m = np.arange(-l, l + 1)
    out = np.zeros((2 * l + 1, 2 * l + 1))
    for i in range(1, 2 * l + 1):
        out[i - 1, i] = np.sqrt((l + m[i]) * (l - m[i] + 1))
    return out


@lru_cache(maxsize=None)
def _cg_matrix(l1: int, l2: int) -> np.ndarray:
    d1, d2 = 2 * l1 + 1, 2 * l2 + 1
    Jm = np.kron(_lowering(l1), np.eye(d2)) + np.kron(np.eye(d1), _lowering(l2))
    m1 = np.repeat(np.arange(-l1, l1 + 1), d2)
    m2 = np.tile(np.arange(-l2, l2 + 1), d1)
    M = m1 + m2
    states = {}  # (l, m) -> vector
    for L in range(l1 + l2, abs(l1 - l2) - 1, -1):
        # highest weight: the M = L vector orthogonal to all higher multiplets,
        # seeded at m1 = l1 so that its coefficient comes out positive
        v = np.zeros(d1 * d2)
        v[(m1 == l1) & (M == L)] = 1.0
        for (_, m), u in states.items():
            if m == L:
                v -= (u @ v) * u
        v /= np.linalg.norm(v)
        states[(L, L)] = v
        for m in range(L, -L, -1):
            w = Jm @ states[(L, m)]
            # re-orthogonalize against higher multiplets to stop rounding drift
            for (l_, m_), u in states.items():
                if m_ == m - 1 and l_ > L:
                    w -= (u @ w) * u
            states[(L, m - 1)] = w / np.linalg.norm(w)
    cols = [states[(L, m)] for L in range(abs(l1 - l2), l1 + l2 + 1) for m in range(-L, L + 1)]
    C = np.stack(cols, axis=1)
    C[np.abs(C) < 1e-15] = 0.0
    C.setflags(write=False)
    return C


def cg_table(l1: int, l2: int) -> CGTable:
    if l1 < 0 or l2 < 0:
        raise DegreeOutOfRange(f"degrees must be non-negative, got {l1}, {l2}")
    return CGTable(int(l1), int(l2), _cg_matrix(int(l1), int(l2)))


def cg_block_residual(l1: int, l2: int, g: EulerZYZ) -> float:
    """``max |C^T (D_l1 (x) D_l2) C - (+)_l D_l|`` at g."""
    C = cg_table(l1, l2).C
    lhs = C.T @ np.kron(wigner_D(l1, g), wigner_D(l2, g)) @ C
    rhs = np.zeros_like(lhs)
    pos = 0
    for l in range(abs(l1 - l2), l1 + l2 + 1):
        rhs[pos:pos + 2 * l + 1, pos:pos + 2 * l + 1] = wigner_D(l, g)
        pos += 2 * l + 1
    return float(np.abs(lhs - rhs).max())


@dataclass(frozen=True, eq=False)
class Fragment:
    """Row vector of degree l, transforming as ``f -> f D_l(g^-1)``."""

    degree: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).reshape(-1)
        if self.degree < 0 or v.size != 2 * self.degree + 1:
            raise LengthMismatch(f"fragment of degree {self.degree} needs {2 * self.degree + 1} values, got {v.size}")
        object.__setattr__(self, "values", v)

    def rotate(self, g: EulerZYZ) -> "Fragment":
        return Fragment(self.degree, self.values @ wigner_D(self.degree, g).conj().T)


def cg_fragment_product(a: Fragment, b: Fragment, l_out: int) -> Fragment:
    if not abs(a.degree - b.degree) <= l_out <= a.degree + b.degree:
        raise DegreeOutOfRange(f"degree {l_out} not in {a.degree} x {b.degree}")
    C = cg_table(a.degree, b.degree).block(l_out)
    return Fragment(l_out, np.kron(a.values, b.values) @ C)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, float)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    e = np.exp(x[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def gated_nonlinearity(features: Sequence[Fragment], gates) -> list[Fragment]:
    """Scale each fragment by sigmoid of its gate."""
    gates = np.atleast_1d(np.asarray(gates, dtype=float))
    if len(features) != gates.size:
        raise LengthMismatch(f"{len(features)} fragments but {gates.size} gates")
    scale = _sigmoid(gates)
    return [Fragment(f.degree, f.values * s) for f, s in zip(features, scale)]


# ---------------------------------------------------------------------------
# steerable kernels

KernelBlock = Callable[[SpherePoint], np.ndarray]


def _conj_flip(l: int) -> np.ndarray:
    """Q with ``conj(D_l) = Q D_l Q``: ``Q[m, m'] = (-1)^m delta_{m', -m}``."""
    m = np.arange(-l, l + 1)
    return np.diag((-1.0) ** m)[:, ::-1]


@lru_cache(maxsize=None)
def _steerable_maps(li: int, lo: int) -> tuple[np.ndarray, ...]:
    """For each l, the matrix taking conj(Y_l(x)) to vec(k_l(x)) (column stacking)."""
    cg = cg_table(li, lo)
    Q = np.kron(_conj_flip(li), np.eye(2 * lo + 1))
    maps = []
    for l in cg.degrees:
        A = Q @ cg.block(l)
        A.setflags(write=False)
        maps.append(A)
    return tuple(maps)


@dataclass(frozen=True)
class SteerableBasis:
    """Angular basis of kernels with ``k(r x) = D_lo(r) k(x) D_li(r)^-1``."""

    li: int
    lo: int

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(range(abs(self.li - self.lo), self.li + self.lo + 1))

    def __len__(self) -> int:
        return len(self.degrees)

    def evaluate(self, theta, phi) -> np.ndarray:
        """Blocks at (array) points, shape ``point_shape + (n_blocks, 2lo+1, 2li+1)``."""
        theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
        out = []
        for l, A in zip(self.degrees, _steerable_maps(self.li, self.lo)):
            v = np.conj(sph_harm_vector(l, theta, phi)) @ A.T
            k = v.reshape(theta.shape + (2 * self.li + 1, 2 * self.lo + 1))
            out.append(np.swapaxes(k, -1, -2))
        return np.stack(out, axis=-3)

    def block(self, j: int) -> KernelBlock:
        def k(x: SpherePoint) -> np.ndarray:
            return self.evaluate(x.theta, x.phi)[j]
        return k

    @property
    def angular_blocks(self) -> tuple[KernelBlock, ...]:
        return tuple(self.block(j) for j in range(len(self)))

    def kernel(self, weights) -> KernelBlock:
        """Linear combination of the angular blocks."""
        w = np.asarray(weights, dtype=complex)
        if w.shape != (len(self),):
            raise LengthMismatch(f"need {len(self)} weights, got shape {w.shape}")

        def k(x: SpherePoint) -> np.ndarray:
            return np.tensordot(w, self.evaluate(x.theta, x.phi), axes=1)
        return k


def steerable_basis(li: int, lo: int) -> SteerableBasis:
    if li < 0 or lo < 0:
        raise DegreeOutOfRange(f"degrees must be non-negative, got {li}, {lo}")
    return SteerableBasis(int(li), int(lo))


def steerable_constraint_residual(k: KernelBlock, li: int, lo: int, trials: int = 100,
                                  rng: np.random.Generator | None = None) -> float:
    """Max over random (r, x) of ``|k(r x) - D_lo(r) k(x) D_li(r)^-1|``."""
    rng = np.random.default_rng(0) if rng is None else rng
    worst = 0.0
    for _ in range(trials):
        r = random_rotation(rng)
        x = random_sphere_point(rng)
        lhs = k(act_on_point(r, x))
        rhs = wigner_D(lo, r) @ k(x) @ wigner_D(li, r).conj().T
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def gaussian_shells(radii, centers, width: float) -> np.ndarray:
    """Default radial profiles ``exp(-(r - c)^2 / (2 width^2))``, shape (len(centers), len(radii))."""
    r = np.asarray(radii, float)
    c = np.asarray(centers, float)
    return np.exp(-((r[None, :] - c[:, None]) ** 2) / (2.0 * width ** 2))
