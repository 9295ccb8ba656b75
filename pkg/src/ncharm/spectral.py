"""Fourier transforms on S^2 and SO(3) over equiangular grids.

Measures:

* sphere: area measure (total 4 pi), ``f_lm = int f conj(Y_lm) dx`` and
  ``f = sum f_lm Y_lm``; Parseval reads ``sum |f_lm|^2 = int |f|^2 dx``.
* SO(3): normalized Haar measure (total 1), ``F_l = int f(g) D_l(g)^* dg`` and
  ``f(g) = sum_l (2l+1) tr(F_l D_l(g))``; Parseval reads
  ``int |f|^2 dg = sum_l (2l+1) ||F_l||_F^2``.

Both transforms separate variables: FFTs over the longitude-like axes and a
direct weighted sum over the colatitude with cached Wigner-d tables.  All
signals band-limited below B are transformed exactly (up to rounding).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BandwidthMismatch
from .rotations import EulerZYZ, SpherePoint, grid_colatitudes, make_sphere_grid, make_so3_grid, quadrature_weights
from .special_functions import sph_harm_vector, wigner_D, wigner_D_angles, wigner_d_table


def _check_bandwidth(B) -> int:
    if int(B) != B or B < 1:
        raise ValueError(f"bandwidth must be a positive integer, got {B!r}")
    return int(B)


@dataclass(frozen=True, eq=False)
class SphereSignal:
    bandwidth: int
    samples: np.ndarray

    def __post_init__(self):
        B = _check_bandwidth(self.bandwidth)
        s = np.asarray(self.samples, dtype=complex)
        if s.shape != (2 * B, 2 * B):
            raise ValueError(f"expected samples of shape {(2 * B, 2 * B)}, got {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "bandwidth", B)
        object.__setattr__(self, "samples", s)

    @property
    def grid(self):
        return make_sphere_grid(self.bandwidth)

    def energy(self) -> float:
        """Quadrature of ``|f|^2`` against the area measure."""
        return float(self.grid.integrate(np.abs(self.samples) ** 2).real)


@dataclass(frozen=True, eq=False)
class SphSpectrum:
    """Coefficients ``f_lm`` for ``0 <= l < lmax``, flat index ``l*l + l + m``."""

    lmax: int
    coeffs: np.ndarray

    def __post_init__(self):
        L = int(self.lmax)
        c = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        if L < 1 or c.shape != (L * L,):
            raise ValueError(f"expected {L * L} coefficients for lmax={L}, got {c.size}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "lmax", L)
        object.__setattr__(self, "coeffs", c)

    @staticmethod
    def index(l: int, m: int) -> int:
        return l * l + l + m

    def __getitem__(self, lm: tuple[int, int]) -> complex:
        l, m = lm
        if not (0 <= l < self.lmax and abs(m) <= l):
            raise IndexError(f"no coefficient ({l}, {m}) for lmax={self.lmax}")
        return self.coeffs[self.index(l, m)]

    def degree(self, l: int) -> np.ndarray:
        """View of the 2l+1 coefficients of degree l, ordered m = -l..l."""
        return self.coeffs[l * l:(l + 1) * (l + 1)]

    def energy(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    @classmethod
    def zeros(cls, lmax: int) -> "SphSpectrum":
        return cls(lmax, np.zeros(lmax * lmax, dtype=complex))

    @classmethod
    def from_degrees(cls, blocks) -> "SphSpectrum":
        blocks = list(blocks)
        return cls(len(blocks), np.concatenate([np.asarray(b, complex) for b in blocks]))

    def evaluate(self, theta, phi) -> np.ndarray:
        """Synthesize at arbitrary points from spherical harmonics directly."""
        theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
        out = np.zeros(theta.shape, dtype=complex)
        for l in range(self.lmax):
            out += sph_harm_vector(l, theta, phi) @ self.degree(l)
        return out


@dataclass(frozen=True, eq=False)
class SO3Signal:
    """Samples indexed ``[j, k, l]`` at ``(alpha_j, beta_k, gamma_l)``."""

    bandwidth: int
    samples: np.ndarray

    def __post_init__(self):
        B = _check_bandwidth(self.bandwidth)
        s = np.asarray(self.samples, dtype=complex)
        n = 2 * B
        if s.shape != (n, n, n):
            raise ValueError(f"expected samples of shape {(n, n, n)}, got {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "bandwidth", B)
        object.__setattr__(self, "samples", s)

    @property
    def grid(self):
        return make_so3_grid(self.bandwidth)

    def energy(self) -> float:
        """Quadrature of ``|f|^2`` against the normalized Haar measure."""
        return float(self.grid.integrate(np.abs(self.samples) ** 2).real)


@dataclass(frozen=True, eq=False)
class SO3Spectrum:
    """Blocks ``F_l``, each (2l+1)x(2l+1) and indexed by ``(m + l, n + l)``."""

    lmax: int
    blocks: tuple

    def __post_init__(self):
        L = int(self.lmax)
        blocks = tuple(np.asarray(b, dtype=complex) for b in self.blocks)
        if L < 1 or len(blocks) != L:
            raise ValueError(f"expected {L} blocks, got {len(blocks)}")
        for l, b in enumerate(blocks):
            if b.shape != (2 * l + 1, 2 * l + 1):
                raise ValueError(f"block {l} has shape {b.shape}")
            if not np.all(np.isfinite(b)):
                raise ValueError("coefficients must be finite")
        object.__setattr__(self, "lmax", L)
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def zeros(cls, lmax: int) -> "SO3Spectrum":
        return cls(lmax, tuple(np.zeros((2 * l + 1, 2 * l + 1), complex) for l in range(lmax)))

    def energy(self) -> float:
        return float(sum((2 * l + 1) * np.sum(np.abs(b) ** 2) for l, b in enumerate(self.blocks)))

    def evaluate(self, alpha, beta, gamma) -> np.ndarray:
        """Synthesize at arbitrary rotations by direct evaluation of Wigner-D."""
        out = 0
        for l, F in enumerate(self.blocks):
            D = wigner_D_angles(l, alpha, beta, gamma)
            out = out + (2 * l + 1) * np.einsum("ab,...ba->...", F, D)
        return np.asarray(out, dtype=complex)

    def evaluate_at(self, g: EulerZYZ) -> complex:
        return complex(sum((2 * l + 1) * np.trace(F @ wigner_D(l, g))
                           for l, F in enumerate(self.blocks)))


def max_abs_difference(a, b) -> float:
    """Largest entrywise difference between two spectra or signals of equal shape."""
    if isinstance(a, SphSpectrum):
        return float(np.abs(a.coeffs - b.coeffs).max())
    if isinstance(a, SO3Spectrum):
        return float(max(np.abs(x - y).max() for x, y in zip(a.blocks, b.blocks)))
    return float(np.abs(np.asarray(a.samples) - np.asarray(b.samples)).max())


# ---------------------------------------------------------------------------
# cached tables

@lru_cache(maxsize=16)
def _d_tables(B: int) -> tuple[np.ndarray, ...]:
    tables = wigner_d_table(B - 1, grid_colatitudes(B))
    for t in tables:
        t.setflags(write=False)
    return tuple(tables)


@lru_cache(maxsize=16)
def _sph_tables(B: int) -> np.ndarray:
    """``lam[j, l*l+l+m] = Y_l^m(theta_j, 0)`` (real)."""
    tables = _d_tables(B)
    lam = np.zeros((2 * B, B * B))
    for l, d in enumerate(tables):
        lam[:, l * l:(l + 1) * (l + 1)] = np.sqrt((2 * l + 1) / (4 * np.pi)) * d[:, :, l]
    lam.setflags(write=False)
    return lam


@lru_cache(maxsize=None)
def _m_index(L: int) -> np.ndarray:
    return np.concatenate([np.arange(-l, l + 1) for l in range(L)])


# ---------------------------------------------------------------------------
# sphere

def sht_forward(f: SphereSignal) -> SphSpectrum:
    B = f.bandwidth
    w = quadrature_weights(B)
    # F[j, m] = sum_k f[j, k] exp(-i m phi_k)
    F = np.fft.fft(f.samples, axis=1)
    m = _m_index(B)
    lam = _sph_tables(B)
    coeffs = (np.pi / B) * np.einsum("j,jc,jc->c", w, lam, F[:, m % (2 * B)])
    return SphSpectrum(B, coeffs)


def sht_inverse(s: SphSpectrum, B: int | None = None) -> SphereSignal:
    L = s.lmax
    B = L if B is None else _check_bandwidth(B)
    if L > B:
        raise BandwidthMismatch(f"spectrum has lmax={L} > bandwidth {B}")
    lam = _sph_tables(B)[:, :L * L]
    m = _m_index(L)
    G = np.zeros((2 * B, 2 * B), dtype=complex)
    # deterministic accumulation: ascending (l, m)
    np.add.at(G, (slice(None), m % (2 * B)), lam * s.coeffs[None, :])
    return SphereSignal(B, np.fft.ifft(G, axis=1) * (2 * B))


def sphere_signal_from_function(func, B: int) -> SphereSignal:
    """Sample ``func(theta, phi)`` (vectorized) on the bandwidth-B grid."""
    grid = make_sphere_grid(B)
    T, P = grid.mesh()
    return SphereSignal(B, func(T, P))


# ---------------------------------------------------------------------------
# SO(3)

def so3_ft_forward(f: SO3Signal) -> SO3Spectrum:
    B = f.bandwidth
    n = 2 * B
    w = quadrature_weights(B)
    # G[p, k, q] = sum_{j,l} f[j,k,l] exp(+i p alpha_j) exp(+i q gamma_l)
    G = np.fft.ifft2(f.samples, axes=(0, 2)) * (n * n)
    tables = _d_tables(B)
    blocks = []
    for l in range(B):
        idx = np.arange(-l, l + 1) % n
        # F[a, b] = 1/(8B^2) sum_k w_k d[k, b, a] G[b, k, a]
        sub = G[idx][:, :, idx]  # (b, k, a)
        blocks.append(np.einsum("k,kba,bka->ab", w, tables[l], sub) / (8.0 * B * B))
    return SO3Spectrum(B, tuple(blocks))


def so3_ft_inverse(s: SO3Spectrum, B: int | None = None) -> SO3Signal:
    L = s.lmax
    B = L if B is None else _check_bandwidth(B)
    if L > B:
        raise BandwidthMismatch(f"spectrum has lmax={L} > bandwidth {B}")
    n = 2 * B
    tables = _d_tables(B)
    H = np.zeros((n, n, n), dtype=complex)  # (b, k, a)
    for l, F in enumerate(s.blocks):
        idx = np.arange(-l, l + 1) % n
        contrib = (2 * l + 1) * np.einsum("ab,kba->bka", F, tables[l])
        H[np.ix_(idx, np.arange(n), idx)] += contrib
    # f[j, k, l] = sum_{b,a} H[b,k,a] exp(-i b alpha_j) exp(-i a gamma_l)
    return SO3Signal(B, np.fft.fft2(H, axes=(0, 2)))


def so3_signal_from_function(func, B: int) -> SO3Signal:
    """Sample ``func(alpha, beta, gamma)`` (vectorized) on the bandwidth-B grid."""
    grid = make_so3_grid(B)
    return SO3Signal(B, func(*grid.mesh()))


def lift_sphere_signal(f: SphereSignal) -> SO3Signal:
    """``g -> f(g nu)``: on the grid, ``f(alpha_j, beta_k, gamma) = f[k, j]``."""
    B = f.bandwidth
    vals = np.broadcast_to(f.samples.T[:, :, None], (2 * B, 2 * B, 2 * B))
    return SO3Signal(B, vals.copy())


# ---------------------------------------------------------------------------
# rotations acting on spectra

def rotate_sph_spectrum(s: SphSpectrum, g: EulerZYZ) -> SphSpectrum:
    """Spectrum of ``x -> f(g^-1 x)``: each degree block becomes ``D_l(g) f_l``."""
    return SphSpectrum.from_degrees(wigner_D(l, g) @ s.degree(l) for l in range(s.lmax))


def rotate_so3_spectrum(s: SO3Spectrum, g: EulerZYZ) -> SO3Spectrum:
    """Spectrum of ``h -> f(g^-1 h)``: each block becomes ``F_l D_l(g)^*``."""
    return SO3Spectrum(s.lmax, tuple(F @ wigner_D(l, g).conj().T for l, F in enumerate(s.blocks)))


def random_sph_spectrum(rng: np.random.Generator, lmax: int, real: bool = False) -> SphSpectrum:
    """Random coefficients; ``real=True`` gives the spectrum of a real signal."""
    c = rng.standard_normal(lmax * lmax) + 1j * rng.standard_normal(lmax * lmax)
    if real:
        for l in range(lmax):
            for m in range(1, l + 1):
                c[l * l + l - m] = (-1) ** m * np.conj(c[l * l + l + m])
            c[l * l + l] = c[l * l + l].real
    return SphSpectrum(lmax, c)


def random_so3_spectrum(rng: np.random.Generator, lmax: int, real: bool = False) -> SO3Spectrum:
    """Random blocks; ``real=True`` projects onto spectra of real signals.

    A real signal satisfies ``F[-a, -b] = (-1)^(a-b) conj(F[a, b])``.
    """
    blocks = []
    for l in range(lmax):
        F = rng.standard_normal((2 * l + 1,) * 2) + 1j * rng.standard_normal((2 * l + 1,) * 2)
        if real:
            m = np.arange(-l, l + 1)
            sign = (-1.0) ** (m[:, None] - m[None, :])
            F = 0.5 * (F + sign * np.conj(F[::-1, ::-1]))
        blocks.append(F)
    return SO3Spectrum(lmax, tuple(blocks))


def sphere_point_grid_values(s: SphSpectrum, x: SpherePoint) -> complex:
    return complex(s.evaluate(x.theta, x.phi))
