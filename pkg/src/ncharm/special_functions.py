"""Legendre functions, Wigner-d/D matrices and spherical harmonics.

Conventions
-----------
Matrix rows and columns are indexed by ``m, n = -l..l`` (array index ``m + l``).

``wigner_d(l, beta)[m, n]`` is the matrix element of a rotation by ``beta`` about
the y axis, obtained from the Rodrigues-type expansion of the SU(2) matrix
elements.  Evaluated literally, that expansion produces the *transpose* of the
matrix used here; the transposed orientation is the one for which

* ``D(g1 g2) = D(g1) D(g2)`` with ``g = Rz(a) Ry(b) Rz(c)``,
* ``D(g)[m, 0] = sqrt(4 pi / (2l+1)) * conj(Y_l^m(beta, alpha))``, and
* ``Y_l(g x) = conj(D_l(g)) @ Y_l(x)``

all hold simultaneously (see the tests).  ``D_l(a, b, c)[m, n] =
exp(-i (m a + n c)) d_l(b)[m, n]``.  Associated Legendre functions carry the
Condon-Shortley phase, so ``Y_l^m`` agrees with the usual physics convention;
other libraries may still differ by a global phase.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .rotations import EulerZYZ, SpherePoint, act_on_point

# closed form for l <= this, degree recurrence above
CLOSED_FORM_MAX_L = 16

_LOG_FACT = np.array([math.lgamma(i + 1.0) for i in range(1024)])


def _log_fact(n):
    return _LOG_FACT[n]


def _check_x(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0) or not np.all(np.isfinite(x)):
        raise DomainError("argument must lie in [-1, 1]")
    return x


# ---------------------------------------------------------------------------
# Legendre functions

@lru_cache(maxsize=None)
def _rodrigues_coeffs(l: int, m: int) -> tuple[tuple[int, int, int], ...]:
    """Exact terms of ``d^(l+m)/dx^(l+m) [(1-x)^l (1+x)^l]`` by the Leibniz rule.

    Each entry ``(c, a, b)`` stands for ``c (1-x)^a (1+x)^b``.  Expanding in powers
    of ``1 -/+ x`` instead of ``x`` avoids the cancellation of a monomial sum near
    the poles.
    """
    fl = math.factorial(l)
    out = []
    for k in range(m, l + 1):
        c = (-1) ** k * math.comb(l + m, k) * (fl // math.factorial(l - k)) * (fl // math.factorial(k - m))
        out.append((c, l - k, k - m))
    return tuple(out)


@lru_cache(maxsize=None)
def _rodrigues_arrays(l: int, m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    terms = _rodrigues_coeffs(l, m)
    norm = np.longdouble(2 ** l * math.factorial(l))
    coef = np.array([np.longdouble(c) / norm for c, _, _ in terms], dtype=np.longdouble)
    pa = np.array([t[1] for t in terms])
    pb = np.array([t[2] for t in terms])
    return coef, pa, pb


def _powers(x: np.ndarray, n: int) -> np.ndarray:
    """``x**k`` for k = 0..n on a trailing axis."""
    out = np.empty(x.shape + (n + 1,), dtype=x.dtype)
    out[..., 0] = 1
    if n:
        out[..., 1:] = np.cumprod(np.broadcast_to(x[..., None], x.shape + (n,)), axis=-1)
    return out


def _assoc_legendre_rodrigues(l: int, m: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Rodrigues sum given ``a = 1 - x`` and ``b = 1 + x`` (extended precision)."""
    a, b = a.astype(np.longdouble), b.astype(np.longdouble)
    coef, pa, pb = _rodrigues_arrays(l, m)
    poly = np.sum(_powers(a, l)[..., pa] * _powers(b, l)[..., pb] * coef, axis=-1)
    out = (-1) ** (l + m) * np.sqrt(np.maximum(a * b, 0)) ** m * poly
    return out.astype(float)


def _assoc_legendre_recurrence(l: int, m: int, x: np.ndarray, s: np.ndarray) -> np.ndarray:
    pmm = np.ones_like(x)
    for i in range(1, m + 1):
        pmm = -(2 * i - 1) * s * pmm
    if l == m:
        return pmm
    p1 = x * (2 * m + 1) * pmm
    p0 = pmm
    for ll in range(m + 2, l + 1):
        p0, p1 = p1, (x * (2 * ll - 1) * p1 - (ll + m - 1) * p0) / (ll - m)
    return p1


def assoc_legendre(l: int, m: int, x):
    """Associated Legendre function P_l^m(x), 0 <= m <= l, Condon-Shortley phase.

    Degrees up to 16 expand the Rodrigues formula
    ``(-1)^(l+m) / (2^l l!) (1-x^2)^(m/2) d^(l+m)/dx^(l+m) (1-x^2)^l``
    into an explicit finite sum (in extended precision); higher degrees use the
    upward recurrence in l.
    """
    if l < 0 or m < 0 or m > l:
        raise DomainError(f"need 0 <= m <= l, got l={l}, m={m}")
    x = _check_x(x)
    if l <= CLOSED_FORM_MAX_L:
        out = _assoc_legendre_rodrigues(l, m, 1.0 - x, 1.0 + x)
    else:
        out = _assoc_legendre_recurrence(l, m, x, np.sqrt(np.maximum(1.0 - x * x, 0.0)))
    return float(out) if out.ndim == 0 else out


def assoc_legendre_theta(l: int, m: int, theta) -> np.ndarray:
    """``P_l^m(cos theta)``, accurate near the poles.

    ``1 -/+ cos(theta)`` are formed from half angles rather than by subtraction.
    """
    if l < 0 or m < 0 or m > l:
        raise DomainError(f"need 0 <= m <= l, got l={l}, m={m}")
    theta = np.asarray(theta, dtype=float)
    if l <= CLOSED_FORM_MAX_L:
        th = theta.astype(np.longdouble) / 2
        return _assoc_legendre_rodrigues(l, m, 2 * np.sin(th) ** 2, 2 * np.cos(th) ** 2)
    return _assoc_legendre_recurrence(l, m, np.cos(theta), np.abs(np.sin(theta)))


def _assoc_legendre_theta_orders(l: int, theta: np.ndarray) -> np.ndarray:
    """``P_l^m(cos theta)`` for m = 0..l on a trailing axis, sharing the power tables."""
    if l > CLOSED_FORM_MAX_L:
        x, s = np.cos(theta), np.abs(np.sin(theta))
        return np.stack([_assoc_legendre_recurrence(l, m, x, s) for m in range(l + 1)], axis=-1)
    th = theta.astype(np.longdouble) / 2
    a, b = 2 * np.sin(th) ** 2, 2 * np.cos(th) ** 2
    A, Bp = _powers(a, l), _powers(b, l)
    sq = np.sqrt(a * b)
    out = np.empty(theta.shape + (l + 1,))
    for m in range(l + 1):
        coef, pa, pb = _rodrigues_arrays(l, m)
        poly = np.sum(A[..., pa] * Bp[..., pb] * coef, axis=-1)
        out[..., m] = ((-1) ** (l + m) * sq ** m * poly).astype(float)
    return out


def legendre(l: int, x):
    """Legendre polynomial P_l(x)."""
    if l < 0:
        raise DomainError(f"degree must be non-negative, got {l}")
    return assoc_legendre(l, 0, x)


# ---------------------------------------------------------------------------
# Wigner-d

@lru_cache(maxsize=None)
def _closed_form_terms(l: int, m: int, n: int):
    """``(prefactor, ((int_coef, cos_power, sin_power), ...))`` for d_l(beta)[m, n].

    Leibniz expansion of the derivative in the SU(2) matrix element formula, with
    the row/column roles exchanged (see module docstring).  The factorials are
    regrouped as ``sqrt(ratio) * C(l-m', k) * C(l+m', l+n'-k)`` so that every
    term carries an exact integer coefficient.
    """
    mp, np_ = n, m
    pref = math.exp(0.5 * (_log_fact(l + np_) + _log_fact(l - np_)
                           - _log_fact(l + mp) - _log_fact(l - mp)))
    terms = []
    for k in range(max(0, np_ - mp), min(l - mp, l + np_) + 1):
        coef = (-1) ** k * math.comb(l - mp, k) * math.comb(l + mp, l + np_ - k)
        terms.append((coef, 2 * l - 2 * k + np_ - mp, 2 * k + mp - np_))
    return pref, tuple(terms)


def _half_angles(beta):
    # extended precision keeps the alternating sums accurate up to l = 16
    half = np.asarray(beta, dtype=np.longdouble) / 2
    return np.cos(half), np.sin(half)


@lru_cache(maxsize=None)
def _closed_form_tensor(l: int):
    """``d_l[m, n] = pref[m, n] * sum_b C[m, n, b] cos^(2l-b) sin^b`` (half angles)."""
    size = 2 * l + 1
    pref = np.zeros((size, size))
    C = np.zeros((size, size, 2 * l + 1), dtype=np.longdouble)
    for i, m in enumerate(range(-l, l + 1)):
        for j, n in enumerate(range(-l, l + 1)):
            p, terms = _closed_form_terms(l, m, n)
            pref[i, j] = p
            for coef, _, b in terms:
                # integer coefficients stay exact in extended precision
                C[i, j, b] += np.longdouble(coef)
    pref.setflags(write=False)
    C.setflags(write=False)
    return pref, C


def _wigner_d_closed(l: int, beta: np.ndarray) -> np.ndarray:
    c, s = _half_angles(beta)
    b = np.arange(2 * l + 1)
    V = c[..., None] ** (2 * l - b) * s[..., None] ** b
    pref, C = _closed_form_tensor(l)
    return pref * np.einsum("...b,mnb->...mn", V, C).astype(float)


def wigner_d_closed(l: int, beta) -> np.ndarray:
    """Wigner-d straight from the closed-form sum (any l; loses digits for large l)."""
    if l < 0:
        raise DomainError(f"degree must be non-negative, got {l}")
    return _wigner_d_closed(l, np.asarray(beta, dtype=float))


def _edge_value(l, m, n, c, s):
    pref, ((coef, a, b),) = _closed_form_terms(l, m, n)
    return pref * coef * c ** a * s ** b


def _recurrence_step(J: int, dJ: np.ndarray, dJm1: np.ndarray, cosb: np.ndarray,
                     c: np.ndarray, s: np.ndarray) -> np.ndarray:
    """d^{J+1} from d^J and d^{J-1} (three-term recurrence in the degree)."""
    size = 2 * J + 3
    out = np.zeros(cosb.shape + (size, size))
    m = np.arange(-J, J + 1)
    M, N = np.meshgrid(m, m, indexing="ij")
    J1 = J + 1
    denom = np.sqrt((J1 * J1 - M * M) * (J1 * J1 - N * N).astype(float))
    a = J1 * (2 * J + 1) / denom
    b = J1 * np.sqrt(((J * J - M * M) * (J * J - N * N)).astype(float)) / (J * denom)
    prev = np.zeros(cosb.shape + (2 * J + 1, 2 * J + 1))
    if J >= 1:
        prev[..., 1:-1, 1:-1] = dJm1
    inner = a * (cosb[..., None, None] - (M * N) / (J * J1)) * dJ - b * prev
    out[..., 1:-1, 1:-1] = inner
    for idx, mm in ((0, -J1), (size - 1, J1)):
        for jdx, nn in enumerate(range(-J1, J1 + 1)):
            out[..., idx, jdx] = _edge_value(J1, mm, nn, c, s)
            out[..., jdx, idx] = _edge_value(J1, nn, mm, c, s)
    return out


def wigner_d_table(lmax: int, beta) -> list[np.ndarray]:
    """``[wigner_d(l, beta) for l in range(lmax + 1)]`` sharing the recurrence."""
    beta = np.asarray(beta, dtype=float)
    out = []
    for l in range(min(lmax, CLOSED_FORM_MAX_L) + 1):
        out.append(_wigner_d_closed(l, beta))
    if lmax > CLOSED_FORM_MAX_L:
        c, s, cosb = np.cos(beta / 2.0), np.sin(beta / 2.0), np.cos(beta)
        for J in range(CLOSED_FORM_MAX_L, lmax):
            out.append(_recurrence_step(J, out[J], out[J - 1], cosb, c, s))
    return out


def wigner_d(l: int, beta) -> np.ndarray:
    """Real orthogonal (2l+1)x(2l+1) Wigner small-d matrix at angle ``beta``.

    ``beta`` may be an array; the matrix axes are appended to its shape.
    """
    if l < 0:
        raise DomainError(f"degree must be non-negative, got {l}")
    beta = np.asarray(beta, dtype=float)
    if l <= CLOSED_FORM_MAX_L:
        return _wigner_d_closed(l, beta)
    return wigner_d_table(l, beta)[l]


def wigner_d_recurrence(l: int, beta) -> np.ndarray:
    """Wigner-d for any l via the degree recurrence started at l = 0, 1."""
    beta = np.asarray(beta, dtype=float)
    if l == 0:
        return np.ones(beta.shape + (1, 1))
    c, s, cosb = np.cos(beta / 2.0), np.sin(beta / 2.0), np.cos(beta)
    prev, cur = _wigner_d_closed(0, beta), _wigner_d_closed(1, beta)
    for J in range(1, l):
        prev, cur = cur, _recurrence_step(J, cur, prev, cosb, c, s)
    return cur


def wigner_D_angles(l: int, alpha, beta, gamma) -> np.ndarray:
    """Vectorized Wigner-D: ``exp(-i(m alpha + n gamma)) d_l(beta)[m, n]``."""
    alpha, beta, gamma = np.broadcast_arrays(
        np.asarray(alpha, float), np.asarray(beta, float), np.asarray(gamma, float))
    m = np.arange(-l, l + 1)
    d = wigner_d(l, beta)
    ea = np.exp(-1j * alpha[..., None] * m)
    ec = np.exp(-1j * gamma[..., None] * m)
    return ea[..., :, None] * d * ec[..., None, :]


def wigner_D(l: int, g: EulerZYZ) -> np.ndarray:
    """Unitary irrep of degree l evaluated at the rotation ``g``."""
    if l < 0:
        raise DomainError(f"degree must be non-negative, got {l}")
    return wigner_D_angles(l, g.alpha, g.beta, g.gamma)


# ---------------------------------------------------------------------------
# Spherical harmonics

def _sph_norm(l: int, m: int) -> float:
    return math.sqrt((2 * l + 1) / (4 * math.pi)
                     * math.exp(_log_fact(l - m) - _log_fact(l + m)))


def sph_harm(l: int, m: int, theta, phi):
    """Y_l^m(theta, phi); theta is the colatitude.

    Negative orders use ``Y_l^{-m} = (-1)^m conj(Y_l^m)``.
    """
    if l < 0 or abs(m) > l:
        raise DomainError(f"need |m| <= l, got l={l}, m={m}")
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    am = abs(m)
    y = _sph_norm(l, am) * assoc_legendre_theta(l, am, theta) * np.exp(1j * am * phi)
    if m < 0:
        y = (-1) ** am * np.conj(y)
    return complex(y) if y.ndim == 0 else y


def sph_harm_point(l: int, m: int, x: SpherePoint) -> complex:
    return sph_harm(l, m, x.theta, x.phi)


def sph_harm_vector(l: int, theta, phi) -> np.ndarray:
    """``[Y_l^m(theta, phi) for m in -l..l]`` stacked on the last axis."""
    if l < 0:
        raise DomainError(f"degree must be non-negative, got {l}")
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    P = _assoc_legendre_theta_orders(l, theta)
    m = np.arange(l + 1)
    norm = np.array([_sph_norm(l, k) for k in m])
    pos = norm * P * np.exp(1j * phi[..., None] * m)
    neg = ((-1.0) ** m[1:]) * np.conj(pos[..., 1:])
    return np.concatenate([neg[..., ::-1], pos], axis=-1)


def rotate_sph_harm_vector(l: int, g: EulerZYZ, x: SpherePoint) -> np.ndarray:
    """``Y_l(g x)`` computed as ``conj(D_l(g)) @ Y_l(x)``."""
    return np.conj(wigner_D(l, g)) @ sph_harm_vector(l, x.theta, x.phi)


def sph_harm_vector_at(l: int, g: EulerZYZ, x: SpherePoint) -> np.ndarray:
    """Direct evaluation of ``Y_l`` at the rotated point ``g x``."""
    y = act_on_point(g, x)
    return sph_harm_vector(l, y.theta, y.phi)
