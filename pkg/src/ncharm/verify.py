"""Verification suites: numerical certificates for every equivariance claim.

Each suite returns a :class:`VerificationReport` whose checks compare a
measured residual against a tolerance.  Random inputs come from numpy's PCG64
generator seeded explicitly, so reports are reproducible.
"""
from __future__ import annotations

import platform
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import equivariant_ops as eo
from . import finite_groups as fg
from .errors import KernelNotEquivariant
from .rotations import (EulerZYZ, compose, euler_angles_to_matrices, euler_to_matrix,
                        make_so3_grid, make_sphere_grid, matrices_to_euler_angles, random_rotation)
from .spectral import (SO3Signal, SO3Spectrum, SphereSignal, SphSpectrum, lift_sphere_signal,
                       random_so3_spectrum, random_sph_spectrum, sht_forward, sht_inverse,
                       so3_ft_forward, so3_ft_inverse)
from .special_functions import wigner_D, wigner_D_angles


@dataclass(frozen=True)
class Check:
    name: str
    tolerance: float
    residual: float
    comparison: str = "<="

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.residual):
            return False
        if self.comparison == ">=":
            return self.residual >= self.tolerance
        return self.residual <= self.tolerance


@dataclass
class VerificationReport:
    suite: str
    checks: list[Check] = field(default_factory=list)
    env: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, tolerance: float, residual: float, comparison: str = "<=") -> Check:
        c = Check(name, float(tolerance), float(abs(residual)), comparison)
        self.checks.append(c)
        return c

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(Check(f"{other.suite}/{c.name}", c.tolerance, c.residual, c.comparison)
                           for c in other.checks)

    def to_text(self) -> str:
        lines = [f"REPORT {self.suite}"]
        lines += [f"ENV {k}={v}" for k, v in self.env.items()]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"CHECK {c.name} residual={c.residual:.3e} {c.comparison} tol={c.tolerance:.1e} {status}")
        lines.append(f"OVERALL {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"suite": self.suite, "env": dict(self.env), "passed": self.passed,
                "checks": [{"name": c.name, "tolerance": c.tolerance, "residual": c.residual,
                            "comparison": c.comparison, "passed": c.passed} for c in self.checks]}


def _env(**kw) -> dict:
    return {**kw, "numpy": np.__version__, "python": platform.python_version(), "prng": "PCG64"}


def _decaying_sph(rng, B):
    s = random_sph_spectrum(rng, B, real=True)
    scale = np.concatenate([np.full(2 * l + 1, 1.0 / (1 + l)) for l in range(B)])
    return SphSpectrum(B, s.coeffs * scale)


def _decaying_so3(rng, B):
    s = random_so3_spectrum(rng, B, real=True)
    return SO3Spectrum(B, tuple(b / (2 * l + 1) ** 1.5 for l, b in enumerate(s.blocks)))


def random_grid_rotation(rng, B: int) -> EulerZYZ:
    grid = make_so3_grid(B)
    j, k, l = rng.integers(0, 2 * B, size=3)
    return grid.node(int(j), int(k), int(l))


# ---------------------------------------------------------------------------
# pointwise evaluation helpers (independent of the FFT paths)

def _vec_to_sphere(v):
    return np.arctan2(np.hypot(v[..., 0], v[..., 1]), v[..., 2]), np.arctan2(v[..., 1], v[..., 0])


def sphere_grid_vectors(B: int) -> np.ndarray:
    T, P = make_sphere_grid(B).mesh()
    return np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], axis=-1)


def so3_grid_matrices(B: int) -> np.ndarray:
    return euler_angles_to_matrices(*make_so3_grid(B).mesh())


def translate_sphere_samples(s: SphSpectrum, g: EulerZYZ, B: int) -> np.ndarray:
    """Samples of ``x -> f(g^-1 x)`` on the bandwidth-B grid, by direct synthesis."""
    v = sphere_grid_vectors(B) @ euler_to_matrix(g)  # rows R^T x
    return s.evaluate(*_vec_to_sphere(v))


def evaluate_so3_at_matrices(s: SO3Spectrum, R: np.ndarray) -> np.ndarray:
    return s.evaluate(*matrices_to_euler_angles(R))


def translate_so3_samples(s: SO3Spectrum, g: EulerZYZ, B: int) -> np.ndarray:
    """Samples of ``h -> f(g^-1 h)`` on the bandwidth-B grid, by direct synthesis."""
    R = np.einsum("ba,...bc->...ac", euler_to_matrix(g), so3_grid_matrices(B))
    return evaluate_so3_at_matrices(s, R)


# ---------------------------------------------------------------------------
# brute-force quadrature oracles

def brute_spherical_correlation(f: SphSpectrum, k: SphSpectrum, B: int) -> np.ndarray:
    """``c(g) = int k(g^-1 x) f(x) dx`` at every SO(3) grid node, by sphere quadrature."""
    sg = make_sphere_grid(B)
    fv = f.evaluate(*sg.mesh())
    X = sphere_grid_vectors(B)
    R = so3_grid_matrices(B)
    out = np.zeros(R.shape[:3], dtype=complex)
    for j in range(R.shape[0]):
        Y = np.einsum("klba,pqb->klpqa", R[j], X)  # g^-1 x
        kv = k.evaluate(*_vec_to_sphere(Y))
        out[j] = sg.phi_step * np.einsum("klpq,pq,p->kl", kv, fv, sg.weights)
    return out


def brute_spherical_convolution(f: SphSpectrum, k: SphSpectrum, B: int) -> np.ndarray:
    """``int f(g nu) k(g^-1 x) d alpha sin b d b d gamma`` at every sphere grid node."""
    qg = make_so3_grid(B)
    fl = lift_sphere_signal(SphereSignal(B, f.evaluate(*make_sphere_grid(B).mesh()))).samples
    X = sphere_grid_vectors(B)
    R = so3_grid_matrices(B)
    out = np.zeros(X.shape[:2], dtype=complex)
    for j in range(R.shape[0]):
        Y = np.einsum("klba,pqb->klpqa", R[j], X)
        kv = k.evaluate(*_vec_to_sphere(Y))
        out += np.einsum("kl,klpq,k->pq", fl[j], kv, qg.weights)
    return out * (8 * np.pi ** 2) / (8.0 * B * B)


def _so3_pair_sum(f: SO3Spectrum, k: SO3Spectrum, B: int, kernel_arg: Callable) -> np.ndarray:
    qg = make_so3_grid(B)
    R = so3_grid_matrices(B).reshape(-1, 3, 3)
    fv = evaluate_so3_at_matrices(f, R)
    w = np.broadcast_to(qg.weights[None, :, None], (2 * B,) * 3).reshape(-1) / (8.0 * B * B)
    out = np.zeros(len(R), dtype=complex)
    for gi in range(len(R)):
        kv = evaluate_so3_at_matrices(k, kernel_arg(R[gi], R))
        out[gi] = np.sum(w * fv * kv)
    return out.reshape((2 * B,) * 3)


def brute_so3_convolution(f: SO3Spectrum, k: SO3Spectrum, B: int) -> np.ndarray:
    """``int f(u) k(u^-1 g) du`` at every grid node."""
    return _so3_pair_sum(f, k, B, lambda g, U: np.einsum("uba,bc->uac", U, g))


def brute_so3_correlation(f: SO3Spectrum, k: SO3Spectrum, B: int) -> np.ndarray:
    """``int f(u) k(g^-1 u) du`` at every grid node."""
    return _so3_pair_sum(f, k, B, lambda g, U: np.einsum("ba,ubc->uac", g, U))


# ---------------------------------------------------------------------------
# continuous suites

def suite_roundtrip(seed: int = 0, bandwidths=(4, 8, 16, 32), tol: float = 1e-10,
                    time_limit: float = 60.0) -> VerificationReport:
    rng = np.random.default_rng(seed)
    rep = VerificationReport("roundtrip", env=_env(seed=seed, bandwidths=list(bandwidths)))
    t0 = time.perf_counter()
    for B in bandwidths:
        s = random_sph_spectrum(rng, B)
        back = sht_forward(sht_inverse(s, B))
        rep.add(f"sht_B{B}", tol, np.abs(back.coeffs - s.coeffs).max())
    rep.add("runtime_seconds", time_limit, time.perf_counter() - t0)
    return rep


def suite_orthogonality(lmax: int = 6, bandwidth: int = 8, tol: float = 1e-8) -> VerificationReport:
    """Quadrature inner products of all matrix elements with l <= lmax."""
    rep = VerificationReport("orthogonality", env=_env(lmax=lmax, bandwidth=bandwidth))
    B = bandwidth
    grid = make_so3_grid(B)
    A, Bt, C = grid.mesh()
    cols, expect = [], []
    for l in range(lmax + 1):
        D = wigner_D_angles(l, A, Bt, C).reshape(-1, (2 * l + 1) ** 2)
        cols.append(D)
        expect += [1.0 / (2 * l + 1)] * (2 * l + 1) ** 2
    M = np.concatenate(cols, axis=1)
    w = np.broadcast_to(grid.weights[None, :, None], A.shape).reshape(-1) / (8.0 * B * B)
    gram = (M * w[:, None]).T @ M.conj()
    rep.add(f"peter_weyl_l{lmax}_B{B}", tol, np.abs(gram - np.diag(expect)).max())
    return rep


def suite_wigner(seed: int = 0, lmax: int = 16, trials: int = 200, tol: float = 1e-9) -> VerificationReport:
    rng = np.random.default_rng(seed)
    rep = VerificationReport("wigner", env=_env(seed=seed, lmax=lmax, trials=trials))
    hom = uni = 0.0
    for _ in range(trials):
        g1, g2 = random_rotation(rng), random_rotation(rng)
        g12 = compose(g1, g2)
        for l in range(lmax + 1):
            D1, D2 = wigner_D(l, g1), wigner_D(l, g2)
            hom = max(hom, np.abs(wigner_D(l, g12) - D1 @ D2).max())
            uni = max(uni, np.abs(D1 @ D1.conj().T - np.eye(2 * l + 1)).max())
    rep.add("homomorphism", tol, hom)
    rep.add("unitarity", tol, uni)
    return rep


def suite_oracles(seed: int = 0, bandwidth: int = 4, tol: float = 1e-7) -> VerificationReport:
    """Spectral operations against brute-force spatial quadrature."""
    rng = np.random.default_rng(seed)
    B = bandwidth
    rep = VerificationReport("oracles", env=_env(seed=seed, bandwidth=B))
    f, k = _decaying_sph(rng, B), _decaying_sph(rng, B)
    out = so3_ft_inverse(eo.spherical_correlate(f, k), B).samples
    rep.add("spherical_correlate", tol, np.abs(out - brute_spherical_correlation(f, k, B)).max())
    out = sht_inverse(eo.spherical_convolve(f, k), B).samples
    rep.add("spherical_convolve", tol, np.abs(out - brute_spherical_convolution(f, k, B)).max())
    F, K = _decaying_so3(rng, B), _decaying_so3(rng, B)
    out = so3_ft_inverse(eo.so3_convolve(F, K), B).samples
    rep.add("so3_convolve", tol, np.abs(out - brute_so3_convolution(F, K, B)).max())
    out = so3_ft_inverse(eo.so3_correlate(F, K), B).samples
    rep.add("so3_correlate", tol, np.abs(out - brute_so3_correlation(F, K, B)).max())
    return rep


def suite_equivariance(seed: int = 0, bandwidth: int = 8, trials: int = 20,
                       tol: float = 1e-9) -> VerificationReport:
    """``op(lambda_g f) = lambda_g op(f)`` on the grid for random grid rotations g.

    Translated inputs and outputs are produced by direct synthesis at rotated
    points; only the operation itself runs through the FFT transforms.
    """
    rng = np.random.default_rng(seed)
    B = bandwidth
    rep = VerificationReport("equivariance", env=_env(seed=seed, bandwidth=B, trials=trials))
    f, k = _decaying_sph(rng, B), _decaying_sph(rng, B)
    F, K = _decaying_so3(rng, B), _decaying_so3(rng, B)
    sconv = eo.spherical_convolve(f, k)
    scorr = eo.spherical_correlate(f, k)
    gconv = eo.so3_convolve(F, K)
    gcorr = eo.so3_correlate(F, K)
    worst = dict.fromkeys(["spherical_convolve", "spherical_correlate", "so3_convolve", "so3_correlate"], 0.0)
    for _ in range(trials):
        g = random_grid_rotation(rng, B)
        fg_ = sht_forward(SphereSignal(B, translate_sphere_samples(f, g, B)))
        Fg = so3_ft_forward(SO3Signal(B, translate_so3_samples(F, g, B)))
        pairs = {
            "spherical_convolve": (sht_inverse(eo.spherical_convolve(fg_, k), B).samples,
                                   translate_sphere_samples(sconv, g, B)),
            "spherical_correlate": (so3_ft_inverse(eo.spherical_correlate(fg_, k), B).samples,
                                    translate_so3_samples(scorr, g, B)),
            "so3_convolve": (so3_ft_inverse(eo.so3_convolve(Fg, K), B).samples,
                             translate_so3_samples(gconv, g, B)),
            "so3_correlate": (so3_ft_inverse(eo.so3_correlate(Fg, K), B).samples,
                              translate_so3_samples(gcorr, g, B)),
        }
        for name, (a, b) in pairs.items():
            worst[name] = max(worst[name], float(np.abs(a - b).max()))
    for name, r in worst.items():
        rep.add(name, tol, r)
    return rep


def suite_recovery(seed: int = 0, bandwidth: int = 16, trials: int = 100,
                   required: int = 99) -> VerificationReport:
    """Recover a random grid rotation from the correlation argmax."""
    rng = np.random.default_rng(seed)
    B = bandwidth
    rep = VerificationReport("recovery", env=_env(seed=seed, bandwidth=B, trials=trials))
    step = np.pi / B
    hits = 0
    worst = 0.0
    for _ in range(trials):
        signal = _decaying_sph(rng, B)
        g0 = random_grid_rotation(rng, B)
        pattern = sht_forward(SphereSignal(B, translate_sphere_samples(signal, g0, B)))
        peak = eo.correlation_peak(eo.spherical_correlate(pattern, signal), B)
        err = _axis_errors(peak.rotation, g0)
        worst = max(worst, err)
        hits += err <= step + 1e-9
    rep.add("max_axis_error_rad", step, worst)
    rep.add("trials_recovered", required, hits, ">=")
    return rep


def _axis_errors(a: EulerZYZ, b: EulerZYZ) -> float:
    def circ(x, y):
        d = abs(x - y) % (2 * np.pi)
        return min(d, 2 * np.pi - d)
    return max(circ(a.alpha, b.alpha), abs(a.beta - b.beta), circ(a.gamma, b.gamma))


def suite_cg(seed: int = 0, lmax: int = 4, trials: int = 100, tol_orth: float = 1e-12,
             tol_block: float = 1e-10) -> VerificationReport:
    rng = np.random.default_rng(seed)
    rep = VerificationReport("cg", env=_env(seed=seed, lmax=lmax, trials=trials))
    rotations = [random_rotation(rng) for _ in range(trials)]
    orth = block = 0.0
    for l1 in range(lmax + 1):
        for l2 in range(lmax + 1):
            C = eo.cg_table(l1, l2).C
            orth = max(orth, np.abs(C.T @ C - np.eye(len(C))).max())
            for g in rotations:
                block = max(block, eo.cg_block_residual(l1, l2, g))
    rep.add("orthogonality", tol_orth, orth)
    rep.add("block_diagonalization", tol_block, block)
    frag = 0.0
    for _ in range(20):
        la, lb = (int(x) for x in rng.integers(0, lmax + 1, size=2))
        a = eo.Fragment(la, rng.standard_normal(2 * la + 1) + 1j * rng.standard_normal(2 * la + 1))
        b = eo.Fragment(lb, rng.standard_normal(2 * lb + 1) + 1j * rng.standard_normal(2 * lb + 1))
        g = random_rotation(rng)
        for l in range(abs(la - lb), la + lb + 1):
            lhs = eo.cg_fragment_product(a.rotate(g), b.rotate(g), l).values
            rhs = eo.cg_fragment_product(a, b, l).rotate(g).values
            frag = max(frag, np.abs(lhs - rhs).max())
    rep.add("fragment_product_equivariance", tol_block, frag)
    return rep


def suite_steerable(seed: int = 0, lmax: int = 3, trials: int = 100, tol: float = 1e-10,
                    control_floor: float = 0.1) -> VerificationReport:
    rng = np.random.default_rng(seed)
    rep = VerificationReport("steerable", env=_env(seed=seed, lmax=lmax, trials=trials))
    worst = 0.0
    count_err = 0
    for li in range(lmax + 1):
        for lo in range(lmax + 1):
            basis = eo.steerable_basis(li, lo)
            count_err += abs(len(basis) - (2 * min(li, lo) + 1))
            for blk in basis.angular_blocks:
                worst = max(worst, eo.steerable_constraint_residual(blk, li, lo, trials, rng))
    rep.add("basis_constraint", tol, worst)
    rep.add("basis_count_mismatch", 0, count_err)
    control = np.inf
    for li, lo in [(0, 1), (1, 1), (2, 1), (3, 3)]:
        mats = rng.standard_normal((3, 2 * lo + 1, 2 * li + 1)) + 1j * rng.standard_normal((3, 2 * lo + 1, 2 * li + 1))
        k = _linear_kernel(mats)
        control = min(control, eo.steerable_constraint_residual(k, li, lo, trials, rng))
    rep.add("negative_control", control_floor, control, ">=")
    return rep


def _linear_kernel(mats):
    def k(x):
        return np.tensordot(x.vector(), mats, axes=1)
    return k


# ---------------------------------------------------------------------------
# finite-group suites

FINITE_GROUPS = ("cyclic(6)", "dihedral(4)", "symmetric(3)", "symmetric(4)")


def default_subgroups(G: fg.FiniteGroup) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Smallest and largest proper nontrivial cyclic subgroups (trivial group if none)."""
    subs = sorted({G.generated_subgroup([g]) for g in range(G.order)} - {(G.identity,), tuple(range(G.order))},
                  key=lambda h: (len(h), h))
    if not subs:
        return (G.identity,), (G.identity,)
    return subs[0], subs[-1]


def _finite_case_checks(rep: VerificationReport, G: fg.FiniteGroup, rng, tol: float) -> None:
    H1, H2 = default_subgroups(G)
    X1, X2 = fg.coset_space(G, H1), fg.coset_space(G, H2)

    def rand(d):
        n = d.order if isinstance(d, fg.FiniteGroup) else len(d)
        return fg.GroupFunction(d, rng.standard_normal(n) + 1j * rng.standard_normal(n))

    for case, (fd, kd) in {"I": (G, X2), "II": (X1, G), "III": (X1, X2), "IV": (G, G)}.items():
        f, k = rand(fd), rand(kd)
        out = fg.generalized_convolve(f, k)
        eq = max(np.abs(fg.generalized_convolve(f.translate(u), k).values - out.translate(u).values).max()
                 for u in range(G.order))
        red = np.abs(out.values - fg.generalized_convolve(f, k, method="direct").values).max()
        rep.add(f"{G.name}/case{case}_equivariance", tol, eq)
        rep.add(f"{G.name}/case{case}_reduction", tol, red)
        if case in ("I", "III"):
            full = fg.finite_convolve(fg.lift(f) if isinstance(fd, fg.CosetSpace) else f, fg.lift(k)).values
            spread = max(np.ptp(full[list(c)].real) + np.ptp(full[list(c)].imag) for c in X2.cosets)
            rep.add(f"{G.name}/case{case}_constant_on_cosets", tol, spread)


def dimension_configs() -> list[tuple[str, fg.FiniteGroup, tuple, tuple, fg.FiniteRep, fg.FiniteRep]]:
    """Curated (G, Hi, Ho, rho_i, rho_o) tuples, several with nontrivial rho_i."""
    out = []
    C4 = fg.cyclic(4)
    out.append(("cyclic4_regular", C4, (0,), (0,), fg.FiniteRep.trivial(C4, (0,)), fg.FiniteRep.trivial(C4, (0,))))
    S3 = fg.symmetric(3)
    a, b = (0, 1), (0, 2)
    out.append(("S3_order2_pair", S3, a, b, fg.FiniteRep.trivial(S3, a), fg.FiniteRep.trivial(S3, b)))
    D4 = fg.dihedral(4)
    refl = (0, 4)
    sign = fg.rep_from_generators(D4, {4: [[-1.0]]})
    out.append(("D4_C2_sign_to_sign", D4, refl, refl, sign, sign))
    out.append(("D4_C2_sign_to_trivial", D4, refl, refl, sign, fg.FiniteRep.trivial(D4, refl)))
    rot = fg.rep_from_generators(D4, {1: [[0.0, -1.0], [1.0, 0.0]]})
    out.append(("D4_C4_rotation_to_C2", D4, (0, 1, 2, 3), refl, rot, fg.FiniteRep.trivial(D4, refl)))
    out.append(("D4_C4_rotation_to_rotation", D4, (0, 1, 2, 3), (0, 1, 2, 3), rot, rot))
    S4 = fg.symmetric(4)
    stab = S4.generated_subgroup([1, 2])  # permutations fixing 0
    perm = fg.FiniteRep(S4, stab, np.stack([_perm_matrix(S4.labels[h][1:]) for h in stab]))
    out.append(("S4_S3_permutation_to_trivial", S4, stab, stab, perm, fg.FiniteRep.trivial(S4, stab)))
    C6 = fg.cyclic(6)
    C3 = C6.generated_subgroup([2])
    chi = fg.rep_from_generators(C6, {2: [[np.exp(2j * np.pi / 3)]]})
    out.append(("C6_C3_character", C6, C3, C3, chi, chi))
    return out


def _perm_matrix(label: str) -> np.ndarray:
    """Permutation of {1, 2, 3} (as written in an S4 label) acting on R^3."""
    p = [int(c) - 1 for c in label]
    M = np.zeros((3, 3))
    for i, j in enumerate(p):
        M[j, i] = 1.0
    return M


def _dimension_checks(rep: VerificationReport, name, G, Hi, Ho, ri, ro) -> None:
    maps = fg.equivariant_map_space(G, Hi, Ho, ri, ro)
    kern = fg.admissible_kernel_space(G, Hi, Ho, ri, ro)
    Xi, Xo = fg.coset_space(G, Hi), fg.coset_space(G, Ho)
    if kern.dimension:
        mats = np.stack([fg.induced_map_matrix(fg.local_kernel(b, Xi), Xi, Xo, ri, ro).reshape(-1)
                         for b in kern.basis])
        span = int(np.linalg.matrix_rank(mats, tol=fg.RANK_TOL))
    else:
        span = 0
    rep.add(f"dim/{name}/maps_minus_kernels", 0, maps.dimension - kern.dimension)
    rep.add(f"dim/{name}/maps_minus_correlation_span", 0, maps.dimension - span)
    if ri.degree == 1 and ro.degree == 1 and not np.any(ri.matrices - 1) and not np.any(ro.matrices - 1):
        rep.add(f"dim/{name}/maps_minus_double_cosets", 0, maps.dimension - len(fg.double_cosets(G, Hi, Ho)))
    rep.env[f"dim[{name}]"] = maps.dimension


def suite_finite(seed: int = 0, groups=FINITE_GROUPS, tol: float = 1e-12,
                 configs: bool = True) -> VerificationReport:
    rng = np.random.default_rng(seed)
    rep = VerificationReport("finite", env=_env(seed=seed, groups=list(groups)))
    for name in groups:
        G = fg.make_group(name)
        _finite_case_checks(rep, G, rng, tol)
        H1, H2 = default_subgroups(G)
        _dimension_checks(rep, f"{G.name}_scalar", G, H1, H2,
                          fg.FiniteRep.trivial(G, H1), fg.FiniteRep.trivial(G, H2))
    if configs:
        for cfg in dimension_configs():
            _dimension_checks(rep, *cfg)
    return rep


def suite_mackey(seed: int = 0, tol: float = 1e-12, trials: int = 10) -> VerificationReport:
    """Local-trivialization path vs Mackey path on dihedral(4) with the C2 sign rep."""
    rng = np.random.default_rng(seed)
    D4 = fg.dihedral(4)
    H = (0, 4)
    sign = fg.rep_from_generators(D4, {4: [[-1.0]]})
    X = fg.coset_space(D4, H)
    rep = VerificationReport("mackey", env=_env(seed=seed, group=D4.name, subgroup=list(H), rep="sign"))
    kern = fg.admissible_kernel_space(D4, H, H, sign, sign)
    two_path = equiv = mack = 0.0
    pi = [fg.induced_action(X, sign, g) for g in range(D4.order)]
    for _ in range(trials):
        kl = fg.local_kernel(np.tensordot(rng.standard_normal(kern.dimension), kern.basis, 1), X)
        f = rng.standard_normal((len(X), 1)) + 1j * rng.standard_normal((len(X), 1))
        a = fg.induce_and_correlate(f, kl, X, X, sign, sign, method="local")
        b = fg.induce_and_correlate(f, kl, X, X, sign, sign, method="mackey")
        two_path = max(two_path, np.abs(a - b).max())
        for g in range(D4.order):
            lhs = fg.induce_and_correlate((pi[g] @ f.reshape(-1)).reshape(f.shape), kl, X, X, sign, sign)
            equiv = max(equiv, np.abs(lhs.reshape(-1) - pi[g] @ a.reshape(-1)).max())
        mack = max(mack, fg.mackey_residual(fg.lift_mackey(f, X, sign), X, sign))
    rep.add("two_path_agreement", tol, two_path)
    rep.add("induced_action_equivariance", tol, equiv)
    rep.add("mackey_condition", tol, mack)
    trivial_ok = _scalar_reduction_residual(rng)
    rep.add("scalar_reduces_to_case_III", tol, trivial_ok)
    bad = rng.standard_normal((len(X), 1, 1))
    try:
        fg.induce_and_correlate(np.ones((len(X), 1)), bad, X, X, sign, sign)
        rejected = 0.0
    except KernelNotEquivariant:
        rejected = 1.0
    rep.add("rejects_non_equivariant_kernel", 1.0, rejected, ">=")
    return rep


def _scalar_reduction_residual(rng) -> float:
    """Trivial reps: induce_and_correlate equals Case III with ``k2(w Ho) = k_H(w^-1 Hi)``."""
    S3 = fg.symmetric(3)
    Hi, Ho = (0, 1), (0, 2)
    Xi, Xo = fg.coset_space(S3, Hi), fg.coset_space(S3, Ho)
    ri, ro = fg.FiniteRep.trivial(S3, Hi), fg.FiniteRep.trivial(S3, Ho)
    kern = fg.admissible_kernel_space(S3, Hi, Ho, ri, ro)
    kG = np.tensordot(rng.standard_normal(kern.dimension), kern.basis, 1)[:, 0, 0]
    kl = fg.local_kernel(kG[:, None, None], Xi)
    f = rng.standard_normal(len(Xi)) + 1j * rng.standard_normal(len(Xi))
    out = fg.induce_and_correlate(f[:, None], kl, Xi, Xo, ri, ro)[:, 0]
    k2 = np.array([kl[Xi.index(S3.inv(w)), 0, 0] for w in Xo.section])
    case3 = fg.generalized_convolve(fg.GroupFunction(Xi, f), fg.GroupFunction(Xo, k2))
    return float(np.abs(out - case3.values).max())


# ---------------------------------------------------------------------------

SUITES: dict[str, Callable[..., VerificationReport]] = {
    "roundtrip": suite_roundtrip,
    "orthogonality": suite_orthogonality,
    "wigner": suite_wigner,
    "oracles": suite_oracles,
    "equivariance": suite_equivariance,
    "recovery": suite_recovery,
    "cg": suite_cg,
    "steerable": suite_steerable,
    "finite": suite_finite,
    "mackey": suite_mackey,
}

ACCEPTANCE = (
    ("1 SHT round trip", "roundtrip"),
    ("2 Peter-Weyl orthogonality", "orthogonality"),
    ("3 Wigner homomorphism and unitarity", "wigner"),
    ("4 spectral vs spatial oracles", "oracles"),
    ("5 equivariance of continuous operations", "equivariance"),
    ("6 rotation recovery", "recovery"),
    ("7 Clebsch-Gordan", "cg"),
    ("8 steerable kernels", "steerable"),
    ("9 finite-group suite", "finite"),
    ("10 Mackey/twist consistency", "mackey"),
)


def run_suite(name: str, seed: int = 0, **kwargs) -> VerificationReport:
    if name == "all":
        rep = VerificationReport("all", env=_env(seed=seed))
        for sub in SUITES:
            rep.extend(run_suite(sub, seed=seed))
        return rep
    fn = SUITES[name]
    if name == "orthogonality":
        return fn(**kwargs)
    return fn(seed=seed, **kwargs)
