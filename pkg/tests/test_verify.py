import math

import numpy as np
import pytest

from ncharm import verify
from ncharm.rotations import EulerZYZ
from ncharm.spectral import random_sph_spectrum, rotate_sph_spectrum, sht_inverse


def test_report_semantics():
    rep = verify.VerificationReport("demo", env={"B": 4})
    rep.add("a", 1e-3, 1e-4)
    rep.add("b", 0.1, 2.0, ">=")
    assert rep.passed
    rep.add("c", 1e-3, float("nan"))
    assert not rep.passed
    text = rep.to_text()
    assert text.splitlines()[0] == "REPORT demo" and "ENV B=4" in text
    assert text.rstrip().endswith("OVERALL FAIL")
    d = rep.to_dict()
    assert [c["passed"] for c in d["checks"]] == [True, True, False]


def test_residuals_are_nonnegative():
    rep = verify.VerificationReport("x")
    assert rep.add("neg", 1.0, -0.5).residual == 0.5


def test_translate_sphere_samples_matches_spectral_rotation(rng):
    s = random_sph_spectrum(rng, 4)
    g = EulerZYZ(0.4, 1.2, 2.2)
    direct = verify.translate_sphere_samples(s, g, 4)
    assert np.abs(direct - sht_inverse(rotate_sph_spectrum(s, g)).samples).max() <= 1e-12


def test_orthogonality_fails_when_aliased():
    # degrees beyond the grid's exactness range are caught
    assert not verify.suite_orthogonality(lmax=6, bandwidth=3).passed


def test_equivariance_detects_broken_operation(monkeypatch):
    from ncharm import equivariant_ops as eo
    original = eo.spherical_convolve

    def broken(f, k):
        out = original(f, k)
        out.coeffs[3] += 1.0  # not rotation-covariant
        return out
    monkeypatch.setattr(eo, "spherical_convolve", broken)
    rep = verify.suite_equivariance(bandwidth=4, trials=3)
    assert not {c.name: c.passed for c in rep.checks}["spherical_convolve"]


def test_random_grid_rotation_is_grid_node(rng):
    from ncharm.rotations import make_so3_grid
    g = verify.random_grid_rotation(rng, 4)
    grid = make_so3_grid(4)
    assert g.beta in grid.beta


def test_run_suite_unknown():
    with pytest.raises(KeyError):
        verify.run_suite("nope")


def test_suites_are_deterministic():
    a = verify.run_suite("mackey", seed=5).to_dict()
    b = verify.run_suite("mackey", seed=5).to_dict()
    assert a == b


def test_recovery_small_bandwidth():
    rep = verify.suite_recovery(bandwidth=6, trials=10, required=10)
    assert rep.passed
    assert rep.checks[0].tolerance == pytest.approx(math.pi / 6)
