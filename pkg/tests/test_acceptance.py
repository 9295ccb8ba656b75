"""Acceptance criteria, each run through the same suites as ``ncharm verify``.

Every criterion prints one ``CRITERION <n> ... PASS|FAIL`` line.  The suites run
with their default parameters, which are the stated bandwidths, trial counts
and tolerances; the expected tolerances are asserted here so they cannot drift.
"""
import sys

import pytest

from ncharm.verify import ACCEPTANCE, run_suite

# criterion -> {check name prefix: (tolerance, comparison)}
EXPECTED = {
    "roundtrip": {"sht_B4": (1e-10, "<="), "sht_B8": (1e-10, "<="), "sht_B16": (1e-10, "<="),
                  "sht_B32": (1e-10, "<="), "runtime_seconds": (60.0, "<=")},
    "orthogonality": {"peter_weyl_l6_B8": (1e-8, "<=")},
    "wigner": {"homomorphism": (1e-9, "<="), "unitarity": (1e-9, "<=")},
    "oracles": {"spherical_correlate": (1e-7, "<="), "spherical_convolve": (1e-7, "<="),
                "so3_convolve": (1e-7, "<="), "so3_correlate": (1e-7, "<=")},
    "equivariance": {"spherical_convolve": (1e-9, "<="), "spherical_correlate": (1e-9, "<="),
                     "so3_convolve": (1e-9, "<="), "so3_correlate": (1e-9, "<=")},
    "recovery": {"max_axis_error_rad": (3.141592653589793 / 16, "<="), "trials_recovered": (99, ">=")},
    "cg": {"orthogonality": (1e-12, "<="), "block_diagonalization": (1e-10, "<=")},
    "steerable": {"basis_constraint": (1e-10, "<="), "negative_control": (0.1, ">=")},
    "finite": {},
    "mackey": {"two_path_agreement": (1e-12, "<=")},
}


def _finite_shape_ok(rep) -> bool:
    names = [c.name for c in rep.checks]
    groups = ("cyclic(6)", "dihedral(4)", "symmetric(3)", "symmetric(4)")
    cases_ok = all(f"{g}/case{k}_equivariance" in names for g in groups for k in ("I", "II", "III", "IV"))
    tol_ok = all(c.tolerance == 1e-12 for c in rep.checks if "/case" in c.name)
    configs = {c.name.split("/")[1] for c in rep.checks if c.name.endswith("maps_minus_kernels")}
    nontrivial = any(not n.endswith("_scalar") and "cyclic4_regular" not in n and "S3_order2" not in n
                     for n in configs)
    return cases_ok and tol_ok and len(configs) >= 6 and nontrivial


def evaluate(label: str, suite: str):
    rep = run_suite(suite, seed=0)
    checks = {c.name: c for c in rep.checks}
    for name, (tol, cmp) in EXPECTED[suite].items():
        assert name in checks, f"{suite}: missing check {name}"
        assert checks[name].tolerance == pytest.approx(tol) and checks[name].comparison == cmp, name
    if suite == "finite":
        assert _finite_shape_ok(rep)
    worst = ", ".join(f"{c.name}={c.residual:.3g}" for c in rep.checks if c.name in EXPECTED[suite])
    line = f"CRITERION {label}: {'PASS' if rep.passed else 'FAIL'}" + (f" ({worst})" if worst else
                                                                      f" ({len(rep.checks)} checks)")
    return rep, line


@pytest.mark.parametrize("label,suite", ACCEPTANCE, ids=[s for _, s in ACCEPTANCE])
def test_acceptance(label, suite, capsys):
    rep, line = evaluate(label, suite)
    with capsys.disabled():
        print("\n" + line)
    failed = [c for c in rep.checks if not c.passed]
    assert not failed, "\n" + rep.to_text()


if __name__ == "__main__":
    ok = True
    for label, suite in ACCEPTANCE:
        rep, line = evaluate(label, suite)
        print(line)
        ok &= rep.passed
    sys.exit(0 if ok else 1)
