"""Acceptance criteria 1-13, each at its pinned tolerance.

Every test prints one ``[PASS]``/``[FAIL]`` line (visible without ``-s``)
before asserting, so a run doubles as a criterion report::

    pytest tests/test_acceptance.py
"""

import math
import time

import numpy as np
import pytest

from zerotwo import cli, suite
from zerotwo.laws import SCALAR_OPTIMAL_CONSTANT
from zerotwo.linalg import op_norm

from helpers import semigroup


@pytest.fixture(scope="module")
def gens():
    return suite.random_generators(suite.DEFAULT_SEED)


@pytest.fixture(scope="module")
def sweep(gens):
    return suite.resolvent_sweep(gens)


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}"
        with capsys.disabled():
            print(f"\n{line}{'  (' + detail + ')' if detail else ''}")
        return ok
    return emit


def test_generator_set(gens):
    assert len(gens) == 20
    for fam in gens:
        assert fam.dim == 8 and 1.0 - 1e-12 <= op_norm(fam.a) <= 4.0 + 1e-12


def test_criterion_01_dalembert(report):
    start = time.perf_counter()
    res = suite.criterion_dalembert(suite.random_generators(suite.DEFAULT_SEED))  # cold caches
    elapsed = time.perf_counter() - start
    worst = res.values["max_residual"]
    ok = worst <= 1e-8 and elapsed <= 10.0 and len(res.rows) == 20 * 100
    assert report(1, res.title, ok, f"max {worst:.2e}, {elapsed:.2f} s")


def test_criterion_02_resolvent_identity(report):
    start = time.perf_counter()
    res = suite.criterion_resolvent_identity(suite.random_generators(suite.DEFAULT_SEED))
    elapsed = time.perf_counter() - start
    worst = res.values["max_residual"]
    ok = worst <= 1e-7 and elapsed <= 30.0
    assert report(2, res.title, ok, f"max {worst:.2e}, {elapsed:.2f} s")


def test_criterion_03_oracle(gens, sweep, report):
    res = suite.criterion_oracle(sweep)
    # re-check against numpy's own inverse, independent of the package's solver
    worst = 0.0
    for g, rep in sweep:
        direct = np.linalg.inv(rep.lam**2 * np.eye(8) - gens[g].a)
        worst = max(worst, np.linalg.norm(rep.resolvent - direct, 2) / np.linalg.norm(direct, 2))
    ok = res.passed and worst <= 1e-6 and len(sweep) == 20 * 4 * 3
    assert report(3, res.title, ok, f"max rel {worst:.2e}")


def test_criterion_04_s_bounds(gens, report):
    res = suite.criterion_s_bounds(gens, suite.DEFAULT_SEED)
    ok = res.values["sweep_violations"] == 0 and res.values["scalar_violations"] == 0
    assert report(4, res.title, ok, f"max lhs-rhs {res.values['max_lhs_minus_rhs']:.3g}")


def test_criterion_05_growth(gens, report):
    res = suite.criterion_growth(gens, suite.DEFAULT_SEED)
    ok = res.values["violations"] == 0 and all(m >= 1.0 and w >= 0.0 for m, w in res.values["fitted_growth"])
    assert report(5, res.title, ok, f"max lhs-rhs {res.values['max_lhs_minus_rhs']:.3g}")


def test_criterion_06_diag_optimality(report):
    res = suite.criterion_diag_optimality()
    sup32, sup8 = res.values["sup_n32"], res.values["sup_n8"]
    ok = sup32 >= 2.0 - 1e-6 and abs(sup8 - (1.0 - math.cos(0.8))) <= 1e-9
    assert report(6, res.title, ok, f"n=32: {sup32:.10f}, n=8: {sup8:.12f}")


def test_criterion_07_scalar_constant(report):
    res = suite.criterion_scalar_constant()
    measured = res.values["measured"]
    exact = float(res.values["analytic_repr"]) == 8.0 / (3.0 * math.sqrt(3.0)) == SCALAR_OPTIMAL_CONSTANT
    ok = abs(measured - 1.5396007) <= 1e-6 and exact
    assert report(7, res.title, ok, f"measured {measured:.12f}")


def test_criterion_08_zero_two_local(gens, report):
    res = suite.criterion_zero_two_local(gens)
    bounded = res.values["max_bounded_estimate"]
    diag = res.values["diag_estimates"]
    ok = bounded <= 1e-6 and all(v >= 1.9 for v in diag.values()) and set(diag) == {"64", "128", "256"}
    assert report(8, res.title, ok, f"bounded max {bounded:.2e}, diag min {min(diag.values()):.6f}")


def test_criterion_09_frequency_domain(report):
    res = suite.criterion_frequency_domain()
    r = res.values["r"]
    ok = res.passed and r == pytest.approx(1.0 - math.exp(-5.0), abs=1e-12)
    for lam_key, vals in res.values["lambdas"].items():
        lam = float(lam_key)
        ok &= vals["shifted_resolvent_dist"] <= r + 1e-8
        ok &= vals["laplace_relative_error"] <= 1e-6
        # closed form of the scalar case: lam/(lam + 0.1) - 1
        ok &= vals["shifted_resolvent_dist"] == pytest.approx(0.1 / (lam + 0.1), rel=1e-12)
    assert report(9, res.title, bool(ok), f"r = {r:.12f}")


def test_criterion_10_time_domain(report, nilpotent):
    res = suite.criterion_time_domain()
    ok = res.passed
    for name, t, residual, inv_norm, bound, _ in res.rows:
        if name in ("scalar", "nilpotent"):
            ok &= residual <= 1e-8
            ok &= bound == "n/a" or inv_norm <= bound + 1e-8
    # B_2 for the nilpotent generator is [[2, 2], [0, 2]]
    b2 = np.linalg.inv(np.array([[2.0, 2.0], [0.0, 2.0]]))
    nil = [row for row in res.rows if row[0] == "nilpotent" and row[1] == 2.0][0]
    ok &= abs(nil[3] - np.linalg.norm(b2, 2)) <= 1e-10
    assert report(10, res.title, bool(ok), f"max residual {res.values['max_identity_residual']:.2e}")


def test_criterion_11_extension(gens, report):
    res = suite.criterion_extension(gens)
    ratios = res.values["richardson"]
    ok = res.values["max_norm_mismatch"] <= 1e-10
    ok &= all(3.2 <= v["ratio_1"] <= 4.8 and 3.2 <= v["ratio_2"] <= 4.8 for v in ratios.values())
    ok &= len(ratios) == 2 * 8
    # the n*A reading is visibly off for n >= 2
    ok &= all(v["error_nA"] > 1e-3 for k, v in ratios.items() if not k.endswith("n=1"))
    assert report(11, res.title, bool(ok), f"norm mismatch {res.values['max_norm_mismatch']:.2e}")


def test_criterion_12_region(report):
    start = time.perf_counter()
    res = suite.criterion_region(suite.DEFAULT_SEED)
    elapsed = time.perf_counter() - start
    p = res.values["params"]
    ok = res.passed and elapsed <= 20.0 and res.values["points_passed"] == 25
    ok &= math.pi * math.cos(p["phi_c"]) < p["r_tilde"] and math.pi / p["r_c"] < p["t0"]
    ok &= abs(p["r_tilde"] - math.acosh(2.0 - 0.25)) <= 2e-6
    assert report(12, res.title, bool(ok), f"r~ = {p['r_tilde']:.7f}, {elapsed:.2f} s")


def test_criterion_13_determinism(tmp_path, report):
    dirs = [tmp_path / "run1", tmp_path / "run2"]
    codes = [cli.main(["reproduce", "--seed", "42", "--out", str(d)]) for d in dirs]
    names = sorted(p.name for p in dirs[0].iterdir())
    identical = names == sorted(p.name for p in dirs[1].iterdir()) and all(
        (dirs[0] / n).read_bytes() == (dirs[1] / n).read_bytes() for n in names)
    text = (dirs[0] / "criteria.json").read_text()
    ok = codes == [0, 0] and identical and "criteria.json" in names and "1.53960071783" in text
    assert report(13, "reproduce twice with seed 42 gives byte-identical directories", ok,
                  f"{len(names)} files")


def test_semigroup_helper_sanity():
    # the examples of criterion 10 are what the helpers build
    assert np.array_equal(suite.cesaro_examples()["scalar"].a, semigroup([[-0.1]]).a)
