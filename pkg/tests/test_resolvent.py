import cmath
import math

import numpy as np
import pytest
import scipy.integrate
from hypothesis import given
from hypothesis import strategies as st

from zerotwo.errors import AccuracyWarning, InvalidInputError, NotInResolventSetError
from zerotwo.family import GrowthBound, growth_bound_estimate
from zerotwo.linalg import op_norm
from zerotwo.resolvent import (
    QuadratureRule,
    cesaro_check,
    cesaro_integral,
    commutation_residuals,
    cosh_resolvent,
    cosine_sup,
    default_rule,
    distance_sup,
    frequency_domain_check,
    growth_resolvent_check,
    laplace_horizon,
    laplace_resolvent,
    resolvent_identity_residual,
    resolvent_via_s,
    s_bound_factor,
    s_norm_bound_check,
    s_operator,
)

from helpers import cosine, random_matrix, semigroup


def _quad_complex(fn, a, b):
    re = scipy.integrate.quad(lambda t: fn(t).real, a, b, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
    im = scipy.integrate.quad(lambda t: fn(t).imag, a, b, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
    return complex(re, im)


@given(st.integers(1, 6), st.integers(1, 4), st.integers(0, 11),
       st.floats(-2, 2), st.floats(-2, 2))
def test_quadrature_exact_on_polynomials(order, panels, degree, a, b):
    rule = QuadratureRule(panels, order)
    if degree > 2 * order - 1:
        return
    got = rule.integrate(lambda t: t**degree, a, b)
    want = (b ** (degree + 1) - a ** (degree + 1)) / (degree + 1)
    assert got == pytest.approx(want, abs=1e-11 * max(1.0, abs(b) ** (degree + 1) + abs(a) ** (degree + 1)))


def test_quadrature_oriented_and_matrix_valued():
    rule = QuadratureRule(3)
    fwd = rule.integrate(lambda t: np.array([[t, 1.0], [0.0, t * t]]), 0.0, 2.0)
    back = rule.integrate(lambda t: np.array([[t, 1.0], [0.0, t * t]]), 2.0, 0.0)
    np.testing.assert_allclose(fwd, [[2.0, 2.0], [0.0, 8.0 / 3.0]], atol=1e-14)
    np.testing.assert_allclose(back, -fwd, atol=1e-14)
    assert rule.refined() == QuadratureRule(6, 8)


def test_quadrature_rejects_empty_rule():
    with pytest.raises(InvalidInputError):
        QuadratureRule(0)


def test_default_rule_scales_with_interval():
    assert default_rule(1.0, 1.0).panels == 16
    assert default_rule(10.0, 5.0).panels == 220


def test_s_operator_scalar_closed_form(scalar_cos):
    # A = -1, lam = 1, s = 1: int_0^1 sinh(1 - t) cos t dt = (cosh 1 - cos 1) / 2
    got = s_operator(scalar_cos, 1.0, 1.0)[0, 0]
    assert got == pytest.approx((math.cosh(1.0) - math.cos(1.0)) / 2, abs=1e-13)


@pytest.mark.parametrize("lam", [0.5, 2.0, 1 + 1j, 2 - 1j, 3j])
@pytest.mark.parametrize("s", [0.25, 1.0, -0.7])
def test_s_operator_against_adaptive_quadrature(lam, s, scalar_cos):
    want = _quad_complex(lambda t: cmath.sinh(lam * (s - t)) * math.cos(t), 0.0, s)
    assert s_operator(scalar_cos, lam, s)[0, 0] == pytest.approx(want, abs=1e-12)


def test_s_operator_zero_length(scalar_cos):
    assert np.array_equal(s_operator(scalar_cos, 1.0, 0.0), np.zeros((1, 1)))


def test_s_operator_warns_on_unresolved_rule(scalar_cos):
    with pytest.warns(AccuracyWarning):
        s_operator(scalar_cos, 20.0, 2.0, QuadratureRule(1, 2))


def test_resolvent_scalar():
    rep = resolvent_via_s(cosine([[-1.0]]), 1.0, 1.0)
    assert rep.resolvent[0, 0] == pytest.approx(0.5, abs=1e-12)
    assert rep.identity_residual <= 1e-12
    assert rep.oracle_error <= 1e-12
    assert rep.bound_slack >= 0


def test_resolvent_diagonal():
    rep = resolvent_via_s(cosine(np.diag([-1.0, -4.0])), 1.0, 0.5)
    np.testing.assert_allclose(rep.resolvent, np.diag([0.5, 0.2]), atol=1e-12)


@pytest.mark.parametrize("lam", [1.0, 2.0, 1 + 1j, 2 - 1j])
def test_resolvent_random_matches_direct(lam, random_cosines):
    for fam in random_cosines:
        for s in (0.25, 1.0):
            rep = resolvent_via_s(fam, lam, s)
            direct = np.linalg.inv(lam * lam * np.eye(fam.dim) - fam.a)
            assert op_norm(rep.resolvent - direct) <= 1e-9 * op_norm(direct)
            assert resolvent_identity_residual(fam, lam, s) <= 1e-9


def test_resolvent_report_serialization():
    rep = resolvent_via_s(cosine([[-1.0]]), 1 + 1j, 0.5)
    doc = rep.to_dict()
    assert doc["lambda"] == 1 + 1j and doc["s"] == 0.5
    assert doc["resolvent"]["dim"] == 1
    assert len(rep.csv_row()) == len(rep.csv_header)


def test_commutation(random_cosines):
    for fam in random_cosines[:2]:
        sc, sa = commutation_residuals(fam, 1 + 1j, 0.5)
        assert sc <= 1e-10 and sa <= 1e-10


def test_spectral_point_is_refused():
    # A = -1, lam = i: cosh(i s) = cos s = C(s)
    fam = cosine([[-1.0]])
    with pytest.raises(NotInResolventSetError):
        cosh_resolvent(fam, 1j, 0.5)
    with pytest.raises(NotInResolventSetError):
        resolvent_via_s(fam, 1j, 0.5)


def test_resolvent_needs_nonzero_lambda(scalar_cos):
    with pytest.raises(InvalidInputError):
        resolvent_via_s(scalar_cos, 0.0, 1.0)


def test_s_bound_factor_needs_positive_real_part():
    assert s_bound_factor(1.0, 1.0) == pytest.approx(math.sinh(1.0))
    for lam in (0.0, -1.0, 2j):
        with pytest.raises(InvalidInputError):
            s_bound_factor(lam, 1.0)


@given(st.floats(-5, 5), st.floats(1e-3, 5), st.floats(-5, 5))
def test_elementary_sinh_bound(s, re, im):
    lam = complex(re, im)
    assert s_bound_factor(lam, s) <= 2 * abs(s) * math.exp(abs(s * re)) * (1 + 1e-12) + 1e-300


def test_s_norm_bound(random_cosines):
    for fam in random_cosines:
        for lam in (1.0, 1 + 1j, 2 - 1j):
            lhs, rhs = s_norm_bound_check(fam, lam, 0.5)
            assert lhs <= rhs + 1e-8


def test_cosine_sup(scalar_cos):
    assert cosine_sup(scalar_cos, 2.0) == pytest.approx(1.0)
    assert cosine_sup(cosine([[1.0]]), 2.0) == pytest.approx(math.cosh(2.0))


def test_growth_resolvent_bound(random_cosines, rng):
    for fam in random_cosines:
        gb = growth_bound_estimate(fam, 10.0, 201)
        for _ in range(10):
            lam = complex(gb.omega + 0.5 + rng.uniform(0, 4), rng.uniform(-10, 10))
            lhs, rhs = growth_resolvent_check(fam, lam, gb)
            assert lhs <= rhs + 1e-6
        with pytest.raises(InvalidInputError):
            growth_resolvent_check(fam, gb.omega, gb)


def test_laplace_horizon():
    gb = GrowthBound(1.0, 0.0)
    assert laplace_horizon(1.0, gb) == pytest.approx(10 * math.log(10))
    with pytest.raises(InvalidInputError):
        laplace_horizon(-0.5, gb)


@pytest.mark.parametrize("lam", [1.0, 10.0, 100.0])
def test_laplace_scalar(lam):
    sg = semigroup([[-0.1]])
    got = laplace_resolvent(sg, lam)[0, 0]
    assert got == pytest.approx(1.0 / (lam + 0.1), rel=1e-8)


def test_laplace_random_stable(rng):
    a = random_matrix(rng, 8, 1.0) - 2.0 * np.eye(8)
    sg = semigroup(a)
    for lam in (0.5, 1 + 2j):
        direct = np.linalg.inv(lam * np.eye(8) - a)
        got = laplace_resolvent(sg, lam)
        assert op_norm(got - direct) <= 1e-8 * op_norm(direct)


def test_laplace_rejects_short_horizon():
    with pytest.raises(InvalidInputError):
        laplace_resolvent(semigroup([[-0.1]]), 1.0, horizon=5.0)


def test_frequency_domain_scalar():
    sg = semigroup([[-0.1]])
    r = distance_sup(sg, 50.0, 2001)
    assert r == pytest.approx(1 - math.exp(-5.0))
    chk = frequency_domain_check(sg, 1.0, r)
    assert chk.shifted_resolvent_dist == pytest.approx(0.1 / 1.1)
    assert chk.scaled_operator_norm == pytest.approx(1.1)
    assert chk.inverse_bound == pytest.approx(1 / (1 - r))
    assert frequency_domain_check(sg, 1.0, 1.0).inverse_bound is None


def test_cesaro_closed_forms(nilpotent):
    np.testing.assert_allclose(cesaro_integral(semigroup(nilpotent), 2.0), [[2.0, 2.0], [0.0, 2.0]],
                               atol=1e-13)
    b = cesaro_integral(semigroup([[-0.1]]), 1.0)[0, 0]
    assert b == pytest.approx((1 - math.exp(-0.1)) / 0.1, abs=1e-14)


def test_cesaro_check_scalar():
    rep = cesaro_check(semigroup([[-0.1]]), 1.0)
    assert rep.identity_residual <= 1e-14
    assert rep.inv_norm == pytest.approx(0.1 / (1 - math.exp(-0.1)))
    assert rep.bound == pytest.approx(math.exp(5.0))
    assert rep.inv_norm <= rep.bound


def test_cesaro_check_nilpotent_and_zero(nilpotent):
    rep = cesaro_check(semigroup(nilpotent), 2.0)
    assert rep.bound is None and rep.r == pytest.approx(50.0)
    assert rep.identity_residual <= 1e-12
    zero = cesaro_check(semigroup(np.zeros((2, 2))), 0.5)
    assert zero.r == 0.0 and zero.inv_norm == pytest.approx(2.0) and zero.bound == pytest.approx(2.0)


def test_cesaro_needs_positive_time(nilpotent):
    with pytest.raises(InvalidInputError):
        cesaro_check(semigroup(nilpotent), 0.0)
