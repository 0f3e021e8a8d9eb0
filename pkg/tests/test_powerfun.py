"""Power-function families: values, derivatives, axiom checks, config codec."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from acdd import powerfun as pf
from acdd.errors import DomainError, NotParameterized

ALL_SPECS = [
    pf.poly(0.0, 0.0, 1.0),            # x^2
    pf.poly(0.0, 1.0, 1.0),            # x^2 + x
    pf.poly(0.0, 0.5, 1.0),            # x^2 + x/2
    pf.poly(0.0, 2.0, -2.0),           # -2x^2 + 2x
    pf.poly(0.0, 4.0, -4.0),           # -4x^2 + 4x
    pf.poly(1.0, -1.0),                # 1 - x
    pf.poly(1.0, -4.0, 4.0),           # (1 - 2x)^2
    pf.poly(2.0, -4.0, 2.0),           # 2(1 - x)^2
    pf.logistic(-10.0, 5.0),
    pf.centered_quadratic(3.0),
    pf.linear_minus_quadratic(2.5),
]


def test_hump_value_and_slope():
    v, d = pf.evaluate(pf.poly(0.0, 4.0, -4.0), 0.7)
    assert abs(v - 0.84) <= 1e-12
    assert abs(d - (-1.6)) <= 1e-12


def test_centered_quadratic_at_symmetric_root():
    v, d = pf.evaluate(pf.centered_quadratic(3.0), 0.5)
    assert v == 0.0 and d == 0.0


def test_centered_quadratic_value_and_slope():
    v, d = pf.evaluate(pf.centered_quadratic(3.0), 0.7)
    assert abs(v - 0.36) <= 1e-12
    assert abs(d - 3.6) <= 1e-12


def test_centered_quadratic_nu_derivatives():
    dv, dd = pf.evaluate_nu_derivatives(pf.centered_quadratic(3.0), 0.7)
    assert abs(dv - 0.24) <= 1e-12
    assert abs(dd - 2.4) <= 1e-12


def test_linear_minus_quadratic_nu_derivatives_at_zero():
    dv, dd = pf.evaluate_nu_derivatives(pf.linear_minus_quadratic(2.0), 0.0)
    assert dv == 0.0 and dd == 1.0


def test_nu_free_family_raises():
    with pytest.raises(NotParameterized):
        pf.evaluate_nu_derivatives(pf.poly(0.0, 4.0, -4.0), 0.5)


def test_domain_error_outside_unit_interval():
    with pytest.raises(DomainError):
        pf.evaluate(pf.poly(0.0, 1.0), 1.5)


def test_identity_polynomial():
    spec = pf.poly(0.0, 1.0)
    for x in np.linspace(0.0, 1.0, 11):
        v, d = pf.evaluate(spec, x)
        assert v == pytest.approx(x, abs=0) and d == 1.0


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.family + str(s.coefficients))
def test_analytic_x_derivative_matches_finite_difference(spec):
    xs = np.linspace(0.001, 0.999, 101)
    analytic = spec.deriv(xs)
    fd = pf.finite_difference_deriv(spec, xs)
    np.testing.assert_allclose(analytic, fd, atol=1e-5)


@pytest.mark.parametrize(
    "spec", [pf.centered_quadratic(3.0), pf.linear_minus_quadratic(2.5)],
    ids=["centered", "linquad"])
def test_analytic_nu_derivatives_match_finite_difference(spec):
    xs = np.linspace(0.0, 1.0, 101)
    h = 1e-6
    up, dn = spec.with_nu(spec.nu + h), spec.with_nu(spec.nu - h)
    np.testing.assert_allclose(
        spec.dvalue_dnu(xs), (up.value(xs) - dn.value(xs)) / (2 * h), atol=1e-5)
    np.testing.assert_allclose(
        spec.dderiv_dnu(xs), (up.deriv(xs) - dn.deriv(xs)) / (2 * h), atol=1e-5)


def test_axioms_hold_for_square_vs_linear():
    report = pf.validate_axioms(pf.poly(0.0, 0.0, 1.0), pf.poly(1.0, -1.0), 101)
    assert report.f_zero_ok and report.g_one_ok
    assert not report.positivity_violations


def test_axioms_flag_nonzero_f_at_origin():
    report = pf.validate_axioms(pf.poly(1.0, 0.0, 1.0), pf.poly(1.0, -1.0), 101)
    assert not report.f_zero_ok


def test_axioms_flag_shifted_square_g():
    # (1-2x)^2 has g(1) = 1, which the engine must still run
    report = pf.validate_axioms(pf.poly(0.0, 2.0, -2.0), pf.poly(1.0, -4.0, 4.0), 101)
    assert not report.g_one_ok


def test_config_round_trip():
    for spec in ALL_SPECS:
        assert pf.from_config(pf.to_config(spec)) == spec


def test_config_rejects_unknown_keys():
    with pytest.raises((ValueError, KeyError)):
        pf.from_config({"family": "polynomial", "coefficients": [0, 1], "bogus": 1})


@given(st.floats(min_value=0.0, max_value=1.0),
       st.floats(min_value=0.5, max_value=8.0))
def test_centered_quadratic_nonnegative(x, nu):
    v, _ = pf.evaluate(pf.centered_quadratic(nu), x)
    assert v >= 0.0
