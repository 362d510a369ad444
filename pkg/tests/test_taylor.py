"""Jet arithmetic against closed-form Taylor coefficients."""

import math

import pytest

from arecorr.taylor import Jet


def test_variable_and_constant_layout() -> None:
    x = Jet.variable(0.5, 3)
    assert x.center == 0.5
    assert x.coeffs == (0.5, 1.0, 0.0, 0.0)
    c = Jet.constant(7.0, 0.5, 3)
    assert c.coeffs == (7.0, 0.0, 0.0, 0.0)
    assert x.order == 3 and x.value == 0.5


def test_polynomial_product_coefficients() -> None:
    x = Jet.variable(0.5, 4)
    p = (2.0 + x) * (3.0 - x)
    # (2+x)(3-x) = 6 + x - x^2; recentered at 0.5: 6.25 + 0*t - t^2.
    assert p.coeffs == pytest.approx((6.25, 0.0, -1.0, 0.0, 0.0), abs=1e-15)


def test_division_round_trip() -> None:
    x = Jet.variable(0.3, 6)
    u = 1.0 + x * x
    v = 2.0 - x
    w = (u * v) / v
    for a, b in zip(w.coeffs, u.coeffs):
        assert a == pytest.approx(b, abs=1e-15)


def test_reciprocal_matches_geometric_series() -> None:
    x = Jet.variable(0.0, 5)
    inv = 1.0 / (1.0 - x)
    assert inv.coeffs == pytest.approx((1.0,) * 6, abs=1e-15)


def test_sqrt_derivatives_match_closed_forms() -> None:
    x0 = 0.49
    j = Jet.variable(x0, 3).sqrt()
    assert j.derivative(0) == pytest.approx(math.sqrt(x0), abs=1e-15)
    assert j.derivative(1) == pytest.approx(0.5 / math.sqrt(x0), abs=1e-14)
    assert j.derivative(2) == pytest.approx(-0.25 * x0**-1.5, abs=1e-13)
    assert j.derivative(3) == pytest.approx(0.375 * x0**-2.5, abs=1e-12)


def test_asin_derivatives_match_closed_forms() -> None:
    x0 = 0.3
    j = Jet.variable(x0, 3).asin()
    d = 1.0 - x0 * x0
    assert j.derivative(0) == pytest.approx(math.asin(x0), abs=1e-15)
    assert j.derivative(1) == pytest.approx(d**-0.5, abs=1e-14)
    assert j.derivative(2) == pytest.approx(x0 * d**-1.5, abs=1e-13)
    assert j.derivative(3) == pytest.approx((1.0 + 2.0 * x0 * x0) * d**-2.5, abs=1e-12)


def test_power_matches_repeated_product() -> None:
    x = Jet.variable(0.7, 5)
    u = 1.0 + 2.0 * x
    assert (u**3).coeffs == (u * u * u).coeffs


def test_evaluation_tracks_function() -> None:
    j = (0.5 * Jet.variable(0.4, 10)).asin()
    for t in (-0.05, 0.0, 0.02, 0.05):
        assert j(t) == pytest.approx(math.asin(0.5 * (0.4 + t)), abs=1e-13)


def test_deriv_shifts_coefficients() -> None:
    x = Jet.variable(0.2, 4)
    p = x * x * x
    dp = p.deriv()
    assert dp.order == 3
    for t in (0.0, 0.01):
        assert dp(t) == pytest.approx(3.0 * (0.2 + t) ** 2, abs=1e-14)


def test_center_mismatch_rejected() -> None:
    with pytest.raises(ValueError):
        Jet.variable(0.0, 2) + Jet.variable(0.5, 2)


def test_division_by_zero_value_rejected() -> None:
    x = Jet.variable(0.0, 3)
    with pytest.raises(ZeroDivisionError):
        (1.0 + x) / x


def test_sqrt_and_asin_domain_checks() -> None:
    with pytest.raises(ValueError):
        Jet.variable(-1.0, 2).sqrt()
    with pytest.raises(ValueError):
        Jet.variable(1.0, 2).asin()


def test_negative_power_rejected() -> None:
    with pytest.raises(ValueError):
        Jet.variable(0.5, 2) ** -1
