"""Adaptive Gauss-Kronrod integration: exactness, error control, limits."""

import math

import pytest

from arecorr.corrmath import isin_integrand
from arecorr.errors import NoConvergence, NonFinite
from arecorr.quadrature import integrate

# Frozen reference for the second arcsine integral on [0, 1], computed
# with composite Simpson on 2**20 panels plus Richardson extrapolation.
I2_REFERENCE = 0.054831135561607548


def test_polynomial_exact_in_one_panel() -> None:
    res = integrate(lambda u: u**4, 0.0, 1.0, 1e-12)
    assert res.value == pytest.approx(0.2, abs=1e-15)
    assert res.evaluations == 15


def test_sine_integral() -> None:
    res = integrate(math.sin, 0.0, math.pi, 1e-12)
    assert res.value == pytest.approx(2.0, abs=1e-13)
    assert res.err_estimate >= abs(res.value - 2.0)


def test_error_estimate_envelopes_true_error() -> None:
    for f, lo, hi, truth in (
        (math.exp, 0.0, 1.0, math.e - 1.0),
        (lambda u: 1.0 / (1.0 + u * u), 0.0, 1.0, math.pi / 4.0),
        (lambda u: math.cos(10.0 * u), 0.0, 1.0, math.sin(10.0) / 10.0),
    ):
        res = integrate(f, lo, hi, 1e-12)
        assert abs(res.value - truth) <= max(res.err_estimate, 1e-15)
        assert abs(res.value - truth) <= 1e-12


def test_arcsine_integral_matches_frozen_reference() -> None:
    res = integrate(lambda u: isin_integrand(2, u), 0.0, 1.0, 1e-13)
    assert res.value == pytest.approx(I2_REFERENCE, abs=1e-14)


def test_integrable_endpoint_singularity() -> None:
    res = integrate(lambda u: 1.0 / math.sqrt(u), 1e-300, 1.0, 1e-9)
    assert res.value == pytest.approx(2.0, abs=1e-8)
    assert res.evaluations > 15
    assert res.evaluations % 15 == 0


def test_degenerate_interval_is_zero() -> None:
    res = integrate(math.sin, 0.7, 0.7, 1e-12)
    assert res.value == 0.0
    assert res.evaluations == 15


def test_unreachable_tolerance_raises_no_convergence() -> None:
    # Below the rounding floor of the error estimator the subdivision
    # budget runs out; this must fail loudly, not return a bad value.
    with pytest.raises(NoConvergence):
        integrate(math.exp, 0.0, 1.0, 1e-18)


def test_non_finite_integrand_raises() -> None:
    with pytest.raises(NonFinite):
        integrate(lambda u: math.inf if u < 0.5 else 1.0, 0.0, 1.0, 1e-6)
    with pytest.raises(NonFinite):
        integrate(lambda u: math.nan, 0.0, 1.0, 1e-6)


def test_invalid_arguments_rejected() -> None:
    with pytest.raises(ValueError):
        integrate(math.sin, 1.0, 0.0, 1e-12)
    with pytest.raises(ValueError):
        integrate(math.sin, 0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        integrate(math.sin, 0.0, math.inf, 1e-12)
