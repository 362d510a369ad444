"""Closed-form moments, their derivatives, and the quadrature variance."""

import math

import pytest

from arecorr.corrmath import (
    RHO_CAP,
    Rho,
    dsigma_s2,
    isin_integrand,
    moments_r,
    moments_s,
    moments_t,
    mu_s_finite_n,
    sigma_s2,
    sigma_s2_jet,
)
from arecorr.errors import DomainError

# Frozen from this package's quadrature at abs_tol 1e-14, cross-checked
# against a 2**20-panel Simpson evaluation of each arcsine integral.
SIGMA_S2_HALF = 0.63087331600121588


def test_rho_validation() -> None:
    assert Rho(0.5).value == 0.5
    assert Rho(1.0, limit=True).value == 1.0
    with pytest.raises(DomainError):
        Rho(1.0)
    with pytest.raises(DomainError):
        Rho(-1.5, limit=True)
    with pytest.raises(DomainError):
        Rho(math.nan)


def test_pearson_moments_closed_forms() -> None:
    for rho in (-0.9, -0.3, 0.0, 0.4, 0.8):
        ms = moments_r(rho)
        assert ms.mu == rho
        assert ms.dmu == 1.0
        assert ms.sigma2 == pytest.approx((1 - rho * rho) ** 2, abs=1e-15)
        assert ms.dsigma2 == pytest.approx(-4 * rho * (1 - rho * rho), abs=1e-15)


def test_kendall_moments_closed_forms() -> None:
    ms = moments_t(0.0)
    assert ms.mu == 0.0
    assert ms.sigma2 == pytest.approx(4.0 / 9.0, abs=1e-15)
    ms = moments_t(0.5)
    assert ms.mu == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert ms.dmu == pytest.approx(2.0 / (math.pi * math.sqrt(0.75)), abs=1e-15)
    pi2 = math.pi**2
    assert ms.sigma2 == pytest.approx(
        4.0 / 9.0 - (16.0 / pi2) * math.asin(0.25) ** 2, abs=1e-15
    )


def test_spearman_mean_and_variance_values() -> None:
    ms = moments_s(0.0)
    assert ms.mu == 0.0
    assert ms.sigma2 == pytest.approx(1.0, abs=1e-13)
    ms = moments_s(0.5)
    assert ms.mu == pytest.approx((6.0 / math.pi) * math.asin(0.25), abs=1e-15)
    assert ms.sigma2 == pytest.approx(SIGMA_S2_HALF, abs=1e-12)
    assert sigma_s2(0.5) == pytest.approx(SIGMA_S2_HALF, abs=1e-12)


def test_spearman_variance_even_derivative_odd() -> None:
    for rho in (0.2, 0.7):
        plus = moments_s(rho)
        minus = moments_s(-rho)
        assert plus.sigma2 == minus.sigma2
        assert plus.dsigma2 == -minus.dsigma2
        assert plus.dmu == minus.dmu
        assert plus.mu == -minus.mu


def test_derivatives_match_central_differences() -> None:
    h = 1e-6
    for maker in (moments_r, moments_t, moments_s):
        for rho in (-0.9, -0.5, -0.1, 0.1, 0.5, 0.9):
            ms = maker(rho)
            fd_mu = (maker(rho + h).mu - maker(rho - h).mu) / (2 * h)
            fd_s2 = (maker(rho + h).sigma2 - maker(rho - h).sigma2) / (2 * h)
            assert ms.dmu == pytest.approx(fd_mu, rel=1e-6)
            assert ms.dsigma2 == pytest.approx(fd_s2, rel=1e-6, abs=1e-8)


def test_finite_n_mean_interpolates() -> None:
    rho = 0.5
    mu_s = moments_s(rho).mu
    mu_t = moments_t(rho).mu
    for n in (2, 3, 10, 100):
        got = mu_s_finite_n(rho, n)
        want = ((n - 2) * mu_s + 3.0 * mu_t) / (n + 1)
        assert got == pytest.approx(want, abs=1e-15)
    assert mu_s_finite_n(rho, 2) == pytest.approx(mu_t, abs=1e-15)
    assert mu_s_finite_n(rho, 10**7) == pytest.approx(mu_s, abs=1e-6)
    with pytest.raises(DomainError):
        mu_s_finite_n(rho, 1)


def test_integrand_values_and_domain() -> None:
    # At u = 1 each arcsine argument has an elementary value.
    v1 = isin_integrand(1, 1.0)
    assert v1 == pytest.approx(math.asin(0.25) / math.sqrt(3.0), abs=1e-15)
    v2 = isin_integrand(2, 1.0)
    assert v2 == pytest.approx(math.asin(0.25) / math.sqrt(3.0), abs=1e-15)
    assert isin_integrand(3, 0.0) == 0.0
    assert isin_integrand(4, 0.0) == 0.0
    with pytest.raises(DomainError):
        isin_integrand(5, 0.5)
    with pytest.raises(DomainError):
        isin_integrand(1, 1.5)


def test_sigma_jet_matches_value_and_derivative() -> None:
    x = 0.3
    j = sigma_s2_jet(x, 3)
    assert j.coeffs[0] == pytest.approx(sigma_s2(x), abs=1e-13)
    assert j.coeffs[1] == pytest.approx(dsigma_s2(x), abs=1e-11)


def test_limit_queries_are_capped() -> None:
    ms = moments_s(Rho(1.0, limit=True))
    assert math.isfinite(ms.sigma2) and math.isfinite(ms.dsigma2)
    # The cap keeps the query inside the open interval.
    assert abs(moments_r(Rho(-1.0, limit=True)).mu) == RHO_CAP


def test_spearman_variance_collapses_toward_one() -> None:
    assert 0.0 <= sigma_s2(1.0 - 1e-4) < 1e-2


def test_out_of_range_rho_rejected() -> None:
    with pytest.raises(DomainError):
        moments_t(1.0)
    with pytest.raises(DomainError):
        moments_s(-1.2)
