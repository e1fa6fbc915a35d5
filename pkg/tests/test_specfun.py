import math

import numpy as np
import pytest
from scipy import special

from starlab.errors import DomainError, NonConvergence
from starlab.specfun import LaguerreSpec, SeriesConfig, bessel_i, hyp0f1, laguerre, log_gamma


@pytest.mark.parametrize("n", [0, 1, 2, 5, 12])
@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 3.0, -0.5])
def test_laguerre_matches_scipy(n, alpha):
    x = np.linspace(0, 6, 25)
    np.testing.assert_allclose(laguerre(n, alpha, x), special.eval_genlaguerre(n, alpha, x), rtol=1e-12, atol=1e-12)


def test_laguerre_scalar_and_spec():
    assert isinstance(laguerre(3, 1, 0.7), float)
    assert laguerre(*LaguerreSpec(2, 0.0, 1.0)) == pytest.approx(-0.5)
    # L_n^alpha(0) = C(n + alpha, n)
    assert laguerre(4, 2, 0.0) == pytest.approx(math.comb(6, 4))


def test_laguerre_negative_integer_alpha():
    # L_n^{-l}(x) = (-x)^l (n-l)!/n! L_{n-l}^{l}(x)
    x = 0.8
    n, l = 3, 2
    rhs = (-x) ** l * math.factorial(n - l) / math.factorial(n) * laguerre(n - l, l, x)
    assert laguerre(n, -l, x) == pytest.approx(rhs, abs=1e-14)


def test_laguerre_rejects_bad_degree():
    with pytest.raises(DomainError):
        laguerre(-1, 0, 1.0)
    with pytest.raises(DomainError):
        laguerre(1.5, 0, 1.0)


@pytest.mark.parametrize("b", [0.5, 1.0, 2.5, 7.0])
@pytest.mark.parametrize("x", [0.0, 0.3, 2.0, 15.0, -4.0])
def test_hyp0f1_matches_scipy(b, x):
    assert hyp0f1(b, x) == pytest.approx(special.hyp0f1(b, x), rel=1e-12)


def test_hyp0f1_domain_and_convergence():
    with pytest.raises(DomainError):
        hyp0f1(0, 1.0)
    with pytest.raises(DomainError):
        hyp0f1(-2, 1.0)
    with pytest.raises(NonConvergence):
        hyp0f1(1.0, 1e4, SeriesConfig(max_terms=5))


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 2.5, 4.0, -2.0])
@pytest.mark.parametrize("y", [0.1, 1.0, 3.7, 10.0])
def test_bessel_i_matches_scipy(nu, y):
    assert bessel_i(nu, y) == pytest.approx(special.iv(nu, y), rel=1e-12)


def test_bessel_i_edges():
    assert bessel_i(0, 0.0) == 1.0
    assert bessel_i(1.5, 0.0) == 0.0
    with pytest.raises(DomainError):
        bessel_i(1.0, -1.0)


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 3.3, 50.0])
def test_log_gamma(x):
    assert log_gamma(x) == pytest.approx(special.gammaln(x), rel=1e-14, abs=1e-14)
    with pytest.raises(DomainError):
        log_gamma(0.0)


def test_series_config_validation():
    with pytest.raises(ValueError):
        SeriesConfig(rel_tol=0)
    with pytest.raises(ValueError):
        SeriesConfig(max_terms=0)


def test_documented_values():
    assert laguerre(0, 3, 7.2) == 1.0
    assert laguerre(1, 0, 1.0) == 0.0
    assert laguerre(2, 0, 1.0) == pytest.approx(-0.5)
    assert hyp0f1(3.0, 0.0) == 1.0
    partial = sum(1 / math.factorial(m) ** 2 for m in range(30))
    assert hyp0f1(1.0, 1.0) == pytest.approx(partial, rel=1e-14)
    assert bessel_i(2, 4.0) == pytest.approx(4.0 / math.gamma(3) * hyp0f1(3.0, 4.0), rel=1e-14)
    assert bessel_i(1, 2.0) == pytest.approx(1.590636854637329, rel=1e-13)
    assert log_gamma(1.0) == 0.0
    assert log_gamma(5.0) == pytest.approx(math.log(24))
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi))


@pytest.mark.parametrize("alpha", [0.0, 1.5, -0.5, 4.0])
def test_laguerre_recurrence_residual(alpha):
    x = np.linspace(-20, 20, 41)
    for n in range(1, 30):
        lhs = (n + 1) * laguerre(n + 1, alpha, x) - (2 * n + 1 + alpha - x) * laguerre(n, alpha, x) + (n + alpha) * laguerre(n - 1, alpha, x)
        scale = np.maximum.reduce([np.abs((n + 1) * laguerre(n + 1, alpha, x)), np.abs((n + alpha) * laguerre(n - 1, alpha, x)), np.ones_like(x)])
        assert np.max(np.abs(lhs) / scale) < 1e-12


@pytest.mark.parametrize("b", [2.5, 3.0, 6.2])
@pytest.mark.parametrize("x", [0.5, 3.0, 12.0])
def test_hyp0f1_contiguous_relation(b, x):
    lhs = hyp0f1(b - 1, x) - hyp0f1(b, x)
    rhs = x / (b * (b - 1)) * hyp0f1(b + 1, x)
    assert lhs == pytest.approx(rhs, rel=1e-10)


@pytest.mark.parametrize("nu", [0, 1, 2, 5])
@pytest.mark.parametrize("y", [0.5, 2.0, 6.0])
def test_bessel_i_integral_representation(nu, y):
    theta = np.linspace(0, np.pi, 2001)
    vals = np.exp(y * np.cos(theta)) * np.cos(nu * theta) / np.pi
    integral = np.sum((vals[1:] + vals[:-1]) * np.diff(theta)) / 2
    assert bessel_i(nu, y) == pytest.approx(integral, rel=1e-8)
