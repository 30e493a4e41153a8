import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import kv, loggamma

from levygeo.errors import NonpositiveArgument
from levygeo.special import (
    abs_gamma_sq,
    bessel_k,
    bessel_k_asymptotic_route,
    bessel_k_integral_route,
    bessel_k_scaled,
    log_bessel_k,
    log_gamma_complex,
)

orders = st.floats(-6.0, 6.0)
args = st.floats(0.05, 200.0)


@pytest.mark.parametrize("nu,x", [(0.0, 0.1), (0.5, 2.0), (1.0, 1.0), (2.5, 10.0), (-1.5, 3.0), (4.0, 39.9), (1.0, 40.1)])
def test_bessel_k_matches_scipy(nu, x):
    assert bessel_k(nu, x) == pytest.approx(kv(nu, x), rel=1e-12)


def test_bessel_k_half_order_closed_form():
    x = np.linspace(0.1, 30.0, 50)
    exact = np.sqrt(np.pi / (2 * x)) * np.exp(-x)
    assert np.allclose(bessel_k(0.5, x), exact, rtol=1e-13, atol=0)


@given(orders, args)
def test_bessel_k_even_in_order(nu, x):
    assert bessel_k(nu, x) == bessel_k(-nu, x)


@given(st.floats(-4.0, 4.0), st.floats(0.1, 60.0))
def test_bessel_k_recurrence(nu, x):
    lhs = bessel_k(nu + 1, x) - bessel_k(nu - 1, x)
    rhs = 2 * nu / x * bessel_k(nu, x)
    scale = bessel_k(abs(nu) + 1, x)
    assert abs(lhs - rhs) <= 1e-11 * scale


@pytest.mark.parametrize("nu", [0.0, 0.75, 2.0, 5.5])
def test_routes_agree_at_switch(nu):
    x = 40.0
    a = bessel_k_integral_route(nu, x)
    b = bessel_k_asymptotic_route(nu, x)
    assert a == pytest.approx(b, rel=1e-12)


def test_scaled_and_log_survive_underflow():
    mant, ex = bessel_k_scaled(1.0, 2000.0)
    ref = mpmath.besselk(1, 2000)
    assert math.log(mant) + ex == pytest.approx(float(mpmath.log(ref)), rel=1e-14)
    assert log_bessel_k(1.0, 2000.0) == pytest.approx(float(mpmath.log(ref)), rel=1e-14)
    assert bessel_k(1.0, 2000.0) == 0.0


def test_bessel_k_rejects_nonpositive():
    with pytest.raises(NonpositiveArgument):
        bessel_k(1.0, 0.0)


@given(st.floats(0.05, 50.0), st.floats(-50.0, 50.0))
def test_log_gamma_matches_scipy(re, im):
    z = complex(re, im)
    assert abs(log_gamma_complex(z) - loggamma(z)) <= 1e-12 * max(1.0, abs(loggamma(z)))


@given(st.floats(0.05, 30.0), st.floats(0.0, 30.0))
def test_log_gamma_conjugate_symmetry(re, im):
    z = complex(re, im)
    assert log_gamma_complex(z.conjugate()) == pytest.approx(log_gamma_complex(z).conjugate(), abs=1e-13)


def test_log_gamma_recurrence_and_values():
    z = np.array([0.3 + 0.2j, 1.7 - 4j, 12.5 + 1j])
    assert np.allclose(log_gamma_complex(z + 1) - log_gamma_complex(z), np.log(z), atol=1e-13)
    assert abs(log_gamma_complex(1.0)) < 1e-13
    assert log_gamma_complex(0.5).real == pytest.approx(0.5 * math.log(math.pi), rel=1e-13)
    # |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
    y = np.linspace(-3, 3, 13)
    assert np.allclose(abs_gamma_sq(0.5 + 1j * y), np.pi / np.cosh(np.pi * y), rtol=1e-13)
