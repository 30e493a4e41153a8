import math

import numpy as np
import pytest

from levygeo.errors import QuadratureFailure
from levygeo.quadrature import cosine_transform, exp_sinh, gauss_laguerre, gl_panels, oscillatory_edges


def test_gl_panels_integrates_polynomials_exactly():
    x, w = gl_panels([0.0, 0.5, 2.0, 3.0], order=8)
    assert np.dot(w, x**15) == pytest.approx(3.0**16 / 16, rel=1e-14)


def test_oscillatory_edges_shape():
    e = oscillatory_edges(100.0, 10.0)
    assert e[0] == 0.0 and e[-1] == 100.0
    assert np.all(np.diff(e) > 0)
    assert np.max(np.diff(e)) <= 2 * math.pi / 10.0 + 1e-12


def test_gauss_laguerre_moments():
    x, w = gauss_laguerre(64)
    assert np.dot(w, x**5) == pytest.approx(120.0, rel=1e-12)


@pytest.mark.parametrize(
    "f,exact",
    [
        (lambda x: np.exp(-x), 1.0),
        (lambda x: 1.0 / (1.0 + x * x), math.pi / 2),
        (lambda x: x**-0.5 * np.exp(-x), math.sqrt(math.pi)),
    ],
)
def test_exp_sinh(f, exact):
    val, err = exp_sinh(f)
    assert val == pytest.approx(exact, rel=1e-11)
    assert err < 1e-9


def test_exp_sinh_reports_failure():
    with pytest.raises(QuadratureFailure):
        exp_sinh(lambda x: 1.0 / (1.0 + x), max_level=3)


@pytest.mark.parametrize("x", [0.0, 0.5, 3.0])
def test_cosine_transform_fast_and_slow_decay(x):
    # int_0^inf e^{-u} cos(xu) du = 1/(1+x^2); int_0^inf cos(xu)/(1+u^2) du = pi/2 e^{-x}
    assert cosine_transform(lambda u: math.exp(-u), x) == pytest.approx(1 / (1 + x * x), abs=1e-12)
    assert cosine_transform(lambda u: 1 / (1 + u * u), x) == pytest.approx(math.pi / 2 * math.exp(-x), abs=1e-9)
