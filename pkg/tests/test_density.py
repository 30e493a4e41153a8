import math

import numpy as np
import pytest
from scipy.special import gamma

from levygeo.bernstein import BernsteinFn
from levygeo.density import (
    GridSpec,
    closed_form,
    density_at,
    density_slice,
    diagonal_comparability,
    diagonal_direct,
    diagonal_volume_formula,
    invert_fourier,
    stable_ratio_constant,
    subordinate_diagonal,
    suggested_h,
)
from levygeo.errors import NonIntegrable, UnsupportedT, WindowTooSmall
from levygeo.exponents import CharExponent, compose

G = CharExponent.gaussian()  # |xi|^2 / 2
CAT_1D = [
    G,
    CharExponent.cauchy(),
    CharExponent.stable(0.75),
    CharExponent.stable(1.5),
    CharExponent.meixner(),
    CharExponent.relativistic(),
    CharExponent.sinh_ratio(),
    CharExponent.gh(1.0, 1.0, -0.5),
]


def _grid_for(exp, t):
    return GridSpec(h=min(0.05, 0.9 * suggested_h(exp, t)), L=40.0)


@pytest.mark.parametrize(
    "exp,exact,tol",
    [
        (CharExponent.cauchy(), lambda x: 1 / (math.pi * (1 + x * x)), 1e-8),
        (G, lambda x: np.exp(-x * x / 2) / math.sqrt(2 * math.pi), 1e-10),
        (CharExponent.meixner(), lambda x: 1 / (2 * np.cosh(math.pi * x / 2)), 1e-8),
    ],
    ids=["cauchy", "gaussian", "meixner"],
)
def test_invert_fourier_examples(exp, exact, tol):
    d = invert_fourier(exp, 1.0, GridSpec(0.01, 40.0))
    sel = np.abs(d.x) <= 10
    assert np.max(np.abs(d.values[sel] - exact(d.x[sel]))) < tol


@pytest.mark.parametrize("exp", CAT_1D, ids=lambda e: f"{e.kind}{e.alpha if e.kind == 'stable' else ''}")
@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_grid_invariants(exp, t):
    d = invert_fourier(exp, t, _grid_for(exp, t))
    assert d.mass == pytest.approx(1.0, abs=1e-6)
    assert np.array_equal(d.values, d.values[::-1])
    assert np.argmax(d.values) == d.x.size // 2
    assert d.aliasing_bound >= 0


def test_window_too_small_suggests_spacing():
    with pytest.raises(WindowTooSmall) as exc:
        invert_fourier(CharExponent.cauchy(), 1.0, GridSpec(h=0.5, L=10))
    h = exc.value.suggested_h
    assert invert_fourier(CharExponent.cauchy(), 1.0, GridSpec(h=h, L=10)).values.size > 0


def test_nonintegrable_heavy_exponents():
    with pytest.raises(NonIntegrable):
        invert_fourier(CharExponent.logcauchy(), 0.5)
    with pytest.raises(NonIntegrable):
        diagonal_direct(CharExponent.logcauchy(), 0.5)


def test_density_at_matches_grid():
    e = CharExponent.stable(1.5)
    d = invert_fourier(e, 1.0, GridSpec(0.05, 20.0))
    pts = d.x[::37]
    assert np.allclose(density_at(e, 1.0, pts), d.values[::37], atol=1e-12)


def test_closed_form_examples():
    assert closed_form("meixner", 1.0, 0.0) == pytest.approx(0.5, rel=1e-13)
    assert closed_form("cauchy", 1.0, 1.0) == pytest.approx(1 / (2 * math.pi), rel=1e-15)
    assert closed_form("sinh2", 2.0, 1e-9) == pytest.approx(math.pi / 6, rel=1e-10)
    with pytest.raises(UnsupportedT):
        closed_form("sinh2", 1.0, 0.0)


@pytest.mark.parametrize(
    "exp,expected",
    [
        (G, 1 / math.sqrt(2 * math.pi)),
        (CharExponent.cauchy(), 1 / math.pi),
        (CharExponent.stable(1.5), gamma(1 + 2 / 3) / math.pi),
        (CharExponent.meixner(), 0.5),
    ],
    ids=["gaussian", "cauchy", "stable1.5", "meixner"],
)
def test_diagonal_examples(exp, expected):
    assert diagonal_direct(exp, 1.0) == pytest.approx(expected, rel=1e-11)
    assert diagonal_volume_formula(exp, 1.0) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize(
    "exp",
    CAT_1D + [CharExponent.logcauchy(), CharExponent.cauchy(dim=2), CharExponent.sum_aniso(1.0, 1.5)],
    ids=lambda e: f"{e.kind}{e.dim}",
)
@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_diagonal_consistency(exp, t):
    if exp.kind == "logcauchy" and t == 0.5:
        with pytest.raises(NonIntegrable):
            diagonal_direct(exp, t)
        return
    a = diagonal_direct(exp, t)
    b = diagonal_volume_formula(exp, t)
    assert abs(a - b) <= 1e-8 * (1 + a)


def test_comparability_tables():
    ts = np.geomspace(1e-3, 1e3, 7)
    tab = diagonal_comparability(CharExponent.stable(1.0), ts)
    assert tab.tag == "DOUBLING"
    assert np.allclose(tab.ratio, stable_ratio_constant(1.0), rtol=1e-10)
    tab = diagonal_comparability(G, ts, ball_exponent=CharExponent.gaussian(c=1.0))
    assert np.allclose(tab.ratio, 1 / math.sqrt(8 * math.pi), rtol=1e-10)
    tab = diagonal_comparability(CharExponent.logcauchy(), [0.8, 1.0, 2.0, 10.0, 100.0])
    assert tab.tag == "NON_DOUBLING"
    assert tab.ratio.max() / tab.ratio.min() > 1.5


@pytest.mark.parametrize(
    "base,t,expected,tol",
    [
        (CharExponent.gaussian(c=1.0), 1.0, 1 / math.pi, 1e-7),
        (CharExponent.cauchy(), 1.0, 2 / math.pi, 1e-6),
        (CharExponent.gaussian(c=1.0), 2.0, 1 / (2 * math.pi), 1e-7),
    ],
)
def test_subordinate_diagonal(base, t, expected, tol):
    res = subordinate_diagonal(base, t)
    assert res.value == pytest.approx(expected, rel=tol)
    assert res.rel_diff < tol


def test_subordinate_nonintegrable():
    with pytest.raises(NonIntegrable):
        subordinate_diagonal(CharExponent.logcauchy(), 0.5)


def test_product_law_and_rotational_cauchy_2d():
    t = 1.0
    d = invert_fourier(CharExponent.sum_aniso(1.0, 1.0), t, GridSpec(0.05, 20.0))
    X, Y = np.meshgrid(d.x, d.x, indexing="ij")
    prod = t * t / (math.pi**2 * (X * X + t * t) * (Y * Y + t * t))
    assert np.max(np.abs(d.values - prod)) < 1e-7
    assert d.mass == pytest.approx(1.0, abs=1e-6)
    d = invert_fourier(CharExponent.cauchy(dim=2), t, GridSpec(0.05, 20.0))
    rot = t / (2 * math.pi * (X * X + Y * Y + t * t) ** 1.5)
    assert np.max(np.abs(d.values - rot)) < 1e-6
    assert np.array_equal(d.values, d.values[::-1, ::-1])
    assert np.max(np.abs(d.values - d.values.T)) < 1e-15


def test_density_slice_small_x_agrees_with_closed_form():
    x = np.array([0.0, 3.0])
    got = density_slice(CharExponent.cauchy(dim=2), 1.0, x)
    assert np.allclose(got, 1 / (2 * math.pi * (x * x + 1) ** 1.5), rtol=1e-8)


def test_composite_diagonal_matches_stable():
    e = compose(BernsteinFn.power(0.75), CharExponent.gaussian(c=1.0))
    assert diagonal_direct(e, 1.0) == pytest.approx(diagonal_direct(CharExponent.stable(1.5), 1.0), rel=1e-12)
