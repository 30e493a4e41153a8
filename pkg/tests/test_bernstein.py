import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from levygeo.bernstein import (
    BernsteinFn,
    bf_inverse,
    doubling_criterion_bf,
    eval_bf,
    is_bernstein,
    is_completely_monotone,
    stable_half_subordinator_density,
)
from levygeo.errors import NonpositiveArgument, OutOfRange, ParamOutOfRange
from levygeo.verdicts import FAIL, PASS

CM_GRID = np.geomspace(1e-2, 1e2, 41)
BF_GRID = np.geomspace(1e-3, 1e3, 49)
CATALOG = [
    BernsteinFn.power(0.5),
    BernsteinFn.power(0.25),
    BernsteinFn.power(1.0),
    BernsteinFn.log1p(),
    BernsteinFn.one_minus_exp(),
    BernsteinFn.linear(2.0),
    BernsteinFn.composite(BernsteinFn.log1p(), BernsteinFn.power(0.5)),
]
INVERTIBLE = [f for f in CATALOG if f.kind != "one_minus_exp"]


@pytest.mark.parametrize(
    "f,s,expected",
    [(BernsteinFn.power(0.5), 4.0, 2.0), (BernsteinFn.log1p(), math.e - 1, 1.0), (BernsteinFn.one_minus_exp(), 0.0, 0.0)],
)
def test_eval_examples(f, s, expected):
    assert eval_bf(f, s) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize(
    "g,verdict,order",
    [(lambda s: np.exp(-s), PASS, None), (lambda s: s, FAIL, 1), (lambda s: 1 / (1 + s), PASS, None)],
)
def test_complete_monotonicity(g, verdict, order):
    rep = is_completely_monotone(g, CM_GRID, k_max=6)
    assert rep.verdict == verdict
    if order is not None:
        assert rep.failed_order == order


def test_bernstein_examples():
    assert is_bernstein(np.sqrt, BF_GRID, k_max=5).verdict == PASS
    rep = is_bernstein(lambda s: s * s, BF_GRID, k_max=5)
    assert rep.verdict == FAIL
    assert rep.failed_order == 2  # second derivative of s^2 is positive
    assert is_bernstein(lambda s: np.log(np.cosh(np.sqrt(s))), BF_GRID, k_max=4).verdict == PASS


@pytest.mark.parametrize("f", CATALOG, ids=lambda f: f.kind)
def test_catalog_is_bernstein(f):
    assert is_bernstein(f, BF_GRID, k_max=5).verdict == PASS


@pytest.mark.parametrize("f", INVERTIBLE, ids=lambda f: f.kind)
def test_inverse_roundtrip(f):
    s = np.geomspace(1e-3, 1e3, 50)
    assert np.allclose(bf_inverse(f, eval_bf(f, s)), s, rtol=1e-10, atol=0)


def test_inverse_examples():
    assert bf_inverse(BernsteinFn.power(0.5), 3.0) == pytest.approx(9.0, rel=1e-15)
    assert bf_inverse(BernsteinFn.log1p(), 1.0) == pytest.approx(math.e - 1, rel=1e-15)
    with pytest.raises(OutOfRange):
        bf_inverse(BernsteinFn.one_minus_exp(), 1.2)


@given(st.floats(1e-3, 0.999))
def test_one_minus_exp_inverse_inside_range(y):
    f = BernsteinFn.one_minus_exp()
    assert eval_bf(f, bf_inverse(f, y)) == pytest.approx(y, rel=1e-12)


def test_constructor_rejects_bad_params():
    with pytest.raises(ParamOutOfRange):
        BernsteinFn.power(1.5)
    with pytest.raises(ParamOutOfRange):
        BernsteinFn.linear(0.0)
    with pytest.raises(ParamOutOfRange):
        BernsteinFn.tabulated([0, 1, 2], [0, 2, 1])


def test_json_roundtrip():
    for f in CATALOG:
        assert BernsteinFn.from_dict(f.to_dict()) == f


@pytest.mark.parametrize("C", [1.5, 2.0, 4.0])
@pytest.mark.parametrize("alpha", [0.25, 0.5, 1.0])
def test_power_doubling_ratio_exact(C, alpha):
    rep = doubling_criterion_bf(BernsteinFn.power(alpha), C)
    assert rep.verdict == PASS
    for v in rep.infima.values():
        assert v == pytest.approx(C**alpha, rel=1e-12)


def test_doubling_failures():
    assert doubling_criterion_bf(BernsteinFn.log1p(), 2.0).verdict == FAIL
    rep = doubling_criterion_bf(BernsteinFn.one_minus_exp(), 2.0)
    assert rep.verdict == FAIL
    assert any("local" in n for n in rep.notes)


def test_half_stable_normalization_and_limits():
    mass, _ = quad(lambda s: stable_half_subordinator_density(1.0, s), 0, np.inf, limit=200)
    assert mass == pytest.approx(1.0, abs=1e-10)
    assert stable_half_subordinator_density(2.0, 1e-4) < 1e-300 or stable_half_subordinator_density(2.0, 1e-4) == 0.0
    with pytest.raises(NonpositiveArgument):
        stable_half_subordinator_density(1.0, 0.0)


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("lam", [0.25, 1.0, 4.0])
def test_half_stable_laplace_transform(t, lam):
    val, _ = quad(lambda s: math.exp(-lam * s) * stable_half_subordinator_density(t, s), 0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)
    assert val == pytest.approx(math.exp(-t * math.sqrt(lam)), abs=1e-8)
