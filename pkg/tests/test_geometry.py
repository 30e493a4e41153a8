import math

import numpy as np
import pytest

from levygeo.errors import OutOfRange, RadiusTooLarge
from levygeo.exponents import CharExponent
from levygeo.geometry import (
    DOUBLING_ON_RANGE,
    FAILS,
    LOCAL_ONLY,
    ball_volume,
    doubling_check,
    growth_bound_check,
    power_growth_exponent,
    rearrangement,
    unit_ball_volume,
    volume_table,
)
from levygeo.verdicts import PASS

G1 = CharExponent.gaussian(c=1.0)
RADIAL = [G1, CharExponent.cauchy(), CharExponent.stable(0.5), CharExponent.meixner(), CharExponent.relativistic(), CharExponent.logcauchy()]


@pytest.mark.parametrize(
    "exp,r,expected",
    [(CharExponent.cauchy(), 1.0, 2.0), (G1, 2.0, 4.0), (CharExponent.stable(1.0), 3.0, 18.0)],
)
def test_ball_volume_examples(exp, r, expected):
    assert ball_volume(exp, r).volume == pytest.approx(expected, rel=1e-14)


def test_unit_ball_volumes():
    assert [unit_ball_volume(n) for n in (1, 2, 3)] == pytest.approx([2.0, math.pi, 4 * math.pi / 3], rel=1e-15)


@pytest.mark.parametrize("exp,s,expected", [(G1, 4.0, 4.0), (CharExponent.cauchy(), 2.0, 1.0), (CharExponent.logcauchy(), 2.0, math.log(2))])
def test_rearrangement_examples(exp, s, expected):
    assert rearrangement(exp, s) == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("exp", RADIAL, ids=lambda e: e.kind)
def test_volume_monotone_and_rearrangement_consistent(exp):
    radii = np.geomspace(0.1, 3.0, 15)
    tab = volume_table(exp, radii)
    assert np.all(np.diff(tab.volumes) >= 0)
    for r, v in zip(radii[::4], tab.volumes[::4]):
        assert rearrangement(exp, v) == pytest.approx(r * r, rel=1e-8)


def test_truncgauss_unbounded_ball():
    with pytest.raises(RadiusTooLarge):
        ball_volume(CharExponent.truncgauss(), 1.0)
    with pytest.raises(OutOfRange):
        ball_volume(G1, 0.0)


def test_monte_carlo_volume_matches_closed_form_aniso():
    # a non-radial exponent that routes to Monte Carlo: compare with the product law
    aniso = CharExponent.from_callable(lambda x: np.abs(x[..., 0]) + np.abs(x[..., 1]) ** 1.5, dim=2, label="aniso")
    mc = ball_volume(aniso, 1.0, samples=400_000)
    exact = ball_volume(CharExponent.sum_aniso(1.0, 1.5), 1.0).volume
    assert abs(mc.volume - exact) <= 4 * mc.se
    assert mc.samples == 400_000


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.0])
def test_stable_doubling_exact(alpha):
    rep = doubling_check(CharExponent.stable(alpha), (1e-3, 1e3))
    assert rep.verdict == DOUBLING_ON_RANGE
    assert rep.c2_estimate == pytest.approx(2 ** (2 / alpha), rel=1e-12)


def test_doubling_failures():
    rep = doubling_check(CharExponent.logcauchy(), (1e-2, 10.0))
    assert rep.verdict == FAILS
    r = rep.radii
    expected = np.sqrt(np.expm1(4 * r * r) / np.expm1(r * r))
    assert np.allclose(rep.ratios, expected, rtol=1e-9)
    rep = doubling_check(CharExponent.truncgauss(), (1e-3, 1e3))
    assert rep.verdict == LOCAL_ONLY
    # first probed radius with 2r >= 1, where {psi < 4r^2} is unbounded
    assert 0.5 <= rep.r_star < 0.52


def test_doubling_overflow_is_not_local():
    assert doubling_check(CharExponent.logcauchy(), (1e-3, 1e3)).verdict == FAILS


@pytest.mark.parametrize(
    "exp,r,R,strict",
    [(CharExponent.cauchy(), 1.0, 2.0, False), (CharExponent.sum_aniso(1.0, 1.5), 1.0, 2.0, True), (G1, 0.5, 1.0, False)],
)
def test_growth_bound_examples(exp, r, R, strict):
    rep = growth_bound_check(exp, r, R)
    assert rep.verdict == PASS
    if strict:
        assert rep.worst < 0


@pytest.mark.parametrize("exp", RADIAL + [CharExponent.sum_aniso(1.0, 1.5)], ids=lambda e: e.kind)
def test_growth_bound_all_pairs(exp):
    for r, R in [(0.1, 0.2), (0.3, 1.0), (1.0, 2.5)]:
        assert growth_bound_check(exp, r, R).verdict == PASS


@pytest.mark.parametrize("a,b", [(1.0, 1.5), (0.5, 2.0), (2.0, 2.0)])
def test_sum_aniso_volume_law(a, b):
    e = CharExponent.sum_aniso(a, b)
    r, R = 0.7, 3.1
    ratio = ball_volume(e, R).volume / ball_volume(e, r).volume
    assert ratio == pytest.approx((R / r) ** (2 * (1 / a + 1 / b)), rel=1e-10)


@pytest.mark.parametrize("exp", [CharExponent.cauchy(), CharExponent.stable(1.5), G1], ids=lambda e: f"{e.kind}{e.alpha}")
def test_power_growth_for_doubling(exp):
    assert power_growth_exponent(exp) > 0.1
