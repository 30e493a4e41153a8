import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from levygeo.density import GridSpec, diagonal_direct, invert_fourier
from levygeo.errors import DomainExceeded, InsufficientRange, NonpositiveDensity
from levygeo.exponents import CharExponent, PointSampler, check_subadditivity
from levygeo.mixtures import GHParams, gh_delta_sq
from levygeo.offdiag import (
    BOUNDED,
    CLASS_N_CONSISTENT,
    CONSISTENT,
    DIVERGING,
    NOT_CLASS_N,
    REFUTED,
    VANISHING,
    MetricCandidate,
    PointConfig,
    TailSource,
    classify_class_N,
    cndf_matrix_test,
    dual_density,
    extract_delta_sq,
    meixner_delta_closed,
    meixner_delta_series,
    meixner_g,
    meixner_levy_identity,
    tail_rate,
    triangle_test,
)
from levygeo.verdicts import FAIL, PASS

SMALL = PointConfig(sets=6, size=16)


@pytest.mark.parametrize(
    "source,x,expected",
    [
        ("cauchy", 1.0, math.log(2)),
        ("gaussian", 2.0, 2.0),
        ("meixner", 1.0, math.log(math.cosh(math.pi / 2))),
    ],
)
def test_extract_examples(source, x, expected):
    c = extract_delta_sq(source, 1.0)
    assert c(x) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("source", ["cauchy", "gaussian", "meixner", "stable:1.5", "relativistic"])
def test_candidate_even_and_zero(source):
    c = extract_delta_sq(source, 1.0)
    x = np.linspace(0.01, 8.0, 30)
    assert c(0.0) == pytest.approx(0.0, abs=1e-12)
    assert np.array_equal(c(x), c(-x))


def test_grid_candidate_round_trip():
    d = invert_fourier(CharExponent.stable(1.5), 1.0, GridSpec(0.02, 20.0))
    c = extract_delta_sq(d)
    assert c.source == "grid" and c.interp_order == 3
    sel = np.abs(d.x) <= 0.5 * c.domain
    p0 = d.value_at_origin()
    assert np.allclose(p0 * np.exp(-c(d.x[sel])), d.values[sel], rtol=1e-9, atol=0)
    with pytest.raises(DomainExceeded):
        c(2 * c.domain)
    with pytest.raises(NonpositiveDensity):
        extract_delta_sq(d, x_max=1e3)


def test_row_and_exponent_candidates_agree():
    a = extract_delta_sq("meixner", 1.0)
    b = extract_delta_sq(CharExponent.meixner(), 1.0)
    x = np.linspace(0, 6, 13)
    assert np.allclose(a(x), b(x), atol=1e-12)


@pytest.mark.parametrize("source", ["gaussian", "cauchy", "meixner"])
def test_triangle_passes(source):
    assert triangle_test(extract_delta_sq(source, 1.0)).verdict == PASS


def test_triangle_quartic_witness():
    rep = triangle_test(MetricCandidate.from_function(lambda r: r**4))
    assert rep.verdict == FAIL
    w = rep.witness
    assert (w["x"][0], w["y"][0], w["z"][0]) == (2.0, 1.0, 0.0)
    assert w["d(x,z)"] == pytest.approx(4.0) and w["d(x,y)+d(y,z)"] == pytest.approx(2.0)


@pytest.mark.parametrize("source", ["gaussian", "meixner", "cauchy"])
def test_cndf_consistent(source):
    assert cndf_matrix_test(extract_delta_sq(source, 1.0), config=SMALL).verdict == CONSISTENT


def test_cndf_refutes_quartic_with_stable_witness():
    v = cndf_matrix_test(MetricCandidate.from_function(lambda r: r**4), config=SMALL)
    assert v.verdict == REFUTED
    w = v.witness
    assert w["eigenvalue"] < -v.tol * w["trace"]
    assert w["eigenvalue_30_digits"] < -v.tol * w["trace"]
    assert w["eigenvalue_jittered"] < -v.tol * w["trace"]


def test_cndf_domain_guard():
    c = extract_delta_sq(invert_fourier(CharExponent.cauchy(), 1.0, GridSpec(0.05, 10.0)))
    with pytest.raises(DomainExceeded):
        cndf_matrix_test(c, config=PointConfig(extents=(100.0,)))


@pytest.mark.parametrize("source", ["gaussian", "cauchy", "meixner"])
def test_consistent_candidates_are_subadditive(source):
    c = extract_delta_sq(source, 1.0)
    if cndf_matrix_test(c, config=SMALL).verdict == CONSISTENT:
        exp = CharExponent.from_callable(radial=lambda r: c(r), label=source)
        assert check_subadditivity(exp, PointSampler(n_pairs=2000, low=-8, high=8)).verdict == PASS


def test_gh_candidate_subadditive():
    p = GHParams(1.0, 1.0, -0.5)
    exp = CharExponent.from_callable(radial=lambda r: gh_delta_sq(p, r), label="gh")
    assert check_subadditivity(exp, PointSampler(n_pairs=2000, low=-20, high=20)).verdict == PASS


@pytest.mark.parametrize(
    "source,trend",
    [
        (CharExponent.gaussian(), DIVERGING),
        (CharExponent.stable(1.5), DIVERGING),
        (CharExponent.cauchy(), VANISHING),
        (CharExponent.meixner(), VANISHING),
        ("cauchy", VANISHING),
    ],
    ids=["dual-gaussian", "dual-stable1.5", "dual-cauchy", "dual-meixner", "cauchy-density"],
)
def test_tail_trends(source, trend):
    assert tail_rate(source, t=1.0).trend == trend


def test_tail_bounded_for_r_log_r():
    # -ln P(|X| > r) ~ r ln r exactly: density proportional to exp(-r ln r)
    src = TailSource(lambda r: -np.asarray(r) * np.log(np.asarray(r)), 1, "rlogr")
    assert tail_rate(src).trend == BOUNDED


def test_tail_range_errors():
    with pytest.raises(InsufficientRange):
        tail_rate("cauchy", r_grid=[10, 11, 12, 13], t=1.0)
    d = invert_fourier(CharExponent.cauchy(), 1.0, GridSpec(0.05, 40.0))
    with pytest.raises(InsufficientRange):
        tail_rate(d)


def test_dual_density_normalized():
    src = dual_density(CharExponent.stable(1.5), 1.0)
    assert math.exp(src.logf(np.array([0.0]))[0]) == pytest.approx(1 / (2 * math.pi * diagonal_direct(CharExponent.stable(1.5), 1.0)))


def test_classification_examples():
    assert classify_class_N("meixner", 1.0, config=SMALL).verdict == CLASS_N_CONSISTENT
    rep = classify_class_N("gaussian", 1.0, config=SMALL)
    assert rep.verdict == CLASS_N_CONSISTENT
    assert any("Gaussian" in n for n in rep.notes)
    rep = classify_class_N("stable:1.5", 1.0)
    assert rep.verdict == NOT_CLASS_N
    assert rep.label.startswith("NOT_CLASS_N(matrix witness")


def test_meixner_series_examples():
    assert tuple(meixner_delta_series(1.0, 0.0, J=10)) == (0.0, 0.0)
    s = meixner_delta_series(1.0, 1.0, tol=1e-10)
    assert s.value == pytest.approx(math.log(math.cosh(math.pi / 2)), abs=1e-10)
    s = meixner_delta_series(2.0, 3.0, tol=1e-12)
    j = np.arange(0, 2_000_000)
    direct = math.fsum(np.log1p(9.0 / (2.0 + 2.0 * j) ** 2).tolist()) + 9.0 / (2 * (2.0 + 2.0 * 2_000_000))
    assert s.value == pytest.approx(direct, abs=1e-10)


@given(st.floats(0.1, 5.0), st.floats(-30.0, 30.0))
def test_meixner_series_brackets_closed_form(t, x):
    s = meixner_delta_series(t, x, J=200)
    exact = float(meixner_delta_closed(t, x))
    slack = 1e-12 * (1 + abs(exact))
    assert s.lower - slack <= exact <= s.upper + slack
    assert s.partial_sum <= exact + slack <= s.partial_sum + s.tail_bound + 2 * slack


def test_meixner_index_convention():
    # the series from j = 1 misses exactly ln(1 + x^2 / t^2)
    t, x = 1.0, 1.0
    a = meixner_delta_series(t, x, tol=1e-13).value
    b = meixner_delta_series(t, x, tol=1e-13, start=1).value
    assert a - b == pytest.approx(math.log1p(x * x / t / t), abs=1e-12)
    assert a == pytest.approx(float(meixner_delta_closed(t, x)), abs=1e-12)


@pytest.mark.parametrize("t,x", [(1.0, 1.0), (1.0, 0.0), (2.0, 3.0), (0.5, 7.0)])
def test_meixner_levy_identity(t, x):
    rep = meixner_levy_identity(t, x)
    assert rep.verdict == PASS, rep.details


def test_meixner_g_decreasing_in_t():
    assert meixner_g(1.0, 0.5) > meixner_g(2.0, 0.5)
