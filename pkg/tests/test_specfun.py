import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from tietz_spectra import specfun
from tietz_spectra.errors import ConvergenceError, DomainError
from tietz_spectra.specfun import (SeriesControl, gauss_2f1, gauss_2f1_log, kummer_1f1,
                                   kummer_1f1_log, log_gamma, log_gamma_signed)

mpmath.mp.dps = 40


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# ---------------------------------------------------------------- log_gamma

@pytest.mark.parametrize("x, expected", [
    (1.0, 0.0),
    (0.5, math.log(math.sqrt(math.pi))),
    (5.0, math.log(24.0)),
])
def test_log_gamma_examples(x, expected):
    assert log_gamma(x) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
def test_log_gamma_domain(x):
    with pytest.raises(DomainError):
        log_gamma(x)


@given(st.floats(0.1, 100.0))
def test_log_gamma_recurrence(x):
    assert abs(log_gamma(x + 1) - (log_gamma(x) + math.log(x))) <= 1e-13


@pytest.mark.parametrize("x", [1e-3, 0.07, 0.9, 1.5, 2.5, 7.3, 31.0, 250.5, 1e3, 9999.5, 1e4])
def test_log_gamma_accuracy(x):
    exact = float(mpmath.loggamma(x))
    # values near the zeros of ln Gamma at 1 and 2 are checked absolutely
    assert abs(log_gamma(x) - exact) <= 1e-13 * max(abs(exact), 1.0)


def test_log_gamma_signed_negative():
    lg, s = log_gamma_signed(-0.5)
    assert s == -1
    assert lg == pytest.approx(math.log(2 * math.sqrt(math.pi)), rel=1e-14)
    assert log_gamma_signed(-1.5)[1] == 1
    with pytest.raises(DomainError):
        log_gamma_signed(-2.0)


# ---------------------------------------------------------------- gauss_2f1

def test_2f1_at_zero():
    assert gauss_2f1(3.7, -2.2, 1.1, 0.0) == 1.0


@pytest.mark.parametrize("b, c, z", [(2.5, 1.5, 0.3), (-7.0, 0.25, 0.9), (40.0, 3.0, 0.75)])
def test_2f1_degree_one(b, c, z):
    assert gauss_2f1(-1, b, c, z) == pytest.approx(1 - b / c * z, rel=1e-15)


def test_2f1_log_identity():
    assert gauss_2f1(1, 1, 2, 0.5) == pytest.approx(-math.log(0.5) / 0.5, rel=1e-15)


def _rational_series(a, b, c, z, terms):
    total, term = Fraction(1), Fraction(1)
    for n in range(terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
    return total, term


def test_2f1_rational_series_oracle():
    a, b, c, z = Fraction(3, 10), Fraction(17, 10), Fraction(11, 5), Fraction(9, 10)
    total, last = _rational_series(a, b, c, z, 200)
    # term ratios stay below z from here on, so the tail is below last*z/(1-z)
    tail = float(last * z / (1 - z))
    value = gauss_2f1(0.3, 1.7, 2.2, 0.9)
    assert float(total) <= value <= float(total) + tail + 1e-15 * value
    assert rel(value, float(mpmath.hyp2f1(0.3, 1.7, 2.2, 0.9))) <= 1e-14


@pytest.mark.parametrize("c, z", [(-1.0, 0.3), (0.0, 0.3), (1.5, 1.0), (1.5, 1.2), (1.5, -0.1)])
def test_2f1_domain(c, z):
    with pytest.raises(DomainError):
        gauss_2f1(0.5, 0.5, c, z)


def test_2f1_max_terms():
    with pytest.raises(ConvergenceError):
        gauss_2f1(0.5, 0.5, 1.5, 0.3, SeriesControl(max_terms=3))


def test_series_control_invariants():
    with pytest.raises(DomainError):
        SeriesControl(rel_tolerance=0.0)
    with pytest.raises(DomainError):
        SeriesControl(max_terms=0)


moderate = st.floats(-10.0, 10.0)


@settings(max_examples=200, deadline=None)
@given(a=moderate, b=moderate, gap=st.floats(1.0, 10.0))
def test_gauss_summation(a, b, gap):
    c = a + b + gap
    if c <= 0.05 or min(c - a, c - b) <= 0.05:
        return
    expected = math.exp(math.lgamma(c) + math.lgamma(c - a - b) - math.lgamma(c - a) - math.lgamma(c - b))
    sign = math.copysign(1, math.gamma(c - a)) * math.copysign(1, math.gamma(c - b))
    # F(1-w) - F(1) ~ w ln w when c-a-b = 1, so w must be as small as a double allows
    value = gauss_2f1(a, b, c, math.nextafter(1.0, 0.0), SeriesControl(snap_tolerance=0.0))
    assert abs(value - sign * expected) <= 1e-10 * max(abs(expected), 1.0)


@settings(max_examples=300, deadline=None)
@given(a=st.floats(-50, 50), b=st.floats(-50, 50), c=st.floats(0.1, 50), z=st.floats(0.05, 0.9))
def test_contiguity(a, b, c, z):
    # (c-a) F(a-1) + (2a - c + (b-a) z) F(a) + a (z-1) F(a+1) = 0
    ctrl = SeriesControl(snap_tolerance=0.0)
    f = [gauss_2f1(a - 1, b, c, z, ctrl), gauss_2f1(a, b, c, z, ctrl), gauss_2f1(a + 1, b, c, z, ctrl)]
    coef = [c - a, 2 * a - c + (b - a) * z, a * (z - 1)]
    # coefficients can cancel to rounding noise, so scale by their unreduced size
    size = [abs(c) + abs(a), 2 * abs(a) + abs(c) + (abs(b) + abs(a)) * z, abs(a) * (1 - z)]
    scale = max(s * abs(v) for s, v in zip(size, f))
    assert abs(sum(k * v for k, v in zip(coef, f))) <= 1e-11 * scale + 1e-300


@settings(max_examples=200, deadline=None)
@given(n=st.integers(0, 30), b=st.floats(-40, 40), c=st.floats(0.1, 40), z=st.floats(0.0, 0.99))
def test_terminating_matches_generic_series(n, b, c, z):
    term = gauss_2f1(-n, b, c, z)
    ctrl = SeriesControl(snap_tolerance=0.0)
    # the plain running-ratio sum without the terminating shortcut
    m, e, _ = specfun._sum_series(lambda k: (-n + k) * (b + k) / ((c + k) * (k + 1)), z, ctrl,
                                  n_guard=n)
    generic = m * math.exp(e)
    scale = sum(abs(float(t)) for t in _poly_terms(n, b, c, z))
    assert abs(term - generic) <= 1e-12 * scale


def _poly_terms(n, b, c, z):
    t = 1.0
    yield t
    for k in range(n):
        t *= (-n + k) * (b + k) / ((c + k) * (k + 1)) * z
        yield t


@pytest.mark.parametrize("a, b, c, z", [
    (-0.0002, 31.4, 6.08, 0.5437),
    (-3.00001, 126.4, 6.27, 0.3695),
    (12.5, -80.3, 7.1, 0.7),
    (-150.2, 260.7, 40.5, 0.95),
    (0.3, 0.4, 0.7000001, 0.8),
])
def test_2f1_hard_points(a, b, c, z):
    expected = mpmath.hyp2f1(a, b, c, z)
    lf, s = gauss_2f1_log(a, b, c, z)
    assert s == mpmath.sign(expected)
    assert abs(lf - float(mpmath.log(abs(expected)))) <= 1e-10


def test_2f1_log_beyond_float_range():
    a, b, c, z = -2000.5, 3000.25, 50.0, 0.9
    expected = mpmath.hyp2f1(a, b, c, z)
    lf, s = gauss_2f1_log(a, b, c, z)
    assert lf > 710
    assert s == mpmath.sign(expected)
    assert rel(lf, float(mpmath.log(abs(expected)))) <= 1e-12
    with pytest.raises(ConvergenceError):
        gauss_2f1(a, b, c, z)


def test_snapping_is_configurable():
    a = -2 + 1e-11
    snapped = gauss_2f1(a, 3.0, 1.5, 0.4)
    exact_poly = gauss_2f1(-2, 3.0, 1.5, 0.4)
    assert snapped == exact_poly
    unsnapped = gauss_2f1(a, 3.0, 1.5, 0.4, SeriesControl(snap_tolerance=0.0))
    assert unsnapped != exact_poly
    assert rel(unsnapped, float(mpmath.hyp2f1(a, 3.0, 1.5, 0.4))) <= 1e-12


# ---------------------------------------------------------------- kummer_1f1

def test_1f1_at_zero():
    assert kummer_1f1(2.3, 0.7, 0.0) == 1.0


@pytest.mark.parametrize("a, z", [(0.5, 1.0), (3.0, -20.0), (-2.5, 15.0), (10.0, 0.01)])
def test_1f1_exponential(a, z):
    assert kummer_1f1(a, a, z) == pytest.approx(math.exp(z), rel=1e-14)


@pytest.mark.parametrize("b, z", [(0.5, 3.0), (7.0, -2.0), (-0.5, 1.0)])
def test_1f1_degree_one(b, z):
    assert kummer_1f1(-1, b, z) == pytest.approx(1 - z / b, rel=1e-15)


@pytest.mark.parametrize("a, b, z", [
    (0.3, 1.7, 2.5), (-4.5, 2.0, 10.0), (2.0, 3.5, -30.0), (-3, 6.0, 1e4), (25.0, 0.5, 40.0),
])
def test_1f1_against_mpmath(a, b, z):
    expected = mpmath.hyp1f1(a, b, z)
    assert rel(kummer_1f1(a, b, z), float(expected)) <= 1e-12
    lf, s = kummer_1f1_log(a, b, z)
    assert s == mpmath.sign(expected)


def test_1f1_domain():
    with pytest.raises(DomainError):
        kummer_1f1(1.0, -2.0, 0.5)
