import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pbcert.band import build_band, sample_points
from pbcert.cycles import fourier_coefficients
from pbcert.formats import packaged_curve
from pbcert.pipeline import fit_curve
from pbcert.trigcurve import CircleGrid, TrigCurve, TrigPoly, interpolate, rationalize, reparam_time


def curve_of(xc, yc):
    """Curve from ``[const, cos..., sin...]`` coefficient lists."""
    m = (len(xc) - 1) // 2
    tp = [TrigPoly(c[0], tuple(c[1:m + 1]), tuple(c[m + 1:])) for c in (xc, yc)]
    return TrigCurve(*tp)


def flat(tc):
    return np.array([float(c) for c in tc.x.coefficients() + tc.y.coefficients()])


def grid(n):
    return 2 * np.pi * np.arange(n) / n


def test_interpolate_unit_circle():
    th = grid(5)
    tc = interpolate(np.column_stack([np.cos(th), np.sin(th)]))
    assert tc.degree == 2
    expected = np.zeros(10)
    expected[1] = 1  # x: cos theta
    expected[5 + 3] = 1  # y: sin theta
    assert np.allclose(flat(tc), expected, atol=1e-14)


def test_interpolate_constant():
    tc = interpolate(np.tile([2.5, -1.0], (7, 1)))
    assert tc.x.const == pytest.approx(2.5) and tc.y.const == pytest.approx(-1.0)
    assert np.allclose(flat(tc)[[i for i in range(14) if i not in (0, 7)]], 0, atol=1e-14)


def test_interpolate_rejects_even_count():
    with pytest.raises(ValueError):
        interpolate(np.zeros((4, 2)))
    with pytest.raises(ValueError):
        interpolate(np.array([[0.0, np.nan], [1, 1], [2, 2]]))


coefs = st.lists(st.floats(-3, 3), min_size=7, max_size=7)


@settings(max_examples=50, deadline=None)
@given(coefs, coefs)
def test_interpolation_round_trip(xc, yc):
    tc = curve_of(xc, yc)
    pts = tc(grid(9))
    back = interpolate(pts)
    assert back.degree == 4
    assert np.allclose(flat(back)[[0, 1, 2, 3, 5, 6, 7]], xc, atol=1e-12)
    assert np.allclose(back(grid(9)), pts, atol=1e-10)
    th = np.linspace(0, 2 * np.pi, 50)
    assert np.allclose(back(th), tc(th), atol=1e-12)


def test_rationalize_examples():
    tc = curve_of([0.5, 3.14159265, 0.0], [0.0, 0.0, 1.0])
    r = rationalize(tc, 1000)
    assert r.mode == "rational"
    assert r.x.const == Fraction(1, 2)
    assert r.x.cos[0] == Fraction(355, 113)
    assert rationalize(curve_of([0.5, 0, 0], [0, 0, 0]), 10).x.const == Fraction(1, 2)
    common = rationalize(tc, 1000, "common")
    assert common.x.cos[0] == Fraction(3142, 1000)
    with pytest.raises(ValueError):
        rationalize(tc, 0)
    with pytest.raises(ValueError):
        rationalize(tc, 10, "nearest")


@settings(max_examples=40, deadline=None)
@given(st.floats(-50, 50), st.integers(1, 10**6), st.sampled_from(["best", "common"]))
def test_rationalize_error_monotone_in_bound(c, D, method):
    tc = curve_of([c, 0, 0], [0, 0, 0])
    e1 = abs(float(rationalize(tc, D, method).x.const) - c)
    e2 = abs(float(rationalize(tc, 2 * D, method).x.const) - c)
    assert e2 <= e1 + 1e-15
    bound = 1 / D if method == "best" else 1 / (2 * D)
    assert e1 <= bound + 1e-12


def test_deriv_examples():
    circle = curve_of([0, 1, 0], [0, 0, 1])
    d = circle.deriv()
    th = np.linspace(0, 6, 13)
    assert np.allclose(d(th), np.column_stack([-np.sin(th), np.cos(th)]))
    const = curve_of([4, 0, 0], [5, 0, 0])
    assert np.all(const.deriv()(th) == 0)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=13, max_size=13),
       st.lists(st.floats(-2, 2), min_size=13, max_size=13))
def test_deriv_matches_finite_differences(xc, yc):
    tc = curve_of(xc, yc)
    th = np.linspace(0, 2 * np.pi, 37)
    h = 1e-4
    fd = (tc(th + h) - tc(th - h)) / (2 * h)
    assert np.max(np.abs(fd - tc.deriv()(th))) <= 1e-6 * max(1.0, np.max(np.abs(fd)))


def test_periodic_evaluation_and_exact_forms():
    tc = rationalize(curve_of([0.1, 1.3, -0.2, 0.4, 0.7], [0.0, 0.5, 0.1, 1.1, -0.3]), 100)
    th = np.linspace(0, 2 * np.pi, 11)
    assert np.allclose(tc(th), tc(th + 2 * np.pi), atol=1e-12)
    assert tc.coefficient_count() == 10
    C, S = tc.x.chebyshev()
    g = CircleGrid(3)
    exact = tc.x.exact_values(g)
    for (u, v), val in zip(g.uv(), exact):
        assert C(u) + v * S(u) == val
    assert np.allclose([float(v) for v in exact], tc.x(g.angles()), atol=1e-12)


def test_signed_area():
    tc = rationalize(curve_of([0, 2, 0], [0, 0, 3]), 10)
    assert tc.signed_area_over_pi() == 6
    cw = rationalize(curve_of([0, 2, 0], [0, 0, -3]), 10)
    assert cw.signed_area_over_pi() == -6


def test_reparam_time():
    tc = curve_of([0.1, 1.3, -0.2, 0.4, 0.7], [0.0, 0.5, 0.1, 1.1, -0.3])
    th = np.linspace(0, 2 * np.pi, 9)
    W = reparam_time(tc, 2 * np.pi)
    assert np.allclose(W(th), tc(th))
    W = reparam_time(tc, 7.0)
    assert np.allclose(W(0.0), tc(0.0))
    assert np.allclose(W(3.5), tc(np.pi))
    assert np.allclose(W.derivative(1.0), 2 * np.pi / 7 * tc.deriv()(2 * np.pi / 7))
    with pytest.raises(ValueError):
        reparam_time(tc, 0)


def test_circle_grid():
    g = CircleGrid(5)
    assert len(g) == 20
    for u, v in g.uv():
        assert u * u + v * v == 1
    ang = g.angles()
    gaps = np.diff(np.sort(np.append(ang, ang.min() + 2 * np.pi)))
    assert np.all(gaps <= float(g.max_gap) + 1e-12)
    assert np.all(gaps >= float(g.min_gap) - 1e-12)


def test_fitted_curve_follows_printed_pattern(vdp_cycle):
    printed = packaged_curve("vdp_inner_printed")
    assert printed.x.cos[0] == Fraction(18566, 9395)
    _, ours = fit_curve(build_band(vdp_cycle, 0.05), 12, 10**6, "best")
    assert ours.mode == "rational"
    assert all(c.denominator <= 10**6 for c in ours.x.coefficients() + ours.y.coefficients())
    assert abs(float(ours.x.cos[0]) - 1.976) < 1e-3
    assert np.max(np.abs(flat(ours) - flat(printed))) < 1e-5


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 30), st.lists(st.floats(-1e-2, 1e-2), min_size=4, max_size=4)
       .filter(lambda p: max(map(abs, p[1:])) > 1e-6))
def test_truncated_fourier_is_best_l2(bruss_cycle, m, pert):
    f = bruss_cycle.states[:-1, 0]
    n = len(f)
    sp = fourier_coefficients(f, m)
    t = grid(n)

    def series(const, a, b):
        return const + sum(a[k] * np.cos(k * t) + b[k] * np.sin(k * t) for k in range(1, m + 1))

    a, b = sp.cos[0].copy(), sp.sin[0].copy()
    best = np.mean((f - series(sp.const[0], a, b)) ** 2)
    k = 1 + (abs(int(pert[0] * 1e6)) % m)
    a[k] += pert[1]
    b[k] += pert[2]
    worse = np.mean((f - series(sp.const[0] + pert[3], a, b)) ** 2)
    assert best < worse


def _c1_gap(bc, m):
    fitted, _ = fit_curve(bc, m)
    t = np.linspace(0, bc.T, 6000, endpoint=False)
    vals = bc.values(t)
    W = reparam_time(fitted, bc.T)
    return np.max(np.linalg.norm(vals["z"] - W(t), axis=1)) + np.max(
        np.linalg.norm(vals["dz"] - W.derivative(t), axis=1))


def _theorem_lower_bound_holds(ce, ms):
    bc = build_band(ce, 0.05)
    sp = fourier_coefficients(ce.states[:-1, 0], max(ms) + 1)
    for m in ms:
        lower = 0.5 * math.hypot(sp.cos[0, m + 1], sp.sin[0, m + 1])
        assert _c1_gap(bc, m) > lower, m


def test_c1_distance_lower_bound(bruss_cycle):
    _theorem_lower_bound_holds(bruss_cycle, list(range(1, 140, 7)))


@pytest.mark.long
def test_c1_distance_lower_bound_all_m(bruss_cycle):
    _theorem_lower_bound_holds(bruss_cycle, list(range(1, 140)))
