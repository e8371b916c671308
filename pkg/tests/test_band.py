import math

import numpy as np
import pytest
from scipy.interpolate import CubicSpline

from pbcert.band import (
    BandError,
    build_band,
    expansion_ratio,
    numeric_transversality,
    open_arc_band,
    sample_points,
    search_epsilon,
)
from pbcert.flow import integrate
from pbcert.sysmodel import circle_system, linear_center

# van der Pol, epsilon = 0.05: 25 equispaced band points
VDP_POINTS = np.array([
    (1.89451, 0.0056435), (1.76278, -0.488101), (1.59066, -0.939363), (1.38198, -1.33813),
    (1.12999, -1.67325), (0.819552, -1.92987), (0.424859, -2.08912), (-0.093381, -2.12507),
    (-0.747354, -2.00013), (-1.39679, -1.69586), (-1.80051, -1.27605), (-1.9537, -0.788939),
    (-1.93903, -0.264387), (-1.83453, 0.245845), (-1.68122, 0.719683), (-1.49111, 1.14594),
    (-1.26215, 1.51447), (-0.98337, 1.81246), (-0.634949, 2.02302), (-0.183705, 2.12466),
    (0.40691, 2.08508), (1.08983, 1.86873), (1.63579, 1.49426), (1.90318, 1.04111),
    (1.96187, 0.527263),
])


def test_circle_band_closed_form(circle_cycle):
    bc = build_band(circle_cycle, 0.1)
    assert np.allclose(bc.u_table, 1.0, atol=1e-9)
    th = bc.ts
    assert np.allclose(bc.point_table, 1.1 * np.column_stack([np.cos(th), np.sin(th)]), atol=1e-9)
    assert bc.side == "outer"


def test_circle_transversality(circle_cycle):
    tr = numeric_transversality(build_band(circle_cycle, 0.1))
    assert tr.constant
    # exact contact at radius r is r^2 (1 - r^2)
    assert np.allclose(tr.values, 1.21 * (1 - 1.21), atol=1e-8)


def test_circle_sample_points(circle_cycle):
    pts = sample_points(build_band(circle_cycle, 0.1), 5)
    ang = 2 * np.pi * np.arange(5) / 5
    assert np.allclose(pts, 1.1 * np.column_stack([np.cos(ang), np.sin(ang)]), atol=1e-9)


def test_sample_points_count_and_parity(vdp_cycle):
    bc = build_band(vdp_cycle, 0.05)
    assert sample_points(bc, 3).shape == (3, 2)
    assert np.allclose(sample_points(bc, 3)[1], bc(bc.T / 3))
    for n in (4, 1):
        with pytest.raises(BandError):
            sample_points(bc, n)


def test_van_der_pol_inner_band(vdp_cycle):
    bc = build_band(vdp_cycle, 0.05)
    assert bc.side == "inner"
    assert abs(bc.section_crossing() - 1.89331) < 1e-4
    assert numeric_transversality(bc).constant
    pts = sample_points(bc, 25)
    assert np.max(np.abs(pts - VDP_POINTS)) < 1e-4


def test_sign_flip_changes_side(vdp_cycle):
    a, b = build_band(vdp_cycle, 0.05), build_band(vdp_cycle, -0.05)
    assert {a.side, b.side} == {"inner", "outer"}
    r0 = vdp_cycle.x0_star
    assert a.section_crossing() < r0 < b.section_crossing()


def test_periodicity_and_positivity(vdp_cycle, bruss_cycle, circle_cycle):
    for ce in (vdp_cycle, bruss_cycle, circle_cycle):
        bc = build_band(ce, 0.01)
        u = bc.u_table
        assert abs(u[-1] - u[0]) <= 1e-8 * abs(u[0])
        assert np.all(u > 0)
        E = np.exp(ce.div_integral - ce.kappa * ce.ts)
        assert np.all(E > 0)


def test_sample_points_lie_on_table(vdp_cycle):
    bc = build_band(vdp_cycle, 0.05)
    assert np.allclose(bc(bc.ts), bc.point_table, rtol=0, atol=1e-9)
    table = bc.point_table.copy()
    table[-1] = table[0]
    spline = CubicSpline(bc.ts, table, bc_type="periodic")
    pts = sample_points(bc, 25)
    assert np.max(np.abs(pts - spline(np.arange(25) * bc.T / 25))) < 1e-9


def test_first_order_expansion(vdp_cycle):
    eps = np.array([1e-2, 5e-3, 2.5e-3])
    err = np.array([np.max(np.abs(expansion_ratio(vdp_cycle, e) - 1)) for e in eps])
    assert np.all(np.diff(err) < 0)
    slope = np.polyfit(np.log(eps), np.log(err), 1)[0]
    assert 0.8 < slope < 1.2


def test_build_band_errors(vdp_cycle):
    with pytest.raises(BandError):
        build_band(vdp_cycle, 0.0)


def test_search_epsilon_halves(vdp_cycle):
    bc = search_epsilon(vdp_cycle, 3.0)
    assert 0 < bc.epsilon < 3.0
    assert numeric_transversality(bc).constant
    assert math.log2(3.0 / bc.epsilon) == int(math.log2(3.0 / bc.epsilon))


def test_open_arc_matches_closed_band(circle_cycle):
    V = circle_system()
    orbit = integrate(V, (1.0, 0.0), 3.0, with_divergence=True)
    arc = open_arc_band(V, orbit, -2.0, 0.1, samples=101)
    th = arc.ts
    assert np.allclose(arc.points, 1.1 * np.column_stack([np.cos(th), np.sin(th)]), atol=1e-9)
    assert np.allclose(arc.points, build_band(circle_cycle, 0.1)(th), atol=1e-8)


def test_open_arc_linear_center():
    V = linear_center()
    orbit = integrate(V, (1.0, 0.0), 2.0, with_divergence=True)
    arc = open_arc_band(V, orbit, 1.0, 1e-3)
    tr = arc.transversality
    assert tr.constant and tr.sign == arc.expected_sign == 1
    # f = K eps E + O(eps^2) with E = exp(-t)
    assert np.allclose(arc.contact, 1e-3 * np.exp(-arc.ts), rtol=1e-2)
    flipped = open_arc_band(V, orbit, 1.0, -1e-3)
    assert flipped.transversality.sign == flipped.expected_sign == -1


def test_open_arc_errors():
    V = linear_center()
    orbit = integrate(V, (1.0, 0.0), 2.0, with_divergence=True)
    with pytest.raises(BandError):
        open_arc_band(V, orbit, 0.0, 0.1)
    with pytest.raises(BandError):
        open_arc_band(V, integrate(V, (1.0, 0.0), 2.0), 1.0, 0.1)
