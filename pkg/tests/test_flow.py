import math

import numpy as np
import pytest

from pbcert.exactalg import RatPoly2
from pbcert.flow import FlowError, Section, integrate, section_return
from pbcert.sysmodel import PolyVectorField, brusselator, circle_system, linear_center, van_der_pol

AXIS = Section((0, 0), (1, 0), r_min="1/10")


def test_linear_center_full_turn():
    tr = integrate(linear_center(), (1.0, 0.0), 2 * math.pi, tol=1e-12)
    assert np.allclose(tr(2 * math.pi)[:2], (1.0, 0.0), atol=1e-9)
    assert np.all(np.diff(tr.ts) > 0)


def test_circle_radius_decreases_to_one():
    tr = integrate(circle_system(), (2.0, 0.0), 5.0)
    r = np.hypot(*tr(np.linspace(0, 5, 200))[:, :2].T)
    assert np.all(np.diff(r) < 0)
    # closed form of r' = r (1 - r^2)
    t = 1.3
    exact = 1 / math.sqrt(1 + (1 / 4 - 1) * math.exp(-2 * t))
    assert abs(np.hypot(*tr(t)[:2]) - exact) < 1e-9


def test_van_der_pol_near_cycle_returns():
    tr = integrate(van_der_pol(1), (1.91928, 0.0), 6.6632866)
    assert np.linalg.norm(tr(6.6632866)[:2] - (1.91928, 0.0)) < 1e-3


def test_dense_output_reproduces_steps():
    tr = integrate(van_der_pol(1), (2.0, 0.0), 10.0)
    assert np.allclose(tr(tr.ts), tr.states, rtol=0, atol=1e-12)


def test_dense_output_midpoints_against_reintegration():
    V = van_der_pol(1)
    tr = integrate(V, (2.0, 0.0), 6.0, tol=1e-10)
    for k in range(0, len(tr.ts) - 1, max(1, len(tr.ts) // 8)):
        a, b = tr.ts[k], tr.ts[k + 1]
        mid = 0.5 * (a + b)
        ref = integrate(V, tr.states[k], mid - a, tol=1e-13)(mid - a)
        assert np.linalg.norm(tr(mid) - ref) <= 10 * 1e-10 * max(1.0, np.linalg.norm(ref))


def test_time_reversal_round_trip():
    V = van_der_pol(1)
    tol = 1e-12
    fwd = integrate(V, (1.0, 1.0), 8.0, tol=tol)
    back = integrate(V.reversed(), fwd.states[-1], 8.0, tol=tol)
    err = np.linalg.norm(back.states[-1] - (1.0, 1.0))
    assert err <= 10 * tol * fwd.arc_length() * 100


def test_tolerance_range_enforced():
    with pytest.raises(ValueError):
        integrate(linear_center(), (1, 0), 1.0, tol=1e-2)
    with pytest.raises(ValueError):
        integrate(linear_center(), (1, 0), 1.0, tol=1e-16)


def test_section_return_linear_center_and_circle():
    for V in (linear_center(), circle_system()):
        ret = section_return(V, AXIS, 1.0)
        assert abs(ret.T - 2 * math.pi) < 1e-9
        assert abs(ret.r1 - 1.0) < 1e-9


def test_section_return_brusselator_fixed_point():
    sec = Section((0, 3), (1, 0), r_min=1)
    r0 = 2.30354344
    ret = section_return(brusselator(1, 3), sec, r0)
    assert abs(ret.r1 - r0) < 1e-6
    assert abs(ret.T - 7.15691986) < 1e-6


def test_section_errors():
    with pytest.raises(FlowError):
        section_return(linear_center(), AXIS, 0.01)  # outside range
    # at (1, 0) the linear center flows along the vertical line x = 1
    tangent = Section((1, 0), (0, 1), r_min=-1, r_max=1)
    with pytest.raises(FlowError, match="tangent"):
        section_return(linear_center(), tangent, 0.0)
    with pytest.raises(ValueError):
        Section((0, 0), (0, 0))
    with pytest.raises(ValueError):
        Section(r_min=1, r_max=1)


def test_no_return_within_horizon():
    # x' = 1, y' = 0 never comes back
    V = PolyVectorField(RatPoly2({(0, 0): 1}), RatPoly2({}))
    with pytest.raises(FlowError):
        section_return(V, Section((0, 0), (0, 1), r_min=-1, r_max=1), 0.5, max_time=5.0)


def test_halving_tolerance_does_not_worsen_fixed_point():
    sec = Section((0, 3), (1, 0), r_min=1)
    V = brusselator(1, 3)
    r0 = 2.30354378
    devs = [abs(section_return(V, sec, r0, tol=t).r1 - r0) for t in (1e-8, 5e-9)]
    assert devs[1] <= devs[0] + 1e-9
