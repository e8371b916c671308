from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from pbcert.certify import (
    CertificationFailed,
    Status,
    build_annulus,
    certified_positive_on_grid,
    certify_curve,
    contact_function,
    contact_values,
    curve_distance_certificate,
    find_sign_change,
    global_sign,
    orientation,
    prove_no_zero,
    prove_simple,
    winding_number,
)
from pbcert.exactalg import RatPoly1
from pbcert.sysmodel import circle_system, equilibria, linear_center, van_der_pol
from pbcert.trigcurve import TrigCurve, TrigPoly

F = Fraction


def circle(r, cx=0, cy=0, sense=1):
    r = F(r)
    return TrigCurve(TrigPoly(F(cx), (r,), (F(0),)), TrigPoly(F(cy), (F(0),), (sense * r,)))


def P(*c):
    return RatPoly1([F(x) for x in c])


def test_contact_function_circle_examples():
    A, B = contact_function(circle_system(), circle("1/2"))
    assert A == P("3/16") and B.is_zero()
    A, B = contact_function(circle_system(), circle(1))
    assert A.is_zero() and B.is_zero()
    A, B = contact_function(linear_center(), circle(1))
    assert A.is_zero() and B.is_zero()


def test_contact_function_matches_float_evaluation():
    tc = TrigCurve(TrigPoly(F(1, 10), (F(2), F(1, 7)), (F(-1, 3), F(1, 5))),
                   TrigPoly(F(0), (F(1, 4), F(-1, 9)), (F(2), F(0))))
    V = van_der_pol(1)
    A, B = contact_function(V, tc)
    th = np.linspace(0, 2 * np.pi, 57)
    ev = np.polynomial.polynomial.polyval(np.cos(th), A.to_float_coeffs()) + np.sin(th) * \
        np.polynomial.polynomial.polyval(np.cos(th), B.to_float_coeffs())
    assert np.allclose(ev, contact_values(V, tc, th), atol=1e-10)
    assert max(A.degree, B.degree + 1) <= (V.degree + 1) * tc.degree


def test_prove_no_zero_examples():
    pr = prove_no_zero(P("3/16"), P())
    assert pr.status is Status.PROVED_NONVANISHING and pr.root_count == 0
    assert prove_no_zero(P(), P()).status is Status.IDENTICALLY_ZERO
    pr = prove_no_zero(P(0, 1), P())
    assert pr.status is Status.INCONCLUSIVE and pr.R == P(0, 0, 1)
    # f = u + 2: R = (u + 2)^2 > 0
    assert prove_no_zero(P(2, 1), P()).proved
    # f = 2 + v: R = 4 + u^2 - 1 > 0
    assert prove_no_zero(P(2), P(1)).proved


def test_global_sign():
    assert global_sign(P("3/16"), P()) == 1
    assert global_sign(P(-5), P()) == -1
    with pytest.raises(CertificationFailed):
        global_sign(P(0, 1), P())


def test_orientation_examples():
    o = orientation(circle(1))
    assert o.label == "ccw" and o.area_over_pi == 1
    o = orientation(circle(1, sense=-1))
    assert o.label == "cw" and o.area_over_pi == -1
    with pytest.raises(CertificationFailed):
        orientation(TrigCurve(TrigPoly(F(0), (F(1),), (F(0),)), TrigPoly(F(0), (F(1),), (F(0),))))


small = st.fractions(min_value=-2, max_value=2, max_denominator=20)


@settings(max_examples=30, deadline=None)
@given(st.lists(small, min_size=9, max_size=9), st.lists(small, min_size=9, max_size=9))
def test_orientation_matches_quadrature_and_shoelace(xc, yc):
    tc = TrigCurve(TrigPoly(xc[0], tuple(xc[1:5]), tuple(xc[5:])),
                   TrigPoly(yc[0], tuple(yc[1:5]), tuple(yc[5:])))
    a = tc.signed_area_over_pi()
    th = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
    z, dz = tc(th), tc.deriv()(th)
    quad = np.mean(z[:, 0] * dz[:, 1] - z[:, 1] * dz[:, 0])  # (1/2pi) * integral = 2 * area / (2 pi)
    assert abs(float(a) - quad) < 1e-10
    shoelace = 0.5 * np.sum(z[:, 0] * np.roll(z[:, 1], -1) - np.roll(z[:, 0], -1) * z[:, 1])
    if abs(shoelace) > 1e-3:
        assert np.sign(shoelace) == np.sign(float(a))


def test_grid_positivity():
    assert certified_positive_on_grid(TrigPoly(F(2), (F(1),), (F(0),)), N=8)
    assert not certified_positive_on_grid(TrigPoly(F(0), (F(1),), (F(0),)))
    assert not certified_positive_on_grid(TrigPoly(F(1, 1000), (F(1),), (F(0),)), max_N=256)
    with pytest.raises(ValueError):
        certified_positive_on_grid(TrigPoly(2.0, (1.0,), (0.0,)))


def test_squared_distance_positive():
    g = circle(2).squared_distance(circle(1, cx="1/4"))
    res = certified_positive_on_grid(g)
    assert res.ok and res.min_sample > 0


def test_simplicity():
    assert prove_simple(circle(1)).N >= 1
    # limacon (1 + 2 cos t)(cos t, sin t) has an inner loop
    limacon = TrigCurve(TrigPoly(F(1), (F(1), F(1)), (F(0), F(0))),
                        TrigPoly(F(0), (F(0), F(0)), (F(1), F(1))))
    with pytest.raises(CertificationFailed):
        prove_simple(limacon, max_N=512)
    # the convex limacon (2 + cos t)(cos t, sin t) is simple
    convex = TrigCurve(TrigPoly(F(1, 2), (F(2), F(1, 2)), (F(0), F(0))),
                       TrigPoly(F(0), (F(0), F(0)), (F(2), F(1, 2))))
    assert prove_simple(convex).N >= 64


def test_winding_and_distance():
    w, _ = winding_number(circle(1), (0, 0), F(1, 2))
    assert w == 1
    assert winding_number(circle(1, sense=-1), (0, 0))[0] == -1
    assert winding_number(circle(1), (3, 0))[0] == 0
    with pytest.raises(CertificationFailed):
        winding_number(circle(1), (1, 0), 0, max_N=128)
    assert curve_distance_certificate(circle(1), circle(2)) >= 1
    with pytest.raises(CertificationFailed):
        curve_distance_certificate(circle(1), circle(1, cx="1/2"), max_N=128)


def test_circle_annulus_is_trapping():
    V = circle_system()
    inner, outer = certify_curve(V, circle("1/2")), certify_curve(V, circle(2))
    assert inner.proved and outer.proved
    assert inner.f_sign == 1 and outer.f_sign == -1
    assert outer.contact_A == P(-12)  # f = r^2 (1 - r^2) = -12 at r = 2
    ann = build_annulus(inner, outer, equilibria(V))
    assert ann.crossing_direction == "inward-trapping"
    assert ann.equilibrium_exclusions[0]["location"] == "inside inner curve"
    assert "odd number of limit cycles" in ann.conclusion
    # clockwise parameterisations flip f and orientation but not the conclusion
    inner_cw = certify_curve(V, circle("1/2", sense=-1))
    assert inner_cw.f_sign == -1 and inner_cw.flux_sign == inner.flux_sign
    with pytest.raises(CertificationFailed, match="mismatch"):
        build_annulus(inner, certify_curve(V, circle("3/4")), equilibria(V))


def test_equilibrium_in_annulus_rejected():
    V = circle_system()
    inner, outer = certify_curve(V, circle("1/2")), certify_curve(V, circle(2))
    box = ((F(1), F(0)), (F(1, 100), F(1, 100)))
    with pytest.raises(CertificationFailed, match="lies in the annulus"):
        build_annulus(inner, outer, [box])
    far = ((F(5), F(5)), (F(1, 100), F(1, 100)))
    ann = build_annulus(inner, outer, [far])
    assert ann.equilibrium_exclusions[0]["location"] == "outside outer curve"


def test_inconclusive_curve_has_refutation():
    V = circle_system()
    cert = certify_curve(V, TrigCurve(TrigPoly(F(0), (F(1),), (F(0),)),
                                       TrigPoly(F(0), (F(0),), (F(2),))))
    assert cert.status is Status.INCONCLUSIVE and not cert.proved
    (p1, v1), (p2, v2) = cert.refutation
    assert v1 > 0 > v2
    for (u, v), val in cert.refutation:
        assert u * u + v * v == 1
        assert cert.contact_A(u) + v * cert.contact_B(u) == val
    assert find_sign_change(P(3), P()) is None


coef = st.fractions(min_value=-1, max_value=1, max_denominator=50)


@settings(max_examples=25, deadline=None)
@given(st.fractions(min_value=F(1, 2), max_value=3, max_denominator=20),
       st.lists(coef, min_size=6, max_size=6))
def test_soundness_against_dense_sampling(r, pert):
    # perturbed circles under van der Pol: either proved or not, never wrongly proved
    p = [c / 10 for c in pert]
    tc = TrigCurve(TrigPoly(p[0], (r, p[1]), (p[2], p[3])),
                   TrigPoly(p[4], (p[5], F(0)), (r, F(0))))
    V = van_der_pol(1)
    A, B = contact_function(V, tc)
    pr = prove_no_zero(A, B)
    assume(pr.status is not Status.IDENTICALLY_ZERO)
    vals = contact_values(V, tc, np.linspace(0, 2 * np.pi, 10_000, endpoint=False))
    assert A(F(1)) ** 2 == pr.R(F(1))
    assert (A(F(-1))) ** 2 == pr.R(F(-1))
    assert pr.R.degree <= 2 * (V.degree + 1) * tc.degree
    if pr.proved:
        assert np.all(vals > 0) or np.all(vals < 0)
        assert np.min(np.abs(vals)) > 0
        assert np.sign(vals[0]) == global_sign(A, B, pr)
    if not (np.all(vals > 0) or np.all(vals < 0)):
        assert not pr.proved
