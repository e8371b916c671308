from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pbcert.exactalg import RatPoly1, RatPoly2
from pbcert.nonexist import (
    LienardSystem,
    Refusal,
    bound_bisection,
    cherkas_build,
    flow_derivative_constant_term,
    negativity_test,
    nonexistence_certificate,
    rychkov_lienard,
    y_independence_residuals,
)

F = Fraction
XD = ("x", "d")


def xd(terms):
    return RatPoly2({k: F(v) for k, v in terms.items()}, XD)


@pytest.fixture(scope="module")
def rych():
    return rychkov_lienard()


@pytest.fixture(scope="module")
def rych4(rych):
    return cherkas_build(rych, 4)


def test_b4_matches_printed_form(rych4):
    B = rych4.B_table
    assert B[4] == xd({(0, 0): 1})
    assert B[3].is_zero()
    assert B[2] == xd({(2, 0): 2})
    # (4/105) x^3 (15 x^4 - 21 x^2 + 35 d)
    k = F(4, 105)
    assert B[1] == xd({(7, 0): 15 * k, (5, 0): -21 * k, (3, 1): 35 * k})
    # (1/30) x^4 (10 x^8 - 24 x^6 + 30 d x^4 + 15 x^4 - 40 d x^2 + 30 d^2 + 30)
    c = F(1, 30)
    assert B[0] == xd({(12, 0): 10 * c, (10, 0): -24 * c, (8, 1): 30 * c, (8, 0): 15 * c,
                       (6, 1): -40 * c, (4, 2): 30 * c, (4, 0): 30 * c})


def test_r12_matches_printed_form(rych4):
    k = F(-4, 105)
    expected = xd({
        (12, 0): 105, (10, 0): -315, (8, 1): 315, (8, 0): 315, (6, 1): -630, (6, 0): -105,
        (4, 2): 315, (4, 1): 315, (4, 0): 120, (2, 2): -315, (2, 0): -126,
        (0, 3): 105, (0, 1): 140,
    }) * k
    assert rych4.R == expected


def test_harmonic_oscillator_invariant():
    L = LienardSystem(xd({}))
    res = cherkas_build(L, 2)
    assert res.B_table[0] == xd({(2, 0): 1})
    assert res.B_table[1].is_zero()
    assert res.Bdot.is_zero()


def test_n_must_be_at_least_two(rych):
    with pytest.raises(ValueError):
        cherkas_build(rych, 1)


poly_f = st.dictionaries(st.tuples(st.integers(1, 7), st.integers(0, 2)),
                         st.fractions(min_value=-3, max_value=3, max_denominator=6), max_size=4)


@settings(max_examples=25, deadline=None)
@given(poly_f, st.integers(2, 7))
def test_recursion_identities(terms, n):
    L = LienardSystem(xd(terms))
    res = cherkas_build(L, n)
    B = res.B_table
    assert B[n - 2] == xd({(2, 0): F(n, 2)})
    if n >= 3:
        s = RatPoly2.var("x", XD)
        assert B[n - 3] == (s * L.F).integrate("x") * n
    for r in y_independence_residuals(L, res):
        assert r.is_zero()
    assert flow_derivative_constant_term(L, res) == res.Bdot
    for k in range(n):
        assert all(i > 0 for (i, _) in B[k].terms)  # B_k(0) = 0


def test_negativity_examples():
    assert negativity_test(RatPoly1([-1, 0, -1]))
    assert not negativity_test(RatPoly1([1, 0, -1]))
    assert not negativity_test(RatPoly1([-1, 0, 3, 0, -1]))  # two sign changes
    assert negativity_test(RatPoly1([-1, 1, -1]))  # odd path: -1 + x - x^2
    assert not negativity_test(RatPoly1([]))
    r = negativity_test(RatPoly1([1, 0, -1]), witness_first=True)
    assert not r and r.witness == 0 and r.root_count == -1


def test_rychkov_certificate_and_refusal(rych, rych4):
    cert = nonexistence_certificate(rych, 4, "236252/1000000", rych4)
    assert cert.negativity.negative and cert.negativity.even
    assert cert.negativity.degree == 12
    assert cert.F0 == 0
    assert "no periodic orbit" in cert.statement
    with pytest.raises(Refusal):
        nonexistence_certificate(rych, 4, F(1, 5), rych4)
    with pytest.raises(Refusal, match="odd"):
        nonexistence_certificate(rych, 5, F(1, 4))


def test_center_is_refused_for_all_n():
    L = LienardSystem(xd({}))
    for n in (2, 4, 6):
        with pytest.raises(Refusal):
            nonexistence_certificate(L, n, 0)


@settings(max_examples=15, deadline=None)
@given(st.fractions(min_value=F(23, 100), max_value=F(3, 10), max_denominator=1000))
def test_negativity_agrees_with_dense_sampling(rych4, delta):
    R = rych4.R_at(delta)
    res = negativity_test(R)
    xs = np.linspace(-3, 3, 6001)
    vals = np.polynomial.polynomial.polyval(xs, R.to_float_coeffs())
    if res:
        assert np.all(vals < 0)
    if np.any(vals >= 0):
        assert not res


def test_bisection_n4(rych, rych4):
    out = bound_bisection(rych, 4, F(1, 5), F(1, 4), "1/10000000", rych4)
    assert out.bound - out.lower <= F(1, 10**7)
    assert abs(float(out.bound) - 0.2362516) < 1e-6
    assert out.certificate.delta == out.bound
    assert not negativity_test(rych4.R_at(out.lower))
    assert out.bound.denominator <= 10**7


def test_bisection_bracket_errors(rych, rych4):
    with pytest.raises(ValueError):
        bound_bisection(rych, 4, F(1, 4), F(1, 5), cherkas=rych4)
    with pytest.raises(ValueError):
        bound_bisection(rych, 4, F(24, 100), F(1, 4), cherkas=rych4)  # lower end already negative
    with pytest.raises(ValueError):
        bound_bisection(rych, 4, F(1, 10), F(1, 5), cherkas=rych4)  # upper end not negative


def test_bounds_decrease_with_n(rych):
    bounds = [float(bound_bisection(rych, n, F(1, 5), F(1, 4), "1/1000000").bound)
              for n in (4, 6, 8)]
    assert bounds == sorted(bounds, reverse=True)
    assert all(b > 0.2249 for b in bounds)
