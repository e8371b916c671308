from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pbcert.exactalg import RatPoly2
from pbcert.sysmodel import (
    EquilibriumError,
    PolyVectorField,
    brusselator,
    circle_system,
    divergence,
    equilibria,
    jacobian_apply,
    linear_center,
    rychkov,
    van_der_pol,
)

XY = ("x", "y")


def poly(terms):
    return RatPoly2({k: Fraction(v) for k, v in terms.items()}, XY)


def test_divergence_examples():
    assert divergence(linear_center()).is_zero()
    e = Fraction(3, 7)
    assert divergence(van_der_pol(e)) == poly({(0, 0): e, (2, 0): -e})
    b = Fraction(3)
    assert divergence(brusselator(1, b)) == poly({(0, 0): -(b + 1), (1, 1): 2, (2, 0): -1})


def test_zero_field_rejected():
    with pytest.raises(ValueError):
        PolyVectorField(poly({}), poly({}))


def test_reversed_negates():
    V = van_der_pol(1)
    W = V.reversed()
    assert W.P == -V.P and W.Q == -V.Q
    assert V.degree == 3


def test_jacobian_apply_examples():
    assert jacobian_apply(linear_center(), (0.3, -2.0), (1, 0)) == (0.0, -1.0)
    V = PolyVectorField(poly({(2, 0): 1}), poly({}))
    assert jacobian_apply(V, (2, 0), (1, 0)) == (4.0, 0.0)


coef = st.integers(-10, 10)
cubic = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda k: sum(k) <= 3),
                        coef, min_size=1, max_size=6)


@settings(max_examples=50, deadline=None)
@given(cubic, cubic, st.tuples(st.floats(-2, 2), st.floats(-2, 2)),
       st.tuples(st.floats(-1, 1), st.floats(-1, 1)))
def test_jacobian_matches_finite_differences(p, q, z, v):
    try:
        V = PolyVectorField(poly(p), poly(q))
    except ValueError:
        return
    f = V.float_rhs()
    h = 1e-6
    zp = np.add(z, np.multiply(h, v))
    zm = np.subtract(z, np.multiply(h, v))
    fd = (np.array(f(*zp)) - np.array(f(*zm))) / (2 * h)
    ja = np.array(jacobian_apply(V, z, v))
    scale = max(1.0, np.max(np.abs(ja)))
    assert np.max(np.abs(fd - ja)) <= 1e-6 * scale * 10


@settings(max_examples=30, deadline=None)
@given(cubic, cubic, cubic, cubic)
def test_divergence_is_linear(p1, q1, p2, q2):
    try:
        V1 = PolyVectorField(poly(p1), poly(q1))
        V2 = PolyVectorField(poly(p2), poly(q2))
        S = PolyVectorField(V1.P + V2.P, V1.Q + V2.Q)
    except ValueError:
        return
    assert divergence(S) == divergence(V1) + divergence(V2)


@pytest.mark.parametrize("V, point", [
    (brusselator(1, 3), (1, 3)),
    (van_der_pol(1), (0, 0)),
    (rychkov(Fraction(1, 5)), (0, 0)),
    (circle_system(), (0, 0)),
])
def test_single_equilibrium(V, point):
    boxes = equilibria(V)
    assert len(boxes) == 1
    b = boxes[0]
    assert b.x.contains(Fraction(point[0])) and b.y.contains(Fraction(point[1]))
    assert b.x.width <= Fraction(1, 1000) and b.y.width <= Fraction(1, 1000)


def test_two_equilibria_are_separated():
    # x' = x^2 - 1, y' = y has zeros at (+-1, 0)
    V = PolyVectorField(poly({(2, 0): 1, (0, 0): -1}), poly({(0, 1): 1}))
    boxes = sorted(equilibria(V), key=lambda b: b.center[0])
    assert [round(float(b.center[0]), 6) for b in boxes] == [-1.0, 1.0]
    assert boxes[0].x.hi < boxes[1].x.lo


def test_non_isolated_equilibria_rejected():
    # P = Q = x y: the axes are lines of zeros
    V = PolyVectorField(poly({(1, 1): 1}), poly({(1, 1): 1}))
    with pytest.raises(EquilibriumError):
        equilibria(V)
