"""Planar polynomial vector fields with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exactalg import (
    ExactAlgebraError,
    Interval,
    RatPoly2,
    as_fraction,
    isolate_real_roots,
    refine_root,
    resultant,
    sturm_count,
)

__all__ = [
    "EquilibriumBox",
    "PolyVectorField",
    "brusselator",
    "circle_system",
    "divergence",
    "equilibria",
    "jacobian_apply",
    "linear_center",
    "rychkov",
    "van_der_pol",
]

XY = ("x", "y")


@dataclass(frozen=True)
class PolyVectorField:
    """``x' = P(x, y), y' = Q(x, y)``."""

    P: RatPoly2
    Q: RatPoly2
    name: str = ""
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.P.is_zero() and self.Q.is_zero():
            raise ValueError("vector field is identically zero")

    @property
    def degree(self) -> int:
        return max(self.P.total_degree, self.Q.total_degree)

    def reversed(self) -> "PolyVectorField":
        """Same orbits traversed backwards in time."""
        return PolyVectorField(-self.P, -self.Q, self.name + " (reversed)", self.params)

    def float_rhs(self):
        """Return ``f(x, y) -> (P, Q)`` on floats or numpy arrays."""
        p, q = self.P.float_function(), self.Q.float_function()
        return lambda x, y: (p(x, y), q(x, y))

    def float_jacobian(self):
        fs = [d.float_function() for d in (
            self.P.deriv("x"), self.P.deriv("y"), self.Q.deriv("x"), self.Q.deriv("y"))]
        return lambda x, y: tuple(f(x, y) for f in fs)

    def float_divergence(self):
        return divergence(self).float_function()

    def __call__(self, x, y):
        return self.P(x, y), self.Q(x, y)


def divergence(V: PolyVectorField) -> RatPoly2:
    """``dP/dx + dQ/dy`` with exact coefficients."""
    return V.P.deriv("x") + V.Q.deriv("y")


def jacobian_apply(V: PolyVectorField, point, vector) -> tuple:
    """``DX(point) @ vector`` in floating point."""
    x, y = map(float, point)
    a, b = map(float, vector)
    px, py, qx, qy = V.float_jacobian()(x, y)
    return (px * a + py * b, qx * a + qy * b)


# ---------------------------------------------------------------------------
# benchmark systems


def _poly(terms) -> RatPoly2:
    return RatPoly2({k: as_fraction(v) for k, v in terms.items()}, XY)


def van_der_pol(eps=1) -> PolyVectorField:
    """``x' = y - eps (x^3/3 - x), y' = -x``."""
    e = as_fraction(eps)
    return PolyVectorField(
        _poly({(0, 1): 1, (3, 0): -e / 3, (1, 0): e}),
        _poly({(1, 0): -1}),
        "van der Pol",
        {"eps": e},
    )


def brusselator(a=1, b=3) -> PolyVectorField:
    """``x' = a - (b+1) x + x^2 y, y' = b x - x^2 y``."""
    a, b = as_fraction(a), as_fraction(b)
    return PolyVectorField(
        _poly({(0, 0): a, (1, 0): -(b + 1), (2, 1): 1}),
        _poly({(1, 0): b, (2, 1): -1}),
        "Brusselator",
        {"a": a, "b": b},
    )


def rychkov(delta, mu=1) -> PolyVectorField:
    """``x' = y - (x^5 - mu x^3 + delta x), y' = -x``."""
    d, m = as_fraction(delta), as_fraction(mu)
    return PolyVectorField(
        _poly({(0, 1): 1, (5, 0): -1, (3, 0): m, (1, 0): -d}),
        _poly({(1, 0): -1}),
        "Rychkov",
        {"delta": d, "mu": m},
    )


def circle_system() -> PolyVectorField:
    """``x' = -y + x(1 - x^2 - y^2), y' = x + y(1 - x^2 - y^2)``; unit circle is a cycle."""
    return PolyVectorField(
        _poly({(0, 1): -1, (1, 0): 1, (3, 0): -1, (1, 2): -1}),
        _poly({(1, 0): 1, (0, 1): 1, (2, 1): -1, (0, 3): -1}),
        "circle",
    )


def linear_center() -> PolyVectorField:
    """``x' = y, y' = -x``."""
    return PolyVectorField(_poly({(0, 1): 1}), _poly({(1, 0): -1}), "linear center")


# ---------------------------------------------------------------------------
# equilibria


class EquilibriumError(ExactAlgebraError):
    pass


@dataclass(frozen=True)
class EquilibriumBox:
    """Rational box proved to hold exactly one zero of ``(P, Q)``."""

    x: Interval
    y: Interval
    res_x_count: int
    res_y_count: int

    @property
    def center(self) -> tuple:
        return (self.x.mid, self.y.mid)

    @property
    def half_widths(self) -> tuple:
        return (self.x.width / 2, self.y.width / 2)


def _eval_box(poly: RatPoly2, bx: Interval, by: Interval) -> Interval:
    acc = Interval.point(0)
    for (i, j), c in poly.terms.items():
        acc = acc + (bx ** i) * (by ** j) * c
    return acc


def _krawczyk(V: PolyVectorField, bx: Interval, by: Interval) -> bool:
    """Interval Newton (Krawczyk) test: True proves a unique zero in the box."""
    cx, cy = bx.mid, by.mid
    jac = [V.P.deriv("x"), V.P.deriv("y"), V.Q.deriv("x"), V.Q.deriv("y")]
    a, b, c, d = (j(cx, cy) for j in jac)
    det = a * d - b * c
    if det == 0:
        return False
    # preconditioner: exact inverse of the midpoint Jacobian
    y11, y12, y21, y22 = d / det, -b / det, -c / det, a / det
    fx, fy = V.P(cx, cy), V.Q(cx, cy)
    J = [_eval_box(j, bx, by) for j in jac]
    rx, ry = bx - cx, by - cy
    # I - Y J(X)
    m11 = 1 - (J[0] * y11 + J[2] * y12)
    m12 = -(J[1] * y11 + J[3] * y12)
    m21 = -(J[0] * y21 + J[2] * y22)
    m22 = 1 - (J[1] * y21 + J[3] * y22)
    kx = cx - (y11 * fx + y12 * fy) + m11 * rx + m12 * ry
    ky = cy - (y21 * fx + y22 * fy) + m21 * rx + m22 * ry
    return kx.strictly_inside(bx) and ky.strictly_inside(by)


def equilibria(V: PolyVectorField, width="1/1000", max_depth: int = 40) -> list:
    """Boxes each containing exactly one real zero of ``(P, Q)``.

    Zeros are projected by resultants in both elimination orders, the
    projections are isolated by Sturm sequences, and each candidate box is
    either excluded (``P`` or ``Q`` sign-definite on it) or proved to hold a
    unique zero with the Krawczyk operator, bisecting where needed.
    """
    width = as_fraction(width)
    rx = resultant(V.P, V.Q, "y")  # polynomial in x
    ry = resultant(V.P, V.Q, "x")  # polynomial in y
    if rx.is_zero() or ry.is_zero():
        raise EquilibriumError("non-isolated equilibria: a resultant vanishes identically")
    xs = _closed_intervals(rx, width)
    ys = _closed_intervals(ry, width)
    boxes = []
    for ix in xs:
        for iy in ys:
            found = _validate(V, ix, iy, max_depth)
            for bx, by in found:
                boxes.append(EquilibriumBox(
                    bx, by,
                    sturm_count(rx, bx.lo, bx.hi, closed=True) if rx.degree > 0 else 0,
                    sturm_count(ry, by.lo, by.hi, closed=True) if ry.degree > 0 else 0,
                ))
    return boxes


def _closed_intervals(p, width) -> list:
    """Isolating intervals turned into closed intervals with roots strictly inside."""
    if p.degree < 1:
        return []
    out = []
    for a, b in isolate_real_roots(p, tol=width):
        if p.sign_at(b) == 0:
            # root sits on the endpoint: recentre a tiny box on it
            h = (b - a) / 4
            while sturm_count(p, b - h, b + h, closed=True) != 1:
                h /= 2
            out.append(Interval(b - h, b + h))
        else:
            out.append(Interval(a, b))
    return out


def _validate(V, ix: Interval, iy: Interval, max_depth: int) -> list:
    """At most one zero lives in ``ix x iy`` (each side isolates one projected root)."""
    stack = [(ix, iy, 0)]
    while stack:
        bx, by, depth = stack.pop()
        pv = _eval_box(V.P, bx, by)
        qv = _eval_box(V.Q, bx, by)
        if pv.lo > 0 or pv.hi < 0 or qv.lo > 0 or qv.hi < 0:
            continue
        # inflate inside the candidate: a zero on a sub-box edge defeats Krawczyk
        inflated = (_inflate(bx, ix), _inflate(by, iy))
        if _krawczyk(V, *inflated):
            return [inflated]
        if depth >= max_depth:
            raise EquilibriumError("validation failed: box neither excluded nor proved")
        mx, my = bx.mid, by.mid
        if bx.width >= by.width:
            stack += [(Interval(bx.lo, mx), by, depth + 1), (Interval(mx, bx.hi), by, depth + 1)]
        else:
            stack += [(bx, Interval(by.lo, my), depth + 1), (bx, Interval(my, by.hi), depth + 1)]
    return []


def _inflate(iv: Interval, outer: Interval) -> Interval:
    w = iv.width / 8
    return Interval(max(iv.lo - w, outer.lo), min(iv.hi + w, outer.hi))


def equilibrium_points_float(V: PolyVectorField) -> np.ndarray:
    return np.array([[float(b.x.mid), float(b.y.mid)] for b in equilibria(V)])
