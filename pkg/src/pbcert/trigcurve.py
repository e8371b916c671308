"""Trigonometric polynomial curves.

A component of degree ``m`` is ``c0 + sum_k a_k cos(k theta) + b_k sin(k theta)``.
Coefficients are either floats (fitted curves) or :class:`~fractions.Fraction`
(certified curves).  Exact work goes through the Chebyshev form
``p(theta) = C(cos theta) + sin theta * S(cos theta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exactalg import RatPoly1, as_fraction

__all__ = [
    "TrigPoly",
    "TrigCurve",
    "interpolate",
    "rationalize",
    "reparam_time",
    "rational_circle_grid",
    "CircleGrid",
]


@lru_cache(maxsize=None)
def _cheb_t(k: int) -> RatPoly1:
    if k == 0:
        return RatPoly1([1])
    if k == 1:
        return RatPoly1.x()
    return RatPoly1.x() * 2 * _cheb_t(k - 1) - _cheb_t(k - 2)


@lru_cache(maxsize=None)
def _cheb_u(k: int) -> RatPoly1:
    """Second kind; ``sin((k+1)t) = sin t * U_k(cos t)``."""
    if k == 0:
        return RatPoly1([1])
    if k == 1:
        return RatPoly1([0, 2])
    return RatPoly1.x() * 2 * _cheb_u(k - 1) - _cheb_u(k - 2)


def _is_exact(values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


@dataclass(frozen=True)
class TrigPoly:
    """One real trigonometric polynomial."""

    const: object
    cos: tuple
    sin: tuple

    def __post_init__(self):
        if len(self.cos) != len(self.sin):
            raise ValueError("cos and sin coefficient lists differ in length")
        object.__setattr__(self, "cos", tuple(self.cos))
        object.__setattr__(self, "sin", tuple(self.sin))

    @property
    def degree(self) -> int:
        return len(self.cos)

    @property
    def exact(self) -> bool:
        return _is_exact((self.const, *self.cos, *self.sin))

    def coefficients(self) -> list:
        return [self.const, *self.cos, *self.sin]

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.full(theta.shape, float(self.const))
        for k, (a, b) in enumerate(zip(self.cos, self.sin), start=1):
            out = out + float(a) * np.cos(k * theta) + float(b) * np.sin(k * theta)
        return out

    def deriv(self) -> "TrigPoly":
        zero = Fraction(0) if self.exact else 0.0
        return TrigPoly(
            zero,
            tuple(k * b for k, b in enumerate(self.sin, start=1)),
            tuple(-k * a for k, a in enumerate(self.cos, start=1)),
        )

    def lipschitz(self, order: int = 1):
        """Upper bound ``sum k^order (|a_k| + |b_k|)`` for ``|p^(order)|``."""
        return sum(
            k ** order * (abs(a) + abs(b))
            for k, (a, b) in enumerate(zip(self.cos, self.sin), start=1)
        )

    def sup_bound(self):
        return abs(self.const) + self.lipschitz(0)

    def chebyshev(self) -> tuple:
        """Exact ``(C, S)`` with ``p = C(u) + v * S(u)``, ``u = cos``, ``v = sin``."""
        if not self.exact:
            raise ValueError("Chebyshev form needs exact coefficients")
        c = RatPoly1([self.const])
        s = RatPoly1([])
        for k, (a, b) in enumerate(zip(self.cos, self.sin), start=1):
            if a:
                c = c + _cheb_t(k) * a
            if b:
                s = s + _cheb_u(k - 1) * b
        return c, s

    def exact_values(self, grid: "CircleGrid") -> list:
        """Exact values at every grid point, as Fractions."""
        if not self.exact:
            raise ValueError("exact evaluation needs exact coefficients")
        m = self.degree
        coeffs = [as_fraction(self.const), *map(as_fraction, self.cos), *map(as_fraction, self.sin)]
        den = 1
        for c in coeffs:
            den = den * c.denominator // _gcd(den, c.denominator)
        c0 = int(self.const * den)
        ca = [int(a * den) for a in self.cos]
        cb = [int(b * den) for b in self.sin]
        out = []
        for A, B, Q in grid.integer_points:
            # (Cj + i Sj) = (A + iB)^j, value = sum over Q^(m-j)
            cr, ci = 1, 0
            qpow = [1] * (m + 1)
            for j in range(1, m + 1):
                qpow[j] = qpow[j - 1] * Q
            acc = c0 * qpow[m]
            for j in range(1, m + 1):
                cr, ci = cr * A - ci * B, cr * B + ci * A
                acc += (ca[j - 1] * cr + cb[j - 1] * ci) * qpow[m - j]
            out.append(Fraction(acc, den * qpow[m]))
        return out

    def rationalized(self, denominator_bound: int) -> "TrigPoly":
        f = lambda c: Fraction(float(c)).limit_denominator(denominator_bound)  # noqa: E731
        return TrigPoly(f(self.const), tuple(map(f, self.cos)), tuple(map(f, self.sin)))

    def on_common_denominator(self, den: int) -> "TrigPoly":
        f = lambda c: Fraction(round(float(c) * den), den)  # noqa: E731
        return TrigPoly(f(self.const), tuple(map(f, self.cos)), tuple(map(f, self.sin)))

    # -- arithmetic (exact when both operands are exact) ------------------

    def _padded(self, m: int) -> tuple:
        zero = Fraction(0) if self.exact else 0.0
        pad = (zero,) * (m - self.degree)
        return self.cos + pad, self.sin + pad

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        m = max(self.degree, other.degree)
        ac, as_ = self._padded(m)
        bc, bs = other._padded(m)
        return TrigPoly(self.const + other.const,
                        tuple(x + y for x, y in zip(ac, bc)), tuple(x + y for x, y in zip(as_, bs)))

    def __neg__(self) -> "TrigPoly":
        return TrigPoly(-self.const, tuple(-c for c in self.cos), tuple(-s for s in self.sin))

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        return self + (-other)

    def __mul__(self, other) -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            return TrigPoly(self.const * other, tuple(c * other for c in self.cos),
                            tuple(s * other for s in self.sin))
        m = self.degree + other.degree
        exact = self.exact and other.exact
        half = Fraction(1, 2) if exact else 0.5
        zero = Fraction(0) if exact else 0.0
        C = [zero] * (m + 1)
        S = [zero] * (m + 1)
        a = [(self.const, zero)] + list(zip(self.cos, self.sin))
        b = [(other.const, zero)] + list(zip(other.cos, other.sin))
        for i, (ci, si) in enumerate(a):
            if not (ci or si):
                continue
            for j, (cj, sj) in enumerate(b):
                if not (cj or sj):
                    continue
                d, s = i - j, i + j
                sd = 1 if d >= 0 else -1
                d = abs(d)
                # cos i cos j, sin i sin j, cos i sin j, sin i cos j
                C[d] += half * (ci * cj + si * sj)
                C[s] += half * (ci * cj - si * sj)
                S[s] += half * (ci * sj + si * cj)
                S[d] += half * sd * (si * cj - ci * sj)
        return TrigPoly(C[0], tuple(C[1:]), tuple(S[1:]))

    __rmul__ = __mul__


def _gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


@dataclass(frozen=True)
class TrigCurve:
    """Closed plane curve with two trigonometric polynomial components."""

    x: TrigPoly
    y: TrigPoly
    period: float | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.x.degree != self.y.degree:
            raise ValueError("components must share the same degree")

    @property
    def degree(self) -> int:
        return self.x.degree

    @property
    def mode(self) -> str:
        return "rational" if (self.x.exact and self.y.exact) else "float"

    def __call__(self, theta):
        return np.stack([self.x(theta), self.y(theta)], axis=-1)

    eval = __call__

    def deriv(self) -> "TrigCurve":
        return TrigCurve(self.x.deriv(), self.y.deriv(), self.period)

    def rationalize(self, denominator_bound: int, method: str = "best") -> "TrigCurve":
        return rationalize(self, denominator_bound, method)

    def coefficient_count(self) -> int:
        return 2 * (2 * self.degree + 1)

    def signed_area_over_pi(self) -> Fraction:
        """Exact ``(1/2 pi) * closed integral of (x y' - y x')``, i.e. area / pi."""
        if self.mode != "rational":
            raise ValueError("exact area needs rational coefficients")
        return sum(
            (k * (a * d - b * c) for k, (a, b, c, d) in enumerate(
                zip(self.x.cos, self.x.sin, self.y.cos, self.y.sin), start=1)),
            Fraction(0),
        )

    def speed_bound(self):
        """Upper bound on ``|x'| + |y'|`` (dominates the Euclidean speed)."""
        return self.x.lipschitz(1) + self.y.lipschitz(1)

    def accel_bound(self):
        return self.x.lipschitz(2) + self.y.lipschitz(2)

    def exact_points(self, grid: "CircleGrid") -> list:
        return list(zip(self.x.exact_values(grid), self.y.exact_values(grid)))

    def squared_distance(self, other: "TrigCurve") -> TrigPoly:
        """``|self(theta) - other(theta)|^2`` as a trigonometric polynomial."""
        dx, dy = self.x - other.x, self.y - other.y
        return dx * dx + dy * dy

    def section_crossings(self, anchor, direction, samples: int = 20000) -> list:
        """Parameters ``r`` where the curve meets the line ``anchor + r*direction``.

        Float diagnostic used to report where a curve cuts a section.
        """
        th = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
        pts = self(th)
        ax, ay = map(float, anchor)
        dx, dy = map(float, direction)
        g = (pts[:, 0] - ax) * (-dy) + (pts[:, 1] - ay) * dx
        out = []
        for i in np.nonzero(np.sign(g) != np.sign(np.roll(g, -1)))[0]:
            j = (i + 1) % samples
            lam = g[i] / (g[i] - g[j])
            p = pts[i] + lam * (pts[j] - pts[i])
            out.append(float(((p[0] - ax) * dx + (p[1] - ay) * dy) / (dx * dx + dy * dy)))
        return sorted(out)


def interpolate(points) -> TrigCurve:
    """Degree-``m`` trigonometric interpolant through ``n = 2m+1`` points.

    Point ``i`` is attached to ``theta_i = 2 pi i / n``.  Coefficients come from
    the discrete Fourier sums, which solve the square interpolation system
    exactly on the equispaced grid.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be an (n, 2) array")
    n = len(pts)
    if n % 2 == 0 or n < 1:
        raise ValueError(f"need an odd number of points, got {n}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    m = (n - 1) // 2
    comps = []
    for col in pts.T:
        spec = np.fft.rfft(col)
        const = spec[0].real / n
        a = tuple(float(2 * spec[k].real / n) for k in range(1, m + 1))
        b = tuple(float(-2 * spec[k].imag / n) for k in range(1, m + 1))
        comps.append(TrigPoly(float(const), a, b))
    return TrigCurve(comps[0], comps[1])


def rationalize(tc: TrigCurve, denominator_bound: int, method: str = "best") -> TrigCurve:
    """Replace every coefficient by a nearby rational.

    ``method="best"`` takes each coefficient's best rational approximation
    with denominator at most ``denominator_bound`` (continued-fraction
    convergents and semiconvergents, :meth:`fractions.Fraction.limit_denominator`).
    ``method="common"`` rounds every coefficient to a multiple of
    ``1/denominator_bound``; the shared denominator keeps the integers of
    the later exact computations small.
    """
    if denominator_bound < 1:
        raise ValueError("denominator_bound must be >= 1")
    if method == "best":
        return TrigCurve(
            tc.x.rationalized(denominator_bound), tc.y.rationalized(denominator_bound), tc.period
        )
    if method == "common":
        return TrigCurve(
            tc.x.on_common_denominator(denominator_bound),
            tc.y.on_common_denominator(denominator_bound),
            tc.period,
        )
    raise ValueError(f"unknown rationalization method {method!r}")


def reparam_time(tc: TrigCurve, period: float):
    """Time-parameterised view ``W(t) = w(2 pi t / T)`` and its derivative."""
    if period <= 0:
        raise ValueError("period must be positive")
    scale = 2 * np.pi / period
    d = tc.deriv()

    def W(t):
        return tc(scale * np.asarray(t, dtype=float))

    def dW(t):
        return scale * d(scale * np.asarray(t, dtype=float))

    W.derivative = dW
    W.period = period
    return W


class CircleGrid:
    """Exact rational points on the unit circle, in increasing angle.

    Points come from the half-angle substitution ``t = k/N`` on two half
    circles, giving ``4N`` points with consecutive angular gaps inside
    ``[1/N, 2/N]``.  ``integer_points`` holds ``(A, B, Q)`` with
    ``cos = A/Q``, ``sin = B/Q``.
    """

    def __init__(self, N: int):
        if N < 1:
            raise ValueError("N must be >= 1")
        self.N = N
        pts = []
        N2 = N * N
        for half in (1, -1):
            for k in range(-N, N):
                A = half * (N2 - k * k)
                B = half * 2 * k * N
                pts.append((A, B, N2 + k * k))
        self.integer_points = pts

    def __len__(self) -> int:
        return len(self.integer_points)

    @property
    def max_gap(self) -> Fraction:
        return Fraction(2, self.N)

    @property
    def min_gap(self) -> Fraction:
        return Fraction(1, self.N)

    def uv(self) -> list:
        return [(Fraction(A, Q), Fraction(B, Q)) for A, B, Q in self.integer_points]

    def angles(self) -> np.ndarray:
        """Float angles, for plotting and diagnostics only."""
        return np.array([np.arctan2(B, A) for A, B, _ in self.integer_points]) % (2 * np.pi)


def rational_circle_grid(N: int) -> CircleGrid:
    return CircleGrid(N)
