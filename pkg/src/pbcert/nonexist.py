"""Non-existence of periodic orbits for Lienard systems via Cherkas functions.

For ``x' = y - F(x), y' = -x`` there is a unique ``B(x, y) = sum B_i(x) y^i``
with ``B(0, y) = y^n`` whose derivative along the flow depends on ``x``
only.  When that derivative is ``x^n R(x)`` with ``n`` even and ``R < 0``
everywhere, it is nonpositive and vanishes only on the non-invariant line
``x = 0``, so no periodic orbit exists.

``F`` may carry one parameter ``d``; polynomials are then :class:`RatPoly2`
in ``(x, d)`` and the parameter is fixed to an exact rational before any
sign analysis.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exactalg import (
    RatPoly1,
    RatPoly2,
    SturmSequence,
    as_fraction,
    simplest_between,
)
from .sysmodel import PolyVectorField

__all__ = [
    "BoundResult",
    "CherkasResult",
    "LienardSystem",
    "NegativityResult",
    "NonexistenceCertificate",
    "Refusal",
    "bound_bisection",
    "cherkas_build",
    "flow_derivative_constant_term",
    "negativity_test",
    "nonexistence_certificate",
    "rychkov_lienard",
    "y_independence_residuals",
]

VARS = ("x", "d")


class Refusal(RuntimeError):
    pass


@dataclass(frozen=True)
class LienardSystem:
    """``x' = y - F(x), y' = -x`` with ``F`` a polynomial in ``x`` over ``Q[d]``."""

    F: RatPoly2
    name: str = ""

    def __post_init__(self):
        if tuple(self.F.vars) != VARS:
            object.__setattr__(self, "F", RatPoly2(dict(self.F.terms), VARS))

    @classmethod
    def from_univariate(cls, F: RatPoly1, name: str = "") -> "LienardSystem":
        return cls(RatPoly2({(i, 0): c for i, c in enumerate(F.coeffs) if c}, VARS), name)

    @property
    def parametric(self) -> bool:
        return self.F.degree("d") > 0

    def F_at(self, delta) -> RatPoly1:
        return self.F.substitute("d", as_fraction(delta))

    def vector_field(self, delta=0) -> PolyVectorField:
        f = self.F_at(delta)
        P = {(0, 1): Fraction(1)}
        for i, c in enumerate(f.coeffs):
            if c:
                P[(i, 0)] = P.get((i, 0), 0) - c
        xy = ("x", "y")
        return PolyVectorField(RatPoly2(P, xy), RatPoly2({(1, 0): Fraction(-1)}, xy),
                               self.name or "Lienard", {"delta": as_fraction(delta)})


def rychkov_lienard(mu=1) -> LienardSystem:
    """``F = x^5 - mu x^3 + d x`` with the parameter ``d`` kept symbolic."""
    m = as_fraction(mu)
    return LienardSystem(RatPoly2({(5, 0): 1, (3, 0): -m, (1, 1): 1}, VARS), "Rychkov")


def _hash(p: RatPoly2) -> str:
    return hashlib.sha256(p.to_str().encode()).hexdigest()[:16]


@dataclass(frozen=True)
class CherkasResult:
    """``B_table[i]`` is the coefficient of ``y^i``; ``Bdot = x^n * R``."""

    n: int
    B_table: tuple = field(repr=False)
    Bdot: RatPoly2 = field(repr=False)
    R: RatPoly2 = field(repr=False)

    def B_hashes(self) -> list:
        return [_hash(b) for b in self.B_table]

    def R_at(self, delta) -> RatPoly1:
        return self.R.substitute("d", as_fraction(delta))


def _x_divide(p: RatPoly2, k: int) -> RatPoly2:
    if any(i < k for (i, _) in p.terms):
        raise ArithmeticError(f"derivative is not divisible by x^{k}")
    return RatPoly2({(i - k, j): c for (i, j), c in p.terms.items()}, VARS)


def cherkas_build(L: LienardSystem, n: int) -> CherkasResult:
    """Solve ``B_{k-1}' = F B_k' + (k+1) x B_{k+1}`` downwards from ``B_n = 1``.

    Each ``B_{k-1}`` is the antiderivative vanishing at ``x = 0``; the
    derivative along the flow is then ``-F B_0' - x B_1``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    F = L.F
    x = RatPoly2.var("x", VARS)
    zero = RatPoly2({}, VARS)
    B = [zero] * (n + 2)
    B[n] = RatPoly2.constant(1, VARS)
    for k in range(n, 0, -1):
        rhs = F * B[k].deriv("x") + x * B[k + 1] * (k + 1)
        B[k - 1] = rhs.integrate("x")
    Bdot = -(F * B[0].deriv("x")) - x * B[1]
    R = _x_divide(Bdot, n)
    return CherkasResult(n, tuple(B[: n + 1]), Bdot, R)


def y_independence_residuals(L: LienardSystem, res: CherkasResult) -> list:
    """Coefficients of ``y^k`` (``k >= 1``) in the derivative along the flow; all zero."""
    F, n, B = L.F, res.n, list(res.B_table) + [RatPoly2({}, VARS)]
    x = RatPoly2.var("x", VARS)
    out = [B[n].deriv("x")]
    for k in range(n, 0, -1):
        out.append(B[k - 1].deriv("x") - F * B[k].deriv("x") - x * B[k + 1] * (k + 1))
    return out


def flow_derivative_constant_term(L: LienardSystem, res: CherkasResult) -> RatPoly2:
    """The ``y^0`` coefficient of ``B_x (y - F) - x B_y``, recomputed independently."""
    x = RatPoly2.var("x", VARS)
    return -(L.F * res.B_table[0].deriv("x")) - x * res.B_table[1]


@dataclass(frozen=True)
class NegativityResult:
    negative: bool
    even: bool
    degree: int
    root_count: int
    value_at_zero: Fraction
    sturm_table: list = field(repr=False, default_factory=list)
    witness: Fraction | None = None

    def __bool__(self) -> bool:
        return self.negative


def _nonnegative_point(R: RatPoly1, span: float = 4.0, samples: int = 4001) -> Fraction | None:
    """A rational ``x`` with ``R(x) >= 0``, guessed in floats and checked exactly."""
    c = np.array([float(a) for a in R.coeffs[::-1]])
    if not np.all(np.isfinite(c)):
        return None
    xs = np.linspace(-span, span, samples)
    with np.errstate(all="ignore"):
        v = np.polyval(c, xs)
    order = np.argsort(-np.nan_to_num(v, nan=-np.inf))[:5]
    for i in order:
        x = Fraction(float(xs[i])).limit_denominator(10**6)
        if R(x) >= 0:
            return x
    return None


def negativity_test(R: RatPoly1, witness_first: bool = False) -> NegativityResult:
    """Exact proof that ``R(x) < 0`` for every real ``x``.

    Even polynomials are deflated to ``S(s) = R(x)`` with ``s = x^2`` and the
    roots of ``S`` on ``(0, inf)`` are counted; otherwise the real roots of
    ``R`` are counted directly.  With ``witness_first`` a failure may be
    settled by an exact point where ``R >= 0`` instead of a Sturm count
    (``root_count`` is then -1).
    """
    if R.is_zero():
        return NegativityResult(False, True, -1, -1, Fraction(0))
    r0 = R(Fraction(0))
    even = R.is_even()
    if R.degree == 0:
        return NegativityResult(r0 < 0, True, 0, 0, r0)
    if witness_first:
        x = Fraction(0) if r0 >= 0 else _nonnegative_point(R)
        if x is not None:
            return NegativityResult(False, even, R.degree, -1, r0, [], x)
    if even:
        S = R.deflate_square()
        seq = SturmSequence(S)
        inf = float("inf")
        count = seq.count(Fraction(0), inf)
        table = seq.table([Fraction(0), inf])
    else:
        seq = SturmSequence(R)
        inf = float("inf")
        count = seq.count(-inf, inf)
        table = seq.table([-inf, inf])
    negative = r0 < 0 and count == 0
    return NegativityResult(negative, even, R.degree, count, r0, table)


@dataclass(frozen=True)
class NonexistenceCertificate:
    system: LienardSystem = field(repr=False)
    n: int
    delta: Fraction
    cherkas: CherkasResult = field(repr=False)
    R_at_delta: RatPoly1 = field(repr=False)
    negativity: NegativityResult = field(repr=False)
    F0: Fraction

    @property
    def statement(self) -> str:
        return (f"for d = {self.delta} the derivative of B_{self.n} along the flow is "
                f"x^{self.n} R(x) <= 0, vanishing only on x = 0, which is not invariant; "
                "hence the system has no periodic orbit")


def nonexistence_certificate(L: LienardSystem, n: int, delta,
                             cherkas: CherkasResult | None = None) -> NonexistenceCertificate:
    """Issue the certificate or raise :class:`Refusal`."""
    delta = as_fraction(delta)
    if n % 2:
        raise Refusal(f"n = {n} is odd: x^n changes sign")
    res = cherkas if cherkas is not None else cherkas_build(L, n)
    if res.n != n:
        raise ValueError("Cherkas data built for a different n")
    Rd = res.R_at(delta)
    return _issue(L, n, delta, res, Rd, negativity_test(Rd))


def _issue(L, n, delta, res, Rd, neg) -> NonexistenceCertificate:
    if not neg:
        raise Refusal(f"R is not negative definite at d = {delta} "
                      f"(R(0) = {neg.value_at_zero}, positive roots = {neg.root_count})")
    # on x = 0 the flow has x' = y - F(0), nonzero off a single point
    F0 = L.F_at(delta)(Fraction(0))
    return NonexistenceCertificate(L, n, delta, res, Rd, neg, F0)


@dataclass(frozen=True)
class BoundResult:
    n: int
    bound: Fraction
    lower: Fraction
    steps: int
    certificate: NonexistenceCertificate = field(repr=False)


def bound_bisection(L: LienardSystem, n: int, lo, hi, tol="1/10000000",
                    cherkas: CherkasResult | None = None) -> BoundResult:
    """Shrink ``[lo, hi]`` until ``hi - lo <= tol`` keeping ``hi`` certified.

    New points are the simplest rationals in the middle third of the
    current interval, which keeps denominators (and Sturm integers) small.
    """
    lo, hi, tol = as_fraction(lo), as_fraction(hi), as_fraction(tol)
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")
    res = cherkas if cherkas is not None else cherkas_build(L, n)
    if negativity_test(res.R_at(lo), witness_first=True):
        raise ValueError(f"bracket invalid: R already negative at the lower end {lo}")
    if n % 2:
        raise Refusal(f"n = {n} is odd: x^n changes sign")
    best = negativity_test(res.R_at(hi))
    if not best:
        raise ValueError(f"bracket invalid: R is not negative at the upper end {hi}")
    steps = 0
    while hi - lo > tol:
        w = hi - lo
        mid = simplest_between(lo + w / 3, hi - w / 3)
        neg = negativity_test(res.R_at(mid), witness_first=True)
        if neg:
            hi, best = mid, neg
        else:
            lo = mid
        steps += 1
    return BoundResult(n, hi, lo, steps, _issue(L, n, hi, res, res.R_at(hi), best))
