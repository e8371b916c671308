"""Exact polynomial arithmetic over the rationals.

Univariate polynomials are dense (integer numerators over one common
denominator), bivariate polynomials are sparse dictionaries of
:class:`fractions.Fraction`.  On top of them live Sturm sequences, real
root isolation, resultants and discriminants.  Every routine here is exact
and deterministic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from numbers import Rational
from typing import Iterable, Sequence

try:
    from gmpy2 import divexact as _divexact, gcd as _gcd, mpz
except ImportError:  # pragma: no cover - gmpy2 is an optional accelerator
    mpz = int
    _gcd = math.gcd

    def _divexact(a, b):
        return a // b

__all__ = [
    "ExactAlgebraError",
    "Interval",
    "RatPoly1",
    "RatPoly2",
    "SturmSequence",
    "as_fraction",
    "cauchy_bound",
    "count_real_roots",
    "discriminant",
    "isolate_real_roots",
    "poly_gcd",
    "resultant",
    "resultant1",
    "simplest_between",
    "squarefree_part",
    "sturm_count",
]


class ExactAlgebraError(ValueError):
    """Raised for degenerate inputs (zero polynomials, bad degrees)."""


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions, decimal strings or ``"p/q"`` strings exactly.

    Floats are converted exactly as well (their binary value), which is
    rarely what a caller wants, so prefer strings for decimal literals.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ExactAlgebraError(f"non-finite value {value!r}")
        return Fraction(value)
    # gmpy2 mpq/mpz and similar
    return Fraction(int(value.numerator), int(value.denominator))


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


# ---------------------------------------------------------------------------
# integer polynomial kernels (lists, lowest degree first, no trailing zeros)


def _strip(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def _content(a: Sequence[int]) -> int:
    g = 0
    for c in a:
        g = _gcd(g, c)
        if g == 1:
            break
    return g


def _primitive(a: list) -> list:
    """Divide by the positive content; keeps the sign pattern."""
    if not a:
        return a
    g = _content(a)
    if g > 1:
        a = [c // g for c in a]
    return a


def _imul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    if len(a) < len(b):
        a, b = b, a
    out = [0] * (len(a) + len(b) - 1)
    for j, bj in enumerate(b):
        if bj:
            for i, ai in enumerate(a):
                out[i + j] += ai * bj
    return out


def _iadd(a: Sequence, b: Sequence) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _strip(out)


def _iscale(a: Sequence, s) -> list:
    return [c * s for c in a] if s else []


def _ideriv(a: Sequence) -> list:
    return _strip([i * a[i] for i in range(1, len(a))])


def _neg_prem(a: list, b: list) -> list:
    """Positive multiple of ``-rem(a, b)`` with integer arithmetic.

    Each elimination step multiplies the running remainder by ``|lc(b)|`` so
    the overall factor stays positive and Sturm sign conditions survive.
    """
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    alb = abs(lb)
    sgn = 1 if lb > 0 else -1
    while len(r) - 1 >= db and r:
        k = len(r) - 1 - db
        top = r[-1] * sgn
        if alb != 1:
            r = [c * alb for c in r]
        for i, bi in enumerate(b):
            if bi:
                r[i + k] -= top * bi
        r.pop()
        _strip(r)
    r = _primitive(r)
    return [-c for c in r]


def _prem(a: list, b: list) -> list:
    """Classical pseudo-remainder ``lc(b)^(deg a - deg b + 1) * a mod b``."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    for k in range(len(a) - 1 - db, -1, -1):
        if len(r) - 1 == db + k:
            top = r[-1]
            r = [c * lb for c in r]
            for i, bi in enumerate(b):
                if bi:
                    r[i + k] -= top * bi
            r.pop()
            _strip(r)
        else:
            r = [c * lb for c in r]
    return r


def _subresultant_sturm(p0: list) -> list:
    """Sturm chain of ``p0`` via the subresultant PRS.

    The subresultant PRS avoids content gcds; each element is a nonzero
    scalar multiple of the classical Sturm element and the sign of that
    scalar is tracked, so the returned list holds positive multiples.
    """
    if len(p0) < 2:
        return [p0]
    p1 = _ideriv(p0)
    seq = [p0, p1]
    sig = [1, 1]
    d = len(p0) - len(p1)
    beta = -1 if (d + 1) % 2 else 1
    psi = mpz(-1)
    while len(seq[-1]) > 1:
        a, b = seq[-2], seq[-1]
        lb = b[-1]
        d = len(a) - len(b)
        r = _prem(a, b)
        if not r:
            break
        r = [_divexact(c, beta) for c in r]
        # r = lb^(d+1)/beta * rem(a, b) and rem(a, b) = -sig[-2] * (pos) * T_next
        s = -sig[-2]
        if lb < 0 and (d + 1) % 2:
            s = -s
        if beta < 0:
            s = -s
        seq.append(r)
        sig.append(s)
        # update psi and beta for the next step
        lbn = -lb
        if d == 0:
            psi_next = psi
        else:
            psi_next = _divexact(lbn ** d, psi ** (d - 1)) if d > 1 else lbn
        dn = len(b) - len(r)
        beta = -lb * psi_next ** dn
        psi = psi_next
    return [q if s > 0 else [-c for c in q] for q, s in zip(seq, sig)]


def _ievals_sign(a: Sequence, num, den) -> int:
    """Sign of ``a(num/den)`` for ``den > 0``, by homogeneous Horner."""
    if not a:
        return 0
    acc = a[-1]
    dpow = 1
    for c in reversed(a[:-1]):
        dpow = dpow * den
        acc = acc * num + c * dpow
    return (acc > 0) - (acc < 0)


def _iexact_div(a: list, g: list) -> list:
    """Primitive form of ``a / g`` where ``g`` divides ``a`` over Q."""
    r = list(a)
    q = [0] * (len(a) - len(g) + 1)
    lg = g[-1]
    # pseudo-division with positive factor: q accumulates scaled quotient
    dg = len(g) - 1
    while r and len(r) - 1 >= dg:
        k = len(r) - 1 - dg
        top = r[-1]
        if top % lg == 0:
            f = top // lg
            for i, gi in enumerate(g):
                r[i + k] -= f * gi
            q[k] += f
        else:
            s = abs(lg)
            r = [c * s for c in r]
            q = [c * s for c in q]
            f = r[-1] // lg
            for i, gi in enumerate(g):
                r[i + k] -= f * gi
            q[k] += f
        r.pop()
        _strip(r)
    if r:
        raise ExactAlgebraError("inexact polynomial division")
    return _primitive(_strip(q))


# ---------------------------------------------------------------------------
# univariate polynomials


class RatPoly1:
    """Dense univariate polynomial with rational coefficients.

    Stored as integer numerators over one positive common denominator, lowest
    degree first.  The zero polynomial has degree ``-1``.
    """

    __slots__ = ("_num", "_den", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "u"):
        fr = [as_fraction(c) for c in coeffs]
        den = reduce(_lcm, (c.denominator for c in fr), 1)
        num = [int(c.numerator * (den // c.denominator)) for c in fr]
        self._set(num, den)
        self.var = var

    def _set(self, num: list, den: int) -> None:
        num = _strip(list(num))
        if not num:
            den = 1
        else:
            g = math.gcd(int(_content(num)), den)
            if g > 1:
                num = [c // g for c in num]
                den //= g
        self._num = tuple(int(c) for c in num)
        self._den = int(den)

    @classmethod
    def from_ints(cls, num: Sequence, den: int = 1, var: str = "u") -> "RatPoly1":
        if den == 0:
            raise ExactAlgebraError("zero denominator")
        if den < 0:
            num, den = [-c for c in num], -den
        p = cls.__new__(cls)
        p.var = var
        p._set(list(num), den)
        return p

    @classmethod
    def constant(cls, c, var: str = "u") -> "RatPoly1":
        return cls([c], var)

    @classmethod
    def x(cls, var: str = "u") -> "RatPoly1":
        return cls.from_ints([0, 1], 1, var)

    # -- basic accessors -------------------------------------------------
    @property
    def coeffs(self) -> tuple:
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def numerators(self) -> tuple:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    @property
    def degree(self) -> int:
        return len(self._num) - 1

    def is_zero(self) -> bool:
        return not self._num

    @property
    def lc(self) -> Fraction:
        if not self._num:
            return Fraction(0)
        return Fraction(self._num[-1], self._den)

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self._num):
            return Fraction(self._num[i], self._den)
        return Fraction(0)

    def primitive(self) -> list:
        """Primitive integer coefficient list with the same sign as ``self``."""
        return _primitive(list(self._num))

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RatPoly1):
            return other
        if isinstance(other, (int, Fraction, Rational, str)):
            return RatPoly1([other], self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        den = _lcm(self._den, other._den)
        a = _iscale(self._num, den // self._den)
        b = _iscale(other._num, den // other._den)
        return RatPoly1.from_ints(_iadd(a, b), den, self.var)

    __radd__ = __add__

    def __neg__(self):
        return RatPoly1.from_ints([-c for c in self._num], self._den, self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RatPoly1):
            return RatPoly1.from_ints(
                _imul(self._num, other._num), self._den * other._den, self.var
            )
        if isinstance(other, (int, Fraction, Rational, str)):
            c = as_fraction(other)
            return RatPoly1.from_ints(
                _iscale(self._num, c.numerator), self._den * c.denominator, self.var
            )
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Rational, str)):
            c = as_fraction(other)
            if c == 0:
                raise ZeroDivisionError("polynomial divided by zero")
            return self * (1 / c)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ExactAlgebraError("negative power")
        out = RatPoly1([1], self.var)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, RatPoly1):
            return self._num == other._num and self._den == other._den
        if isinstance(other, (int, Fraction)):
            return self == RatPoly1([other], self.var)
        return NotImplemented

    def __hash__(self):
        return hash((self._num, self._den))

    def __repr__(self):
        if not self._num:
            return f"RatPoly1(0, var={self.var!r})"
        return f"RatPoly1({self.to_str()!r})"

    def to_str(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mon = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
                terms.append(f"{c}{'*' if mon else ''}{mon}")
        return " + ".join(reversed(terms)) or "0"

    def divmod(self, other: "RatPoly1"):
        """Euclidean division over Q."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        q = [Fraction(0)] * max(len(r) - db, 0)
        inv = 1 / b[-1]
        while len(r) - 1 >= db and r:
            k = len(r) - 1 - db
            f = r[-1] * inv
            q[k] = f
            for i, bi in enumerate(b):
                r[i + k] -= f * bi
            r.pop()
            while r and not r[-1]:
                r.pop()
        return RatPoly1(q, self.var), RatPoly1(r, self.var)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def deriv(self) -> "RatPoly1":
        return RatPoly1.from_ints(_ideriv(self._num), self._den, self.var)

    def integrate(self) -> "RatPoly1":
        """Antiderivative vanishing at 0."""
        return RatPoly1(
            [0] + [Fraction(c, self._den * (i + 1)) for i, c in enumerate(self._num)],
            self.var,
        )

    def monic(self) -> "RatPoly1":
        if self.is_zero():
            return self
        return self / self.lc

    def shift_mul(self, k: int) -> "RatPoly1":
        """Multiply by ``var**k``."""
        if not self._num:
            return self
        return RatPoly1.from_ints([0] * k + list(self._num), self._den, self.var)

    def lowest_degree(self) -> int:
        for i, c in enumerate(self._num):
            if c:
                return i
        return -1

    def is_even(self) -> bool:
        return all(c == 0 for c in self._num[1::2])

    def deflate_square(self) -> "RatPoly1":
        """For an even polynomial ``p(x) = q(x**2)`` return ``q``."""
        if not self.is_even():
            raise ExactAlgebraError("polynomial is not even")
        return RatPoly1.from_ints(list(self._num[0::2]), self._den, self.var)

    def compose(self, other: "RatPoly1") -> "RatPoly1":
        out = RatPoly1([], other.var)
        for c in reversed(self.coeffs):
            out = out * other + c
        return out

    # -- evaluation ------------------------------------------------------
    def __call__(self, x):
        if isinstance(x, float):
            acc = 0.0
            for c in reversed(self._num):
                acc = acc * x + c
            return acc / self._den
        if isinstance(x, Interval):
            acc = Interval.point(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        x = as_fraction(x)
        num, den = x.numerator, x.denominator
        if not self._num:
            return Fraction(0)
        acc = self._num[-1]
        dpow = 1
        for c in reversed(self._num[:-1]):
            dpow *= den
            acc = acc * num + c * dpow
        return Fraction(acc, dpow * self._den)

    def sign_at(self, x) -> int:
        x = as_fraction(x)
        return _ievals_sign(self._num, x.numerator, x.denominator)

    def to_float_coeffs(self) -> list:
        return [float(c) for c in self.coeffs]


# ---------------------------------------------------------------------------
# Sturm sequences and root counting


class SturmSequence:
    """Sturm sequence of the square-free part of ``p``.

    Elements are integer polynomials that are positive multiples of the
    classical sequence ``p0 = sqf(p), p1 = p0', p_{k+1} = -rem(p_{k-1}, p_k)``,
    so sign-variation counts are unaffected.  ``gcd_degree`` records the
    degree of ``gcd(p, p')`` (zero when ``p`` is already square-free).
    """

    def __init__(self, p: RatPoly1):
        if p.is_zero():
            raise ExactAlgebraError("polynomial is identically zero")
        self.var = p.var
        base = [mpz(c) for c in p.primitive()]
        seq = self._chain(base)
        g = seq[-1]
        self.gcd_degree = len(g) - 1
        if self.gcd_degree > 0:
            base = [mpz(c) for c in _iexact_div([int(c) for c in base], [int(c) for c in g])]
            seq = self._chain(base)
        self.polys = seq

    @staticmethod
    def _chain(p0: list) -> list:
        return _subresultant_sturm(p0)

    @property
    def degree(self) -> int:
        return len(self.polys[0]) - 1

    def signs_at(self, x) -> list:
        """Signs of each element at ``x`` (rational, ``+inf`` or ``-inf``)."""
        if isinstance(x, float) and math.isinf(x):
            if x > 0:
                return [1 if q[-1] > 0 else -1 for q in self.polys]
            return [
                (1 if q[-1] > 0 else -1) * (-1 if (len(q) - 1) % 2 else 1)
                for q in self.polys
            ]
        x = as_fraction(x)
        return [_ievals_sign(q, x.numerator, x.denominator) for q in self.polys]

    def variations(self, x) -> int:
        signs = [s for s in self.signs_at(x) if s]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def count(self, a, b) -> int:
        """Distinct real roots in ``(a, b]``."""
        return self.variations(a) - self.variations(b)

    def table(self, points: Sequence) -> list:
        """Sign table used as a verification transcript."""
        return [
            {"at": _point_str(x), "signs": self.signs_at(x), "variations": self.variations(x)}
            for x in points
        ]


def _point_str(x) -> str:
    if isinstance(x, float) and math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return str(as_fraction(x))


def _as_bound(x):
    if isinstance(x, float) and math.isinf(x):
        return x
    return as_fraction(x)


def sturm_count(p: RatPoly1, a, b, closed: bool = False) -> int:
    """Number of distinct real roots of ``p`` in ``(a, b]`` (``[a, b]`` if closed).

    ``a`` and ``b`` may be rationals or infinities.
    """
    a, b = _as_bound(a), _as_bound(b)
    if not a < b:
        raise ExactAlgebraError("need a < b")
    seq = SturmSequence(p)
    n = seq.count(a, b)
    if closed and not (isinstance(a, float)) and p.sign_at(a) == 0:
        n += 1
    return n


def count_real_roots(p: RatPoly1) -> int:
    """Number of distinct real roots of ``p`` on the whole line."""
    return SturmSequence(p).count(-math.inf, math.inf)


def poly_gcd(p: RatPoly1, q: RatPoly1) -> RatPoly1:
    """Monic gcd over Q (primitive integer remainder sequence)."""
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    a, b = [mpz(c) for c in p.primitive()], [mpz(c) for c in q.primitive()]
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return RatPoly1([1], p.var)
        a, b = b, _neg_prem(a, b)
    return RatPoly1.from_ints([int(c) for c in a], 1, p.var).monic()


def squarefree_part(p: RatPoly1) -> RatPoly1:
    if p.is_zero():
        raise ExactAlgebraError("polynomial is identically zero")
    g = poly_gcd(p, p.deriv())
    return (p // g).monic() if g.degree > 0 else p.monic()


def cauchy_bound(p: RatPoly1) -> Fraction:
    """``1 + max |c_i / lc|``: every root lies strictly inside ``(-B, B)``."""
    if p.degree < 1:
        raise ExactAlgebraError("polynomial has no roots")
    lc = abs(p._num[-1])
    m = max(abs(c) for c in p._num[:-1])
    return 1 + Fraction(m, lc)


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in the closed interval ``[lo, hi]``."""
    lo, hi = as_fraction(lo), as_fraction(hi)
    if lo > hi:
        lo, hi = hi, lo
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_between(-hi, -lo)
    fl = lo.numerator // lo.denominator
    if Fraction(fl) == lo:
        return lo
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    # lo, hi share integer part fl; recurse on reciprocals of fractional parts
    inner = simplest_between(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / inner


def isolate_real_roots(p: RatPoly1, tol=None) -> list:
    """Disjoint sorted intervals ``(a, b]`` each holding exactly one real root.

    Multiple roots are reported once (square-free part).  If ``tol`` is given,
    every interval is refined to width at most ``tol``.
    """
    if p.is_zero():
        raise ExactAlgebraError("polynomial is identically zero")
    if p.degree < 1:
        return []
    seq = SturmSequence(p)
    bound = cauchy_bound(p)
    tol = as_fraction(tol) if tol is not None else None
    out = []
    stack = [(-bound, bound, seq.variations(-bound), seq.variations(bound))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1 and (tol is None or b - a <= tol):
            out.append((a, b))
            continue
        mid = (a + b) / 2
        vm = seq.variations(mid)
        stack.append((mid, b, vm, vb))
        stack.append((a, mid, va, vm))
    out.sort()
    return out


def refine_root(p: RatPoly1, interval, tol) -> tuple:
    """Bisect an isolating interval ``(a, b]`` of ``p`` down to width ``tol``."""
    seq = SturmSequence(p)
    a, b = map(as_fraction, interval)
    tol = as_fraction(tol)
    if seq.count(a, b) != 1:
        raise ExactAlgebraError("interval does not isolate exactly one root")
    while b - a > tol:
        mid = (a + b) / 2
        if seq.count(a, mid) == 1:
            b = mid
        else:
            a = mid
    return a, b


# ---------------------------------------------------------------------------
# bivariate polynomials


class RatPoly2:
    """Sparse bivariate polynomial ``sum c_ij * x^i * y^j`` over Q."""

    __slots__ = ("terms", "vars")

    def __init__(self, terms=None, vars: tuple = ("x", "y")):
        clean = {}
        for (i, j), c in (terms or {}).items():
            c = as_fraction(c)
            if c:
                clean[(int(i), int(j))] = c
        self.terms = clean
        self.vars = tuple(vars)

    @classmethod
    def var(cls, name: str, vars=("x", "y")) -> "RatPoly2":
        idx = vars.index(name)
        return cls({(1, 0) if idx == 0 else (0, 1): 1}, vars)

    @classmethod
    def constant(cls, c, vars=("x", "y")) -> "RatPoly2":
        return cls({(0, 0): c}, vars)

    @classmethod
    def from_univariate(cls, p: RatPoly1, which: int = 0, vars=("x", "y")) -> "RatPoly2":
        return cls({((i, 0) if which == 0 else (0, i)): c for i, c in enumerate(p.coeffs)}, vars)

    def is_zero(self) -> bool:
        return not self.terms

    def _idx(self, var) -> int:
        if isinstance(var, int):
            return var
        return self.vars.index(var)

    def degree(self, var) -> int:
        k = self._idx(var)
        return max((m[k] for m in self.terms), default=-1)

    @property
    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def _coerce(self, other):
        if isinstance(other, RatPoly2):
            return other
        if isinstance(other, (int, Fraction, Rational, str)):
            return RatPoly2({(0, 0): other}, self.vars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return RatPoly2(t, self.vars)

    __radd__ = __add__

    def __neg__(self):
        return RatPoly2({m: -c for m, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t: dict = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                t[k] = t.get(k, 0) + c1 * c2
        return RatPoly2(t, self.vars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = RatPoly2({(0, 0): 1}, self.vars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, RatPoly2):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == RatPoly2({(0, 0): other}, self.vars)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self):
        return f"RatPoly2({self.to_str()!r}, vars={self.vars!r})"

    def to_str(self) -> str:
        x, y = self.vars
        parts = []
        for (i, j), c in sorted(self.terms.items(), reverse=True):
            mon = "*".join(
                s for s in (
                    (x if i == 1 else f"{x}^{i}") if i else "",
                    (y if j == 1 else f"{y}^{j}") if j else "",
                ) if s
            )
            parts.append(f"{c}*{mon}" if mon else f"{c}")
        return " + ".join(parts) or "0"

    def deriv(self, var) -> "RatPoly2":
        k = self._idx(var)
        t = {}
        for m, c in self.terms.items():
            if m[k]:
                nm = (m[0] - 1, m[1]) if k == 0 else (m[0], m[1] - 1)
                t[nm] = c * m[k]
        return RatPoly2(t, self.vars)

    def integrate(self, var) -> "RatPoly2":
        """Antiderivative in ``var`` vanishing where ``var = 0``."""
        k = self._idx(var)
        t = {}
        for m, c in self.terms.items():
            nm = (m[0] + 1, m[1]) if k == 0 else (m[0], m[1] + 1)
            t[nm] = c / nm[k]
        return RatPoly2(t, self.vars)

    def __call__(self, x, y):
        acc = None
        for (i, j), c in self.terms.items():
            term = (x ** i) * (y ** j) * (float(c) if isinstance(x, float) else c)
            acc = term if acc is None else acc + term
        if acc is None:
            return 0.0 if isinstance(x, float) else Fraction(0)
        return acc

    def substitute(self, var, value) -> RatPoly1:
        """Fix ``var`` to an exact rational; returns a polynomial in the other one."""
        k = self._idx(var)
        value = as_fraction(value)
        other = self.vars[1 - k]
        coeffs: dict = {}
        for m, c in self.terms.items():
            coeffs[m[1 - k]] = coeffs.get(m[1 - k], 0) + c * value ** m[k]
        n = max(coeffs, default=-1) + 1
        return RatPoly1([coeffs.get(i, 0) for i in range(n)], other)

    def coeffs_in(self, var) -> list:
        """Coefficients as polynomials in the other variable, by powers of ``var``."""
        k = self._idx(var)
        other = self.vars[1 - k]
        n = self.degree(var) + 1
        buckets = [dict() for _ in range(n)]
        for m, c in self.terms.items():
            buckets[m[k]][m[1 - k]] = c
        out = []
        for b in buckets:
            d = max(b, default=-1) + 1
            out.append(RatPoly1([b.get(i, 0) for i in range(d)], other))
        return out

    def float_function(self):
        """Fast float evaluator ``f(x, y)`` working on scalars or numpy arrays."""
        items = [(i, j, float(c)) for (i, j), c in sorted(self.terms.items())]

        def f(x, y):
            acc = 0.0 * x
            for i, j, c in items:
                term = c
                if i:
                    term = term * (x if i == 1 else x ** i)
                if j:
                    term = term * (y if j == 1 else y ** j)
                acc = acc + term
            return acc

        return f


# ---------------------------------------------------------------------------
# resultants and discriminants


def resultant1(a: RatPoly1, b: RatPoly1) -> Fraction:
    """Resultant of two univariate polynomials over Q (Euclidean algorithm)."""
    if a.is_zero() or b.is_zero():
        return Fraction(0)
    n, m = a.degree, b.degree
    if n == 0:
        return a.lc ** m
    if m == 0:
        return b.lc ** n
    res = Fraction(1)
    while b.degree > 0:
        r = a % b
        if r.is_zero():
            return Fraction(0)
        if (n * m) % 2:
            res = -res
        res *= b.lc ** (n - r.degree)
        a, b = b, r
        n, m = m, r.degree
    return res * b.lc ** n


def _interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction], var: str) -> RatPoly1:
    """Newton divided differences, exact."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = RatPoly1([coef[-1]], var)
    xvar = RatPoly1.x(var)
    for i in range(n - 2, -1, -1):
        out = out * (xvar - xs[i]) + coef[i]
    return out


def resultant(p: RatPoly2, q: RatPoly2, eliminate) -> RatPoly1:
    """Sylvester resultant of ``p`` and ``q`` with respect to ``eliminate``.

    Computed by exact evaluation at integer points and interpolation; points
    where a leading coefficient vanishes are skipped so the specialised
    resultant equals the generic one.  If one polynomial is constant in the
    eliminated variable with value ``c``, the result is ``c**deg(other)``.
    """
    k = p._idx(eliminate)
    keep = p.vars[1 - k]
    cp, cq = p.coeffs_in(eliminate), q.coeffs_in(eliminate)
    if not cp or not cq:
        return RatPoly1([], keep)
    n, m = len(cp) - 1, len(cq) - 1
    if n == 0 and m == 0:
        return RatPoly1([1], keep)
    if n == 0:
        return cp[0] ** m
    if m == 0:
        return cq[0] ** n
    dp = max(c.degree for c in cp)
    dq = max(c.degree for c in cq)
    bound = m * max(dp, 0) + n * max(dq, 0)
    xs, ys = [], []
    t = 0
    while len(xs) < bound + 1:
        pt = Fraction((t + 1) // 2 * (1 if t % 2 else -1))
        t += 1
        if cp[-1](pt) == 0 or cq[-1](pt) == 0:
            continue
        a = RatPoly1([c(pt) for c in cp], eliminate)
        b = RatPoly1([c(pt) for c in cq], eliminate)
        xs.append(pt)
        ys.append(resultant1(a, b))
    return _interpolate(xs, ys, keep)


def discriminant(p, var=None):
    """Discriminant ``(-1)^(n(n-1)/2) / lc(p) * Res(p, p')``.

    With this normalisation ``disc(x^2 + b x + c) = b^2 - 4c``.  For a
    univariate ``p`` a Fraction is returned; for a :class:`RatPoly2` the
    result is a polynomial in the remaining variable.
    """
    if isinstance(p, RatPoly1):
        n = p.degree
        if n < 1:
            raise ExactAlgebraError("discriminant needs degree >= 1")
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        return sign * resultant1(p, p.deriv()) / p.lc
    if var is None:
        var = p.vars[0]
    n = p.degree(var)
    if n < 1:
        raise ExactAlgebraError("discriminant needs degree >= 1")
    res = resultant(p, p.deriv(var), var)
    lc = p.coeffs_in(var)[-1]
    q, r = res.divmod(lc)
    if not r.is_zero():
        raise ExactAlgebraError("leading coefficient does not divide resultant")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return q * sign


# ---------------------------------------------------------------------------
# rational interval arithmetic


class Interval:
    """Closed interval with exact rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = as_fraction(lo)
        hi = lo if hi is None else as_fraction(hi)
        if lo > hi:
            raise ExactAlgebraError("empty interval")
        self.lo, self.hi = lo, hi

    @classmethod
    def point(cls, x) -> "Interval":
        return cls(x, x)

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def strictly_inside(self, other: "Interval") -> bool:
        return other.lo < self.lo and self.hi < other.hi

    def _c(self, o):
        return o if isinstance(o, Interval) else Interval.point(o)

    def __add__(self, o):
        o = self._c(o)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, o):
        return self + (-self._c(o))

    def __rsub__(self, o):
        return self._c(o) - self

    def __mul__(self, o):
        o = self._c(o)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k == 0:
            return Interval.point(1)
        lo, hi = self.lo ** k, self.hi ** k
        if k % 2 == 0:
            if self.lo <= 0 <= self.hi:
                return Interval(0, max(lo, hi))
            return Interval(min(lo, hi), max(lo, hi))
        return Interval(lo, hi)

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi})"
