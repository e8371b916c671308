"""Exact certificates for transversal trigonometric curves and annuli.

A rational curve ``w(theta)`` is transversal to ``X = (P, Q)`` when the
contact function ``f = P(w) y' - Q(w) x'`` never vanishes.  Writing
``u = cos theta`` and ``v = sin theta``, ``f = A(u) + v B(u)`` and ``f``
vanishes on the circle only where ``R = A^2 + (u^2 - 1) B^2`` does, so a
Sturm count of zero for ``R`` on ``[-1, 1]`` proves transversality.

Simplicity, disjointness, containment and the position of equilibria are
certified on a grid of exact rational points of the unit circle using
bounds on the first two derivatives of the curve.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exactalg import RatPoly1, SturmSequence
from .sysmodel import EquilibriumBox, PolyVectorField
from .trigcurve import CircleGrid, TrigCurve, TrigPoly

__all__ = [
    "AnnulusCertificate",
    "CertificationFailed",
    "NonvanishingProof",
    "Status",
    "TransversalityCertificate",
    "build_annulus",
    "certified_positive_on_grid",
    "certify_curve",
    "circle_resultant",
    "contact_function",
    "contact_values",
    "curve_distance_certificate",
    "find_sign_change",
    "global_sign",
    "orientation",
    "prove_no_zero",
    "prove_simple",
    "winding_number",
]


class CertificationFailed(RuntimeError):
    pass


class Status(str, enum.Enum):
    PROVED_NONVANISHING = "PROVED_NONVANISHING"
    INCONCLUSIVE = "INCONCLUSIVE"
    IDENTICALLY_ZERO = "IDENTICALLY_ZERO"


# ---------------------------------------------------------------------------
# contact function in (u, v) form

_ONE_MINUS_U2 = RatPoly1([1, 0, -1])


def _rmul(p: tuple, q: tuple) -> tuple:
    """Product in ``Q[u][v] / (v^2 + u^2 - 1)``; elements are ``a + v b``."""
    a1, b1 = p
    a2, b2 = q
    return (a1 * a2 + _ONE_MINUS_U2 * (b1 * b2), a1 * b2 + a2 * b1)


def _radd(p: tuple, q: tuple) -> tuple:
    return (p[0] + q[0], p[1] + q[1])


def _rscale(p: tuple, c) -> tuple:
    return (p[0] * c, p[1] * c)


def _compose(poly, X: tuple, Y: tuple) -> tuple:
    """``poly(X, Y)`` for ring elements ``X``, ``Y``."""
    one = (RatPoly1([1]), RatPoly1([]))
    dx = max((i for i, _ in poly.terms), default=0)
    dy = max((j for _, j in poly.terms), default=0)
    xp, yp = [one], [one]
    for _ in range(dx):
        xp.append(_rmul(xp[-1], X))
    for _ in range(dy):
        yp.append(_rmul(yp[-1], Y))
    acc = (RatPoly1([]), RatPoly1([]))
    for (i, j), c in sorted(poly.terms.items()):
        acc = _radd(acc, _rscale(_rmul(xp[i], yp[j]), c))
    return acc


def contact_function(V: PolyVectorField, curve: TrigCurve) -> tuple:
    """Exact ``(A, B)`` with ``P(w) y' - Q(w) x' = A(cos) + sin * B(cos)``."""
    if curve.mode != "rational":
        raise ValueError("contact function needs a rational curve")
    X, Y = curve.x.chebyshev(), curve.y.chebyshev()
    dX, dY = curve.x.deriv().chebyshev(), curve.y.deriv().chebyshev()
    pw = _compose(V.P, X, Y)
    qw = _compose(V.Q, X, Y)
    f1 = _rmul(pw, dY)
    f2 = _rmul(qw, dX)
    return f1[0] - f2[0], f1[1] - f2[1]


def contact_values(V: PolyVectorField, curve: TrigCurve, theta) -> np.ndarray:
    """Floating-point contact function at angles ``theta``."""
    theta = np.asarray(theta, dtype=float)
    p, q = V.float_rhs()(curve.x(theta), curve.y(theta))
    d = curve.deriv()
    return p * d.y(theta) - q * d.x(theta)


def circle_resultant(A: RatPoly1, B: RatPoly1) -> RatPoly1:
    """``A^2 + (u^2 - 1) B^2``, the resultant of ``A + vB`` and ``u^2 + v^2 - 1`` in ``v``."""
    u2m1 = RatPoly1([-1, 0, 1], A.var)
    return A * A + u2m1 * (B * B)


# ---------------------------------------------------------------------------
# the nonvanishing proof


@dataclass(frozen=True)
class NonvanishingProof:
    status: Status
    R: RatPoly1 = field(repr=False)
    root_count: int
    sturm_table: list = field(repr=False, default_factory=list)
    gcd_degree: int = 0

    @property
    def proved(self) -> bool:
        return self.status is Status.PROVED_NONVANISHING


def prove_no_zero(A: RatPoly1, B: RatPoly1) -> NonvanishingProof:
    """Tri-state proof that ``A(u) + v B(u)`` has no zero on ``u^2 + v^2 = 1``.

    ``root_count`` is the number of distinct roots of ``R`` in the closed
    interval ``[-1, 1]``.
    """
    if A.is_zero() and B.is_zero():
        return NonvanishingProof(Status.IDENTICALLY_ZERO, RatPoly1([]), -1)
    R = circle_resultant(A, B)
    if R.degree < 1:
        return NonvanishingProof(Status.PROVED_NONVANISHING, R, 0, [], 0)
    seq = SturmSequence(R)
    count = seq.count(Fraction(-1), Fraction(1))
    if R.sign_at(Fraction(-1)) == 0:
        count += 1
    status = Status.PROVED_NONVANISHING if count == 0 else Status.INCONCLUSIVE
    table = seq.table([Fraction(-1), Fraction(1)])
    return NonvanishingProof(status, R, count, table, seq.gcd_degree)


def global_sign(A: RatPoly1, B: RatPoly1, proof: NonvanishingProof | None = None) -> int:
    """Sign of ``f`` on the whole circle, read at ``theta = 0`` (``u = 1, v = 0``)."""
    if proof is None:
        proof = prove_no_zero(A, B)
    if not proof.proved:
        raise CertificationFailed("global sign requires a nonvanishing proof")
    s = A.sign_at(Fraction(1))
    if s == 0:  # impossible once the proof holds
        raise CertificationFailed("A(1) = 0 contradicts the nonvanishing proof")
    return s


def find_sign_change(A: RatPoly1, B: RatPoly1, N: int = 512):
    """Two exact circle points where ``A + vB`` has opposite signs, or ``None``.

    Floating-point sampling proposes the pair; the signs are then confirmed
    in exact arithmetic.
    """
    grid = CircleGrid(N)
    pts = grid.integer_points
    ca = A.to_float_coeffs() if not A.is_zero() else [0.0]
    cb = B.to_float_coeffs() if not B.is_zero() else [0.0]
    uu = np.array([a / q for a, _, q in pts])
    vv = np.array([b / q for _, b, q in pts])
    f = np.polynomial.polynomial.polyval(uu, ca) + vv * np.polynomial.polynomial.polyval(uu, cb)
    sgn = np.sign(f)
    i_pos = np.nonzero(sgn > 0)[0]
    i_neg = np.nonzero(sgn < 0)[0]
    if not len(i_pos) or not len(i_neg):
        return None
    # try the most pronounced values first
    ip = i_pos[np.argmax(f[i_pos])]
    ineg = i_neg[np.argmin(f[i_neg])]
    out = []
    for i in (ip, ineg):
        a, b, q = pts[i]
        u, v = Fraction(a, q), Fraction(b, q)
        val = A(u) + v * B(u)
        out.append(((u, v), val))
    if out[0][1] > 0 > out[1][1]:
        return out
    return None


# ---------------------------------------------------------------------------
# orientation


@dataclass(frozen=True)
class Orientation:
    label: str
    area_over_pi: Fraction

    @property
    def sign(self) -> int:
        return 1 if self.label == "ccw" else -1


def orientation(curve: TrigCurve) -> Orientation:
    """Exact signed area (as a multiple of pi) and the traversal sense."""
    a = curve.signed_area_over_pi()
    if a == 0:
        raise CertificationFailed("curve encloses zero signed area (degenerate)")
    return Orientation("ccw" if a > 0 else "cw", a)


# ---------------------------------------------------------------------------
# grid certificates


def _sqrt_bounds(q: Fraction, bits: int = 40) -> tuple:
    """Rational ``lo <= sqrt(q) <= hi`` with relative gap about ``2^-bits``."""
    if q < 0:
        raise ValueError("negative argument")
    n, d = q.numerator, q.denominator
    S = 1 << bits
    s = math.isqrt(n * d * S * S)
    lo = Fraction(s, d * S)
    hi = lo if s * s == n * d * S * S else Fraction(s + 1, d * S)
    return lo, hi


def _round_up(x: Fraction) -> float:
    f = float(x)
    return f + abs(f) * 4e-16 + 5e-324


@dataclass(frozen=True)
class GridPositivity:
    ok: bool
    N: int
    lipschitz: Fraction
    min_sample: Fraction | None

    def __bool__(self) -> bool:
        return self.ok


def certified_positive_on_grid(g: TrigPoly, N: int = 16, max_N: int = 4096) -> GridPositivity:
    """Prove ``g > 0`` from exact samples on a rational circle grid.

    Consecutive grid angles are at most ``h = 2/N`` apart and
    ``|g'| <= L = sum k (|a_k| + |b_k|)``, so ``g >= (g_i + g_{i+1})/2 - L h/2``
    on each gap.  ``N`` doubles up to ``max_N``.
    """
    if not g.exact:
        raise ValueError("grid certification needs exact coefficients")
    L = Fraction(g.lipschitz(1))
    while True:
        grid = CircleGrid(N)
        vals = g.exact_values(grid)
        need = L / N  # L * h / 2 with h = 2/N
        mn = min(vals)
        if mn <= 0:
            return GridPositivity(False, N, L, mn)
        ok = all((a + b) / 2 > need for a, b in zip(vals, vals[1:] + vals[:1]))
        if ok:
            return GridPositivity(True, N, L, mn)
        if N * 2 > max_N:
            return GridPositivity(False, N, L, mn)
        N *= 2


class _CurveGrid:
    """Exact samples of a rational curve and per-cell enclosure radii.

    Cell ``a`` is the arc from grid angle ``a`` to ``a + 1`` (length ``<= h``).
    Every point of the cell lies within ``r_a`` of ``w_a`` and the speed on
    the cell is at least ``c_a``.
    """

    def __init__(self, curve: TrigCurve, N: int):
        self.N = N
        grid = CircleGrid(N)
        self.n = len(grid)
        self.h = Fraction(2, N)
        self.pts = curve.exact_points(grid)
        d = curve.deriv()
        dpts = d.exact_points(grid)
        self.M1 = Fraction(curve.speed_bound())
        self.M2 = Fraction(curve.accel_bound())
        h, M2 = self.h, self.M2
        self.r, self.c = [], []
        for dx, dy in dpts:
            lo, hi = _sqrt_bounds(dx * dx + dy * dy)
            self.r.append(hi * h + M2 * h * h / 2)
            self.c.append(lo - M2 * h)
        self.fpts = np.array([[float(x), float(y)] for x, y in self.pts])
        self.fr = np.array([_round_up(r) for r in self.r])
        self.scale = float(np.max(np.abs(self.fpts))) + 1.0

    def near_cells(self) -> np.ndarray:
        """``k_a``: offsets ``j`` with ``(j + 1) h < 2 c_a / M2`` are chord-safe."""
        out = np.zeros(self.n, dtype=np.int64)
        if self.M2 == 0:
            out[:] = self.n
            return out
        for a, c in enumerate(self.c):
            if c <= 0:
                out[a] = 0
                continue
            delta = 2 * c / self.M2
            q = delta / self.h
            k = math.ceil(q) - 1  # largest k with k * h < delta
            out[a] = max(k, 0)
        return out


def _pair_check(A: _CurveGrid, B: _CurveGrid, ia: np.ndarray, ib: np.ndarray,
                extra: Fraction = Fraction(0)) -> tuple:
    """Check ``|A_a - B_b| > r_a + r_b + extra`` on index pairs.

    Floats decide clear cases with a rigorous error allowance; borderline
    pairs are re-checked exactly.  Returns ``(ok, exact_checks)``.
    """
    if len(ia) == 0:
        return True, 0
    diff = A.fpts[ia] - B.fpts[ib]
    d2 = np.einsum("ij,ij->i", diff, diff)
    rr = A.fr[ia] + B.fr[ib] + _round_up(extra)
    rr2 = rr * rr * (1 + 1e-13)
    err = 1e-13 * (A.scale + B.scale) ** 2
    passed = d2 - err > rr2
    failed = d2 + err < rr2 * (1 - 2e-13)
    if np.any(failed):
        return False, 0
    todo = np.nonzero(~passed)[0]
    for k in todo:
        a, b = int(ia[k]), int(ib[k])
        (xa, ya), (xb, yb) = A.pts[a], B.pts[b]
        lhs = (xa - xb) ** 2 + (ya - yb) ** 2
        rhs = (A.r[a] + B.r[b] + extra) ** 2
        if not lhs > rhs:
            return False, len(todo)
    return True, len(todo)


@dataclass(frozen=True)
class SimplicityEvidence:
    N: int
    h: Fraction
    speed_bound: Fraction
    accel_bound: Fraction
    min_cell_speed: Fraction
    far_pairs: int
    exact_checks: int

    def as_dict(self) -> dict:
        return {
            "grid_N": self.N, "grid_points": 4 * self.N, "max_gap": str(self.h),
            "speed_bound": str(self.speed_bound), "accel_bound": str(self.accel_bound),
            "min_cell_speed": str(self.min_cell_speed), "far_pairs": self.far_pairs,
            "exact_checks": self.exact_checks,
            "method": "rational circle grid, chord bound near the diagonal, "
                      "cell enclosure separation elsewhere",
        }


def _simple_at(G: _CurveGrid):
    n = G.n
    k = G.near_cells()
    if np.any(k < 1):
        return None
    idx = np.arange(n)
    far = 0
    exact = 0
    for j in range(1, n // 2 + 1):
        b = (idx + j) % n
        need = (j + 1) > np.maximum(k, k[b])
        if j == n // 2:
            need &= idx < b  # each antipodal pair once
        ia, ib = idx[need], b[need]
        ok, ex = _pair_check(G, G, ia, ib)
        far += len(ia)
        exact += ex
        if not ok:
            return None
    return far, exact


def prove_simple(curve: TrigCurve, N: int = 64, max_N: int = 2048) -> SimplicityEvidence:
    """Certify that a rational curve has no self-intersection.

    For ``theta_1`` in a cell, ``<w(theta_2) - w(theta_1), w'(theta_1)> > 0``
    whenever ``0 < |theta_2 - theta_1| < 2 |w'(theta_1)| / M2``, which
    settles pairs near the diagonal; all other cell pairs must have
    enclosing discs that do not meet.
    """
    if curve.mode != "rational":
        raise ValueError("simplicity proof needs a rational curve")
    while True:
        G = _CurveGrid(curve, N)
        res = _simple_at(G)
        if res is not None:
            return SimplicityEvidence(N, G.h, G.M1, G.M2, min(G.c), res[0], res[1])
        if N * 2 > max_N:
            raise CertificationFailed(f"simplicity inconclusive at grid cap N = {N}")
        N *= 2


def _polygon_winding(pts: list, p: tuple) -> int:
    """Exact winding number of the closed polygon ``pts`` around ``p``."""
    px, py = p
    wn = 0
    n = len(pts)
    for i in range(n):
        (x0, y0), (x1, y1) = pts[i], pts[(i + 1) % n]
        if y0 <= py:
            if y1 > py and (x1 - x0) * (py - y0) - (px - x0) * (y1 - y0) > 0:
                wn += 1
        elif y1 <= py and (x1 - x0) * (py - y0) - (px - x0) * (y1 - y0) < 0:
            wn -= 1
    return wn


def _winding_at(G: _CurveGrid, p: tuple, radius: Fraction):
    n = G.n
    fake = _PointGrid(p)
    ok, _ = _pair_check(G, fake, np.arange(n), np.zeros(n, dtype=np.int64), radius)
    if not ok:
        return None
    return _polygon_winding(G.pts, p)


class _PointGrid:
    def __init__(self, p):
        self.pts = [tuple(Fraction(c) for c in p)]
        self.fpts = np.array([[float(c) for c in self.pts[0]]])
        self.r = [Fraction(0)]
        self.fr = np.zeros(1)
        self.scale = float(np.max(np.abs(self.fpts))) + 1.0


def winding_number(curve: TrigCurve, point, radius=0, N: int = 64, max_N: int = 2048) -> tuple:
    """Winding number of ``curve`` around every point within ``radius`` of ``point``.

    Returns ``(winding, N)``.  The grid polygon is homotopic to the curve in
    the punctured plane once each cell's enclosing disc misses the disc
    around ``point``; its winding number is then computed exactly.
    """
    radius = Fraction(radius)
    point = tuple(Fraction(c) for c in point)
    while True:
        G = _CurveGrid(curve, N)
        w = _winding_at(G, point, radius)
        if w is not None:
            return w, N
        if N * 2 > max_N:
            raise CertificationFailed("curve passes too close to the test point")
        N *= 2


def curve_distance_certificate(c1: TrigCurve, c2: TrigCurve, N: int = 64, max_N: int = 2048) -> int:
    """Prove the two curves are disjoint; returns the grid ``N`` used."""
    while True:
        G1, G2 = _CurveGrid(c1, N), _CurveGrid(c2, N)
        n = G1.n
        ok = True
        for a0 in range(0, n, 256):
            ia = np.repeat(np.arange(a0, min(a0 + 256, n)), G2.n)
            ib = np.tile(np.arange(G2.n), min(256, n - a0))
            good, _ = _pair_check(G1, G2, ia, ib)
            if not good:
                ok = False
                break
        if ok:
            return N
        if N * 2 > max_N:
            raise CertificationFailed("curves too close to separate at the grid cap")
        N *= 2


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class TransversalityCertificate:
    curve: TrigCurve = field(repr=False)
    system: PolyVectorField = field(repr=False)
    status: Status
    contact_A: RatPoly1 = field(repr=False)
    contact_B: RatPoly1 = field(repr=False)
    resultant_R: RatPoly1 = field(repr=False)
    root_count: int
    f_sign: int
    orientation: str
    area_over_pi: Fraction
    simplicity: SimplicityEvidence | None
    sturm_table: list = field(repr=False, default_factory=list)
    refutation: list | None = field(repr=False, default=None)

    @property
    def proved(self) -> bool:
        return self.status is Status.PROVED_NONVANISHING and self.simplicity is not None

    @property
    def flux_sign(self) -> int:
        """+1 when the flow leaves the region the curve bounds, -1 when it enters."""
        return self.f_sign * (1 if self.orientation == "ccw" else -1)

    @property
    def degree_bound(self) -> int:
        return 2 * (self.system.degree + 1) * self.curve.degree


def certify_curve(V: PolyVectorField, curve: TrigCurve, check_simple: bool = True,
                  refute: bool = True, simple_max_N: int = 2048) -> TransversalityCertificate:
    """Run the full exact check of one rational curve."""
    A, B = contact_function(V, curve)
    proof = prove_no_zero(A, B)
    ori = orientation(curve)
    bound = 2 * (V.degree + 1) * curve.degree
    if proof.R.degree > bound:
        raise CertificationFailed(f"resultant degree {proof.R.degree} exceeds the bound {bound}")
    f_sign = 0
    simple = None
    witness = None
    if proof.proved:
        f_sign = global_sign(A, B, proof)
        if check_simple:
            simple = prove_simple(curve, max_N=simple_max_N)
    elif refute and proof.status is Status.INCONCLUSIVE:
        witness = find_sign_change(A, B)
    return TransversalityCertificate(
        curve, V, proof.status, A, B, proof.R, proof.root_count, f_sign,
        ori.label, ori.area_over_pi, simple, proof.sturm_table, witness,
    )


@dataclass(frozen=True)
class AnnulusCertificate:
    inner: TransversalityCertificate = field(repr=False)
    outer: TransversalityCertificate = field(repr=False)
    containment: dict
    equilibrium_exclusions: list
    crossing_direction: str

    @property
    def conclusion(self) -> str:
        kind = "attracting" if self.crossing_direction == "inward-trapping" else "repelling"
        return ("odd number of limit cycles, counted with multiplicity, inside the "
                f"{kind} annulus between the inner and outer curves")


def _direction(inner: TransversalityCertificate, outer: TransversalityCertificate) -> str:
    # flux_sign > 0: flow leaves the curve's interior
    if inner.flux_sign > 0 and outer.flux_sign < 0:
        return "inward-trapping"
    if inner.flux_sign < 0 and outer.flux_sign > 0:
        return "outward-repelling"
    raise CertificationFailed("direction mismatch: both curves are crossed the same way")


def build_annulus(inner: TransversalityCertificate, outer: TransversalityCertificate,
                  equilibria: list, N: int = 64, max_N: int = 2048) -> AnnulusCertificate:
    """Assemble the annulus certificate from two proved curves and equilibrium boxes."""
    for name, c in (("inner", inner), ("outer", outer)):
        if c.status is not Status.PROVED_NONVANISHING:
            raise CertificationFailed(f"{name} curve is not proved transversal")
        if c.simplicity is None:
            raise CertificationFailed(f"{name} curve has no simplicity proof")
    direction = _direction(inner, outer)
    n_dist = curve_distance_certificate(inner.curve, outer.curve, N, max_N)
    p0 = inner.curve.exact_points(CircleGrid(1))[0]
    w_outer, n_w = winding_number(outer.curve, p0, 0, N, max_N)
    if abs(w_outer) != 1:
        raise CertificationFailed("inner curve is not inside the outer curve")
    exclusions = []
    for box in equilibria:
        if isinstance(box, EquilibriumBox):
            center = box.center
            hx, hy = box.half_widths
        else:
            center, (hx, hy) = box
        radius = Fraction(hx) + Fraction(hy)
        wi, ni = winding_number(inner.curve, center, radius, N, max_N)
        wo, no = winding_number(outer.curve, center, radius, N, max_N)
        if abs(wi) == 1:
            where = "inside inner curve"
        elif wo == 0:
            where = "outside outer curve"
        else:
            raise CertificationFailed(f"equilibrium near {tuple(map(float, center))} lies in the annulus")
        exclusions.append({
            "center": [str(c) for c in center], "radius": str(radius),
            "winding_inner": wi, "winding_outer": wo, "location": where,
            "grid_N": max(ni, no),
        })
    containment = {
        "winding_outer_around_inner_point": w_outer,
        "inner_point": [str(c) for c in p0],
        "disjoint_grid_N": n_dist,
        "winding_grid_N": n_w,
    }
    return AnnulusCertificate(inner, outer, containment, exclusions, direction)
