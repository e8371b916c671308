"""Offset curves around a hyperbolic cycle that are transversal to the flow.

Around a ``T``-periodic cycle ``g(t)`` with Floquet exponent ``kappa`` the
curve ``z(t) = g + eps * w(t) * perp(g')`` with weight
``w = exp(int_0^t div - kappa t) / |g'|^2`` is closed and, for small
``eps``, crossed by the flow in one direction only.  ``perp(v) = (v2, -v1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .cycles import CycleEstimate, hyperbolicity
from .flow import Trajectory
from .sysmodel import PolyVectorField

__all__ = [
    "ArcBand",
    "BandCurve",
    "BandError",
    "Transversality",
    "band_values",
    "build_band",
    "expansion_ratio",
    "numeric_transversality",
    "open_arc_band",
    "sample_points",
    "search_epsilon",
]


class BandError(ValueError):
    pass


def _perp(v: np.ndarray) -> np.ndarray:
    return np.stack([v[..., 1], -v[..., 0]], axis=-1)


def band_values(V: PolyVectorField, t, gamma, integral, eps: float, K: float) -> dict:
    """Offset curve, its derivative and weight at given orbit samples.

    ``gamma`` holds orbit points at times ``t`` and ``integral`` the running
    divergence integral there.  Derivatives are exact in terms of the field:
    ``g'' = DX(g) g'`` and ``w' = (div - K - 2 g'.g''/|g'|^2) w``.
    """
    t = np.asarray(t, dtype=float)
    x, y = gamma[..., 0], gamma[..., 1]
    p, q = V.float_rhs()(x, y)
    g1 = np.stack([p, q], axis=-1)
    px, py, qx, qy = V.float_jacobian()(x, y)
    g2 = np.stack([px * g1[..., 0] + py * g1[..., 1], qx * g1[..., 0] + qy * g1[..., 1]], axis=-1)
    speed2 = np.sum(g1 * g1, axis=-1)
    if np.any(speed2 <= 1e-24):
        raise BandError("orbit velocity vanishes at a sample (corrupt cycle data)")
    E = np.exp(integral - K * t)
    w = E / speed2
    div = V.float_divergence()(x, y)
    dw = (div - K - 2 * np.sum(g1 * g2, axis=-1) / speed2) * w
    z = gamma + eps * w[..., None] * _perp(g1)
    dz = g1 + eps * (dw[..., None] * _perp(g1) + w[..., None] * _perp(g2))
    return {"z": z, "dz": dz, "w": w, "dw": dw, "E": E, "gamma": gamma, "dgamma": g1}


def _contact(V: PolyVectorField, z: np.ndarray, dz: np.ndarray) -> np.ndarray:
    """``X(z) . perp(z')`` = ``P z2' - Q z1'``."""
    p, q = V.float_rhs()(z[..., 0], z[..., 1])
    return p * dz[..., 1] - q * dz[..., 0]


@dataclass(frozen=True)
class BandCurve:
    parent: CycleEstimate = field(repr=False)
    epsilon: float
    ts: np.ndarray = field(repr=False)
    u_table: np.ndarray = field(repr=False)
    point_table: np.ndarray = field(repr=False)
    side: str

    @property
    def T(self) -> float:
        return self.parent.T

    def values(self, t) -> dict:
        ce = self.parent
        st = ce.evaluate(t)
        return band_values(ce.system, t, st[..., :2], st[..., 2], self.epsilon, ce.kappa)

    def __call__(self, t) -> np.ndarray:
        return self.values(t)["z"]

    def section_crossing(self) -> float:
        """Section parameter where the band meets the cycle's section.

        The band starts slightly off the section line, so the crossing is
        the sign change of the section functional nearest to ``t = 0``.
        """
        sec = self.parent.section
        n = len(self.ts) - 1
        t = self.ts[:-1]
        g = np.array([sec.functional(z) for z in self.point_table[:-1]])
        order = np.argsort(np.minimum(np.arange(n), n - np.arange(n)))
        for i in order:
            j = (i + 1) % n
            if g[i] == 0 and sec.contains(sec.parameter(self.point_table[i])):
                return sec.parameter(self.point_table[i])
            if g[i] * g[j] < 0:
                a, b = t[i], t[i] + self.T / n

                def h(s):
                    return sec.functional(self(s))

                tc = brentq(h, a, b, xtol=1e-14)
                r = sec.parameter(self(tc))
                if sec.contains(r):
                    return r
        raise BandError("band does not cross its section")


def build_band(ce: CycleEstimate, epsilon: float, hyperbolic_threshold: float = 1e-4,
               periodicity_tol: float = 1e-8) -> BandCurve:
    if epsilon == 0:
        raise BandError("epsilon must be nonzero")
    if not hyperbolicity(ce, hyperbolic_threshold).hyperbolic:
        raise BandError("cycle is numerically non-hyperbolic (kappa ~ 0)")
    vals = band_values(ce.system, ce.ts, ce.states, ce.div_integral, epsilon, ce.kappa)
    w = vals["w"]
    mismatch = abs(w[-1] - w[0]) / abs(w[0])
    if mismatch > periodicity_tol:
        raise BandError(f"weight is not periodic: endpoint mismatch {mismatch:.2e}")
    if np.any(w <= 0):
        raise BandError("weight must be positive")
    side = "outer" if epsilon * ce.orientation > 0 else "inner"
    return BandCurve(ce, float(epsilon), ce.ts, w, vals["z"], side)


@dataclass(frozen=True)
class Transversality:
    min_abs: float
    sign: int
    constant: bool
    values: np.ndarray = field(repr=False)


def _summarize(f: np.ndarray) -> Transversality:
    pos, neg = bool(np.all(f > 0)), bool(np.all(f < 0))
    return Transversality(float(np.min(np.abs(f))), 1 if pos else (-1 if neg else 0), pos or neg, f)


def numeric_transversality(bc: BandCurve, V: PolyVectorField | None = None,
                           samples: int | None = None) -> Transversality:
    """Contact function of the band on a dense time grid (floating point)."""
    V = V or bc.parent.system
    if samples is None:
        t = bc.ts
        ce = bc.parent
        vals = band_values(V, t, ce.states, ce.div_integral, bc.epsilon, ce.kappa)
    else:
        t = np.linspace(0.0, bc.T, samples, endpoint=False)
        vals = bc.values(t)
    return _summarize(_contact(V, vals["z"], vals["dz"]))


def sample_points(bc: BandCurve, n: int) -> np.ndarray:
    """``n`` points at times ``i T / n``, ``i = 0..n-1``."""
    if n < 3 or n % 2 == 0:
        raise BandError(f"n must be odd and >= 3, got {n}")
    t = np.arange(n) * (bc.T / n)
    return bc(t)


def search_epsilon(ce: CycleEstimate, epsilon: float, max_halvings: int = 20) -> BandCurve:
    """Halve ``|epsilon|`` until the band passes the numeric transversality check."""
    eps = float(epsilon)
    for _ in range(max_halvings + 1):
        bc = build_band(ce, eps)
        if numeric_transversality(bc).constant:
            return bc
        eps /= 2
    raise BandError(f"no transversal band found down to epsilon = {2 * eps:g}")


def expansion_ratio(ce: CycleEstimate, epsilon: float) -> np.ndarray:
    """``f(t) / (kappa E(t) eps)`` on the cycle grid; tends to 1 as ``eps -> 0``."""
    vals = band_values(ce.system, ce.ts, ce.states, ce.div_integral, epsilon, ce.kappa)
    f = _contact(ce.system, vals["z"], vals["dz"])
    return f / (ce.kappa * vals["E"] * epsilon)


@dataclass(frozen=True)
class ArcBand:
    ts: np.ndarray = field(repr=False)
    points: np.ndarray = field(repr=False)
    contact: np.ndarray = field(repr=False)
    K: float
    epsilon: float

    @property
    def expected_sign(self) -> int:
        return 1 if self.K * self.epsilon > 0 else -1

    @property
    def transversality(self) -> Transversality:
        return _summarize(self.contact)


def open_arc_band(V: PolyVectorField, orbit: Trajectory, K: float, epsilon: float,
                  samples: int = 1001) -> ArcBand:
    """Offset of a finite orbit arc with a user constant ``K`` in place of kappa.

    ``orbit`` must carry the divergence integral (``with_divergence=True``).
    To first order in ``eps`` the contact function is ``K E eps``.
    """
    if K == 0:
        raise BandError("K must be nonzero")
    if epsilon == 0:
        raise BandError("epsilon must be nonzero")
    if orbit.states.shape[1] != 3:
        raise BandError("orbit must be integrated with the divergence integral")
    if not orbit.t_end > orbit.t_start or math.isclose(orbit.t_end, orbit.t_start):
        raise BandError("orbit segment is degenerate")
    t = np.linspace(orbit.t_start, orbit.t_end, samples)
    st = orbit(t)
    vals = band_values(V, t, st[:, :2], st[:, 2], float(epsilon), float(K))
    f = _contact(V, vals["z"], vals["dz"])
    return ArcBand(t, vals["z"], f, float(K), float(epsilon))
