"""Numerical limit cycles: displacement-map roots, Floquet exponent, spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .flow import FlowError, Section, Trajectory, section_return
from .sysmodel import PolyVectorField

__all__ = [
    "CycleError",
    "CycleEstimate",
    "Hyperbolicity",
    "Spectrum",
    "displacement",
    "find_cycle",
    "fourier_coefficients",
    "fourier_spectrum",
    "hyperbolicity",
    "orbit_estimate",
    "scan_displacement",
]

DEFAULT_SAMPLES = 4096


class CycleError(RuntimeError):
    pass


@dataclass(frozen=True)
class CycleEstimate:
    """A periodic orbit through ``section.point(x0_star)``, in forward time.

    ``ts`` is the equispaced grid ``i*T/samples`` for ``i = 0..samples``
    (both endpoints included); ``div_integral[i]`` is the integral of the
    divergence from 0 to ``ts[i]``.
    """

    system: PolyVectorField = field(repr=False)
    section: Section
    x0_star: float
    T: float
    kappa: float
    ts: np.ndarray = field(repr=False)
    states: np.ndarray = field(repr=False)
    velocities: np.ndarray = field(repr=False)
    div_integral: np.ndarray = field(repr=False)
    stability: str
    _trajectory: Trajectory = field(repr=False, compare=False)
    _reversed: bool = field(repr=False, compare=False, default=False)

    @property
    def samples(self) -> int:
        return len(self.ts) - 1

    def evaluate(self, t):
        """``(x, y, int_0^t div)`` at arbitrary times, extended periodically."""
        t = np.asarray(t, dtype=float)
        k = np.floor(t / self.T)
        s = t - k * self.T
        total = self.kappa * self.T
        if self._reversed:
            raw = self._trajectory(self.T - s)
            end = self._trajectory.states[-1, 2]
            out = np.array(raw, copy=True)
            out[..., 2] = raw[..., 2] - end
        else:
            out = np.array(self._trajectory(s), copy=True)
        out[..., 2] = out[..., 2] + k * total
        return out

    @property
    def orientation(self) -> int:
        """+1 for counterclockwise traversal, -1 for clockwise."""
        x, y = self.states[:-1, 0], self.states[:-1, 1]
        area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
        return 1 if area > 0 else -1

    def closure_error(self) -> float:
        return float(np.linalg.norm(self.states[-1, :2] - self.states[0, :2]))


def displacement(V: PolyVectorField, section: Section, r: float, tol: float = 1e-12,
                 period_hint: float | None = None) -> float:
    return section_return(V, section, r, tol=tol, period_hint=period_hint).r1 - r


def scan_displacement(V: PolyVectorField, section: Section, rs, tol: float = 1e-10) -> list:
    """Displacement on a grid of section parameters and sign-change brackets.

    Returns ``[(lo, hi, kind)]`` with ``kind`` ``"stable"`` when orbits move
    toward the zero and ``"unstable"`` when they move away.
    """
    vals = []
    for r in rs:
        try:
            vals.append(displacement(V, section, float(r), tol))
        except FlowError:
            vals.append(math.nan)
    out = []
    for (r0, d0), (r1, d1) in zip(zip(rs, vals), zip(rs[1:], vals[1:])):
        if math.isnan(d0) or math.isnan(d1):
            continue
        if d0 > 0 > d1:
            out.append((float(r0), float(r1), "stable"))
        elif d0 < 0 < d1:
            out.append((float(r0), float(r1), "unstable"))
    return out


def _field_for(V, section, reverse):
    if not reverse:
        return V, section
    sec = section if section.orientation is None else section.with_orientation(-section.orientation)
    return V.reversed(), sec


def orbit_estimate(V: PolyVectorField, section: Section, r0: float, tol: float = 1e-12,
                   samples: int = DEFAULT_SAMPLES, reverse: bool = False) -> CycleEstimate:
    """Tabulate one return from ``r0`` as a closed orbit (no root finding).

    With ``reverse`` the orbit is integrated under the reversed field and
    re-expressed in the original time direction.
    """
    W, sec = _field_for(V, section, reverse)
    ret = section_return(W, sec, r0, tol=tol, with_divergence=True)
    T = ret.T
    traj = ret.trajectory
    ts = np.linspace(0.0, T, samples + 1)
    if reverse:
        raw = traj(T - ts)
        end = traj.states[-1, 2]
        # reversed-field divergence is the negative of the original one
        I = raw[:, 2] - end
        states = raw[:, :2]
    else:
        raw = traj(ts)
        I = raw[:, 2]
        states = raw[:, :2]
    states = np.array(states)
    states[0] = section.point(r0)
    I = np.array(I)
    I[0] = 0.0
    p, q = V.float_rhs()(states[:, 0], states[:, 1])
    vel = np.stack([p, q], axis=-1)
    kappa = float(I[-1] / T)
    return CycleEstimate(
        system=V, section=section, x0_star=float(r0), T=float(T), kappa=kappa,
        ts=ts, states=states, velocities=vel, div_integral=I,
        stability="stable" if kappa < 0 else "unstable",
        _trajectory=traj, _reversed=reverse,
    )


def find_cycle(V: PolyVectorField, section: Section, bracket, tol: float = 1e-10,
               direction: str = "auto", samples: int = DEFAULT_SAMPLES,
               integration_tol: float = 1e-12) -> CycleEstimate:
    """Zero of the displacement map inside ``bracket``.

    ``direction`` is ``"forward"``, ``"reverse"`` or ``"auto"``; in auto mode
    a bracket on which orbits move away from the zero (an unstable cycle) is
    re-solved under the reversed field, where the cycle attracts.
    """
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")
    if direction not in ("auto", "forward", "reverse"):
        raise ValueError(f"unknown direction {direction!r}")
    reverse = direction == "reverse"
    try:
        d_lo = displacement(V, section, lo, integration_tol)
        d_hi = displacement(V, section, hi, integration_tol)
    except FlowError as exc:
        raise CycleError(f"non-return at a bracket end: {exc}") from exc
    if d_lo * d_hi > 0:
        raise CycleError(f"displacement has no sign change on [{lo}, {hi}]")
    if direction == "auto" and d_lo < 0 < d_hi:
        reverse = True
    W, sec = _field_for(V, section, reverse)
    if reverse:
        d_lo = displacement(W, sec, lo, integration_tol)
        d_hi = displacement(W, sec, hi, integration_tol)
        if d_lo * d_hi > 0:
            raise CycleError("displacement of the reversed flow has no sign change")

    def d(r):
        return displacement(W, sec, r, integration_tol)

    try:
        r_star = brentq(d, lo, hi, xtol=tol * 1e-2, rtol=4 * np.finfo(float).eps, maxiter=200)
    except FlowError as exc:
        raise CycleError(f"non-return during refinement: {exc}") from exc
    if abs(d(r_star)) > tol:
        raise CycleError(f"refined displacement {d(r_star):.3e} exceeds tol {tol:.1e}")
    return orbit_estimate(V, section, r_star, integration_tol, samples, reverse)


@dataclass(frozen=True)
class Hyperbolicity:
    kappa: float
    multiplier: float
    hyperbolic: bool


def hyperbolicity(ce: CycleEstimate, threshold: float = 1e-4) -> Hyperbolicity:
    """Floquet exponent, return-map multiplier ``exp(kappa T)`` and a flag.

    The orbit counts as numerically non-hyperbolic when ``|kappa T|`` is
    below ``threshold``.
    """
    kt = ce.kappa * ce.T
    return Hyperbolicity(ce.kappa, math.exp(kt), abs(kt) >= threshold)


@dataclass(frozen=True)
class Spectrum:
    """Fourier data per component; index ``k`` of ``cos``/``sin`` is harmonic ``k``."""

    const: np.ndarray
    cos: np.ndarray
    sin: np.ndarray

    @property
    def magnitudes(self) -> np.ndarray:
        """``sqrt(a_k^2 + b_k^2)``, shape ``(2, max_m)`` for ``k = 1..max_m``."""
        return np.hypot(self.cos[:, 1:], self.sin[:, 1:])

    def harmonic(self, k: int, component: int = 0) -> float:
        return float(np.hypot(self.cos[component, k], self.sin[component, k]))


def fourier_coefficients(samples, max_m: int) -> Spectrum:
    """Trapezoid-rule Fourier coefficients of equispaced periodic samples.

    ``samples`` has shape ``(n, d)`` and holds one period without the
    repeated endpoint.  ``a_k = (2/n) sum f_i cos(2 pi k i / n)``; ``const``
    is the mean value (``a_0 / 2``).
    """
    f = np.asarray(samples, dtype=float)
    if f.ndim == 1:
        f = f[:, None]
    n = f.shape[0]
    if max_m < 0 or max_m > n // 2:
        raise ValueError(f"max_m must lie in [0, {n // 2}]")
    spec = np.fft.rfft(f, axis=0)[: max_m + 1].T
    cos = 2 * spec.real / n
    sin = -2 * spec.imag / n
    cos[:, 0] = spec[:, 0].real / n
    sin[:, 0] = 0.0
    return Spectrum(cos[:, 0].copy(), cos, sin)


def fourier_spectrum(ce, max_m: int) -> Spectrum:
    """Spectrum of a cycle resampled equispaced in time (or of raw samples)."""
    if isinstance(ce, CycleEstimate):
        return fourier_coefficients(ce.states[:-1], max_m)
    return fourier_coefficients(ce, max_m)
