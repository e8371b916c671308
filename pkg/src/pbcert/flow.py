"""Floating-point trajectories with dense output and section crossings.

Nothing here is trusted by the certification path; it only produces the
numerical cycle approximations that the exact code later checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.integrate import DOP853
from scipy.optimize import brentq

from .exactalg import as_fraction
from .sysmodel import PolyVectorField, divergence

__all__ = [
    "FlowError",
    "Section",
    "SectionReturn",
    "Trajectory",
    "integrate",
    "section_return",
]


class FlowError(RuntimeError):
    pass


@dataclass(frozen=True)
class Section:
    """Line segment ``anchor + r * direction`` with ``r_min < r < r_max``.

    ``orientation`` is the required sign of the flow across the section
    relative to the normal ``(-d_y, d_x)``; ``None`` means "whatever sign the
    flow has at the starting point".
    """

    anchor: tuple = (Fraction(0), Fraction(0))
    direction: tuple = (Fraction(1), Fraction(0))
    r_min: float = 0.0
    r_max: float = math.inf
    orientation: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "anchor", tuple(as_fraction(c) for c in self.anchor))
        object.__setattr__(self, "direction", tuple(as_fraction(c) for c in self.direction))
        if self.direction == (0, 0):
            raise ValueError("section direction must be nonzero")
        object.__setattr__(self, "r_min", float(as_fraction(self.r_min)) if self.r_min != -math.inf else -math.inf)
        object.__setattr__(self, "r_max", float(as_fraction(self.r_max)) if self.r_max != math.inf else math.inf)
        if not self.r_min < self.r_max:
            raise ValueError("section range is empty")
        if self.orientation not in (None, 1, -1):
            raise ValueError("orientation must be +1, -1 or None")

    @property
    def _a(self) -> np.ndarray:
        return np.array([float(c) for c in self.anchor])

    @property
    def _d(self) -> np.ndarray:
        return np.array([float(c) for c in self.direction])

    @property
    def normal(self) -> np.ndarray:
        d = self._d
        return np.array([-d[1], d[0]])

    def point(self, r: float) -> np.ndarray:
        return self._a + r * self._d

    def functional(self, z) -> float:
        """Signed offset of ``z`` from the section line."""
        return float(np.dot(np.asarray(z[:2]) - self._a, self.normal))

    def parameter(self, z) -> float:
        d = self._d
        return float(np.dot(np.asarray(z[:2]) - self._a, d) / np.dot(d, d))

    def contains(self, r: float) -> bool:
        return self.r_min < r < self.r_max

    def with_orientation(self, orientation: int) -> "Section":
        return Section(self.anchor, self.direction, self.r_min, self.r_max, orientation)


@dataclass(frozen=True)
class Trajectory:
    """Accepted steps of an adaptive integration plus their interpolants.

    ``states`` has two columns, or three when the running integral of the
    divergence is carried along.
    """

    ts: np.ndarray
    states: np.ndarray
    interpolants: tuple = field(repr=False)
    rtol: float = 1e-12
    atol: float = 1e-12

    @property
    def t_start(self) -> float:
        return float(self.ts[0])

    @property
    def t_end(self) -> float:
        return float(self.ts[-1])

    def __call__(self, t):
        """Dense-output state at time(s) ``t``."""
        scalar = np.ndim(t) == 0
        t = np.atleast_1d(np.asarray(t, dtype=float))
        forward = self.ts[-1] >= self.ts[0]
        key = self.ts if forward else -self.ts[::-1]
        tt = t if forward else -t
        idx = np.clip(np.searchsorted(key, tt, side="right") - 1, 0, len(self.interpolants) - 1)
        if not forward:
            idx = len(self.interpolants) - 1 - idx
        out = np.empty((len(t), self.states.shape[1]))
        for k in np.unique(idx):
            sel = idx == k
            out[sel] = self.interpolants[k](t[sel]).T
        return out[0] if scalar else out

    def arc_length(self) -> float:
        return float(np.sum(np.linalg.norm(np.diff(self.states[:, :2], axis=0), axis=1)))


def _rhs(V: PolyVectorField, with_divergence: bool):
    p, q = V.P.float_function(), V.Q.float_function()
    if not with_divergence:
        def f(t, z):
            return np.array([p(z[0], z[1]), q(z[0], z[1])])
        return f
    dv = divergence(V).float_function()

    def g(t, z):
        x, y = z[0], z[1]
        return np.array([p(x, y), q(x, y), dv(x, y)])
    return g


def _check_tol(tol: float) -> None:
    if not (1e-14 <= tol <= 1e-3):
        raise ValueError(f"tol must lie in [1e-14, 1e-3], got {tol}")


def _start_state(z0, with_divergence: bool) -> np.ndarray:
    z = np.array([float(z0[0]), float(z0[1])] + ([0.0] if with_divergence else []))
    if not np.all(np.isfinite(z)):
        raise FlowError("nonfinite initial state")
    return z


def _solver(V, z0, t_bound, tol, with_divergence):
    # rtol below ~100 machine epsilons is clipped by scipy; keep it quiet
    rtol = max(tol, 2.3e-14)
    return DOP853(_rhs(V, with_divergence), 0.0, z0, t_bound, rtol=rtol, atol=tol)


def _step(solver) -> None:
    msg = solver.step()
    if solver.status == "failed":
        raise FlowError(f"integration failed: {msg or 'step size underflow'}")
    if not np.all(np.isfinite(solver.y)):
        raise FlowError("nonfinite state encountered")


def integrate(V: PolyVectorField, z0, t_end: float, tol: float = 1e-12,
              with_divergence: bool = False) -> Trajectory:
    """Integrate from ``z0`` over ``[0, t_end]`` (``t_end`` may be negative).

    Uses the explicit Dormand-Prince 8(5,3) pair with its 7th-order dense
    output.  ``with_divergence`` appends ``int_0^t div X`` as a third
    component.
    """
    _check_tol(tol)
    if t_end == 0:
        raise ValueError("t_end must be nonzero")
    z = _start_state(z0, with_divergence)
    solver = _solver(V, z, t_end, tol, with_divergence)
    ts, states, dense = [0.0], [z.copy()], []
    while solver.status == "running":
        _step(solver)
        ts.append(solver.t)
        states.append(solver.y.copy())
        dense.append(solver.dense_output())
    return Trajectory(np.array(ts), np.array(states), tuple(dense), max(tol, 2.3e-14), tol)


@dataclass(frozen=True)
class SectionReturn:
    T: float
    r1: float
    trajectory: Trajectory


def section_return(V: PolyVectorField, section: Section, r0: float, tol: float = 1e-12,
                   max_time: float | None = None, period_hint: float | None = None,
                   with_divergence: bool = False, tangency_floor: float = 1e-10) -> SectionReturn:
    """First return to ``section`` with the required crossing orientation.

    The crossing time is located by Brent's method on the dense output of
    the step in which the section functional changes sign.
    """
    _check_tol(tol)
    if not section.contains(r0):
        raise FlowError(f"start parameter {r0} outside the section range")
    if max_time is None:
        max_time = 100.0 * period_hint if period_hint else 1000.0
    start = section.point(r0)
    vx, vy = V.float_rhs()(float(start[0]), float(start[1]))
    n = section.normal
    flux = vx * n[0] + vy * n[1]
    scale = math.hypot(vx, vy) * float(np.linalg.norm(n))
    if abs(flux) <= tangency_floor * max(scale, 1.0):
        raise FlowError(f"flow is tangent to the section at r = {r0}")
    orient = section.orientation
    if orient is None:
        orient = 1 if flux > 0 else -1
    elif orient * flux < 0:
        raise FlowError("flow crosses the section against the required orientation at the start")

    z = _start_state(start, with_divergence)
    solver = _solver(V, z, max_time, tol, with_divergence)
    ts, states, dense = [0.0], [z.copy()], []
    g_prev = 0.0
    while solver.status == "running":
        _step(solver)
        ts.append(solver.t)
        states.append(solver.y.copy())
        interp = solver.dense_output()
        dense.append(interp)
        g = section.functional(solver.y)
        if g_prev * orient < 0 and g * orient >= 0:
            t0, t1 = solver.t_old, solver.t

            def h(t):
                return section.functional(interp(t))

            tc = t1 if g == 0 else brentq(h, t0, t1, xtol=1e-12 * max(abs(t1), 1.0), rtol=1e-15,
                                          maxiter=200)
            zc = interp(tc)
            r1 = section.parameter(zc)
            if section.contains(r1):
                # trim the last step to the crossing
                ts[-1] = tc
                states[-1] = zc
                traj = Trajectory(np.array(ts), np.array(states), tuple(dense), max(tol, 2.3e-14), tol)
                return SectionReturn(float(tc), float(r1), traj)
        g_prev = g
    raise FlowError(f"no return to the section within horizon {max_time}")
