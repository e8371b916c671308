"""From a numerical cycle to certified transversal curves and annuli.

One curve goes through: band around the cycle, ``2m+1`` samples, trig
interpolation, rationalization, exact certification.  Failed proofs climb
a retry ladder (denominator bound x100 first, then ``m + 1``).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .band import BandCurve, search_epsilon, sample_points
from .certify import (
    AnnulusCertificate,
    CertificationFailed,
    Status,
    TransversalityCertificate,
    build_annulus,
    certify_curve,
)
from .cycles import CycleEstimate
from .sysmodel import PolyVectorField, equilibria
from .trigcurve import TrigCurve, interpolate, rationalize

__all__ = [
    "Attempt",
    "CurveResult",
    "DEFAULT_DENOMINATOR",
    "annuli_from_curves",
    "certify_band",
    "fit_curve",
    "two_cycle_lower_bound",
]

DEFAULT_DENOMINATOR = 10**6


@dataclass(frozen=True)
class Attempt:
    m: int
    denominator_bound: int
    status: str
    root_count: int
    seconds: float


@dataclass(frozen=True)
class CurveResult:
    certificate: TransversalityCertificate = field(repr=False)
    band: BandCurve = field(repr=False)
    fitted: TrigCurve = field(repr=False)
    m: int
    denominator_bound: int
    epsilon: float
    side: str
    crossings: list
    attempts: list = field(repr=False)

    @property
    def curve(self) -> TrigCurve:
        return self.certificate.curve

    @property
    def proved(self) -> bool:
        return self.certificate.proved

    @property
    def refuted(self) -> bool:
        return not self.proved and bool(self.certificate.refutation)


def fit_curve(band: BandCurve, m: int, denominator_bound: int = DEFAULT_DENOMINATOR,
              method: str = "common") -> tuple:
    """``(float interpolant, rational curve)`` through ``2m+1`` band samples."""
    if m < 1:
        raise ValueError("m must be >= 1")
    fitted = interpolate(sample_points(band, 2 * m + 1))
    fitted = TrigCurve(fitted.x, fitted.y, band.T)
    return fitted, rationalize(fitted, denominator_bound, method)


def _section_crossings(curve: TrigCurve, ce: CycleEstimate) -> list:
    sec = ce.section
    return [r for r in curve.section_crossings(sec.anchor, sec.direction) if sec.contains(r)]


def certify_band(ce: CycleEstimate, epsilon: float, m: int,
                 denominator_bound: int = DEFAULT_DENOMINATOR, method: str = "common",
                 extra_m: int = 2, escalate: bool = True,
                 V: PolyVectorField | None = None) -> CurveResult:
    """Certify a transversal curve on one side of ``ce``.

    ``epsilon`` is halved while the band fails the numeric transversality
    pre-check.  The ladder tries ``D`` then ``100 D`` for each of
    ``m, ..., m + extra_m`` and stops at the first proof.
    """
    V = V or ce.system
    band = search_epsilon(ce, epsilon)
    dens = (denominator_bound, 100 * denominator_bound) if escalate else (denominator_bound,)
    attempts = []
    cert = fitted = None
    used_m, used_d = m, denominator_bound
    for mm in range(m, m + extra_m + 1 if escalate else m + 1):
        for D in dens:
            t0 = time.perf_counter()
            fitted, rc = fit_curve(band, mm, D, method)
            cert = certify_curve(V, rc)
            attempts.append(Attempt(mm, D, cert.status.value, cert.root_count,
                                    time.perf_counter() - t0))
            used_m, used_d = mm, D
            if cert.proved:
                break
        if cert.proved:
            break
    return CurveResult(cert, band, fitted, used_m, used_d, band.epsilon, band.side,
                       _section_crossings(cert.curve, ce), attempts)


def _key(res) -> float:
    cert = res.certificate if isinstance(res, CurveResult) else res
    return abs(float(cert.area_over_pi))


def annuli_from_curves(V: PolyVectorField, curves: list, boxes: list | None = None,
                       N: int = 64, max_N: int = 2048) -> list:
    """Annuli between consecutive nested curves, ordered by enclosed area.

    ``curves`` holds :class:`CurveResult` or certificates; every curve must be
    proved.  Equilibrium boxes default to the exact isolation of ``V``.
    """
    certs = [c.certificate if isinstance(c, CurveResult) else c for c in curves]
    if len(certs) < 2:
        raise ValueError("need at least two curves")
    for c in certs:
        if c.status is not Status.PROVED_NONVANISHING:
            raise CertificationFailed("every curve must be proved transversal")
    if boxes is None:
        boxes = equilibria(V)
    certs = sorted(certs, key=_key)
    out: list[AnnulusCertificate] = []
    for a, b in zip(certs, certs[1:]):
        out.append(build_annulus(a, b, boxes, N, max_N))
    return out


def two_cycle_lower_bound(V: PolyVectorField, annuli: list) -> dict | None:
    """Parameter lower bound implied by a repelling and a trapping annulus.

    Two nested annuli of opposite type hold at least two cycles.  For a
    family of rotated vector fields whose cycles disappear in a saddle-node
    as the parameter grows, this gives ``parameter < critical value``; the
    rotation property is an assumption recorded with the claim.
    """
    kinds = {a.crossing_direction for a in annuli}
    if kinds != {"inward-trapping", "outward-repelling"} or "delta" not in V.params:
        return None
    d = V.params["delta"]
    return {
        "delta": f"{d.numerator}/{d.denominator}",
        "claim": f"delta* > {float(d):g}",
        "cycles_at_least": 2,
        "assumption": "rotated vector field in delta: two cycles at delta imply delta < delta*",
    }
