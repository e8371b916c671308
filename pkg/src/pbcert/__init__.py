"""Certified trapping annuli and non-existence proofs for planar polynomial flows."""

from .certify import Status, build_annulus, certify_curve
from .cycles import find_cycle, fourier_spectrum
from .flow import Section
from .nonexist import bound_bisection, nonexistence_certificate
from .pipeline import annuli_from_curves, certify_band
from .sysmodel import PolyVectorField, brusselator, rychkov, van_der_pol
from .trigcurve import TrigCurve, interpolate, rationalize

__version__ = "0.1.0"

__all__ = [
    "PolyVectorField",
    "Section",
    "Status",
    "TrigCurve",
    "annuli_from_curves",
    "bound_bisection",
    "brusselator",
    "build_annulus",
    "certify_band",
    "certify_curve",
    "find_cycle",
    "fourier_spectrum",
    "interpolate",
    "nonexistence_certificate",
    "rationalize",
    "rychkov",
    "van_der_pol",
]
