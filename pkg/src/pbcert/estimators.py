"""Estimator-style wrappers around cycle detection and curve certification."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .cycles import CycleEstimate, find_cycle, fourier_spectrum, scan_displacement
from .flow import Section
from .pipeline import DEFAULT_DENOMINATOR, certify_band
from .sysmodel import PolyVectorField

__all__ = ["LimitCycleDetector", "TransversalCurveFitter"]


def _check_field(X) -> PolyVectorField:
    if not isinstance(X, PolyVectorField):
        raise TypeError(f"expected a PolyVectorField, got {type(X).__name__}")
    return X


class LimitCycleDetector(BaseEstimator):
    """Find hyperbolic cycles crossing a section.

    ``bracket`` pins one cycle; otherwise ``scan = (lo, hi, count)`` is
    searched for sign changes of the displacement map.
    """

    def __init__(self, section=None, bracket=None, scan=(0.1, 3.0, 30), tol=1e-10,
                 samples=4096, max_harmonic=20):
        self.section = section
        self.bracket = bracket
        self.scan = scan
        self.tol = tol
        self.samples = samples
        self.max_harmonic = max_harmonic

    def fit(self, X, y=None):
        V = _check_field(X)
        sec = self.section if self.section is not None else Section()
        if self.bracket is not None:
            brackets = [tuple(self.bracket)]
        else:
            lo, hi, count = self.scan
            brackets = [b[:2] for b in scan_displacement(V, sec, np.linspace(lo, hi, int(count)))]
        if not brackets:
            raise ValueError("no sign change of the displacement map found")
        self.cycles_ = [find_cycle(V, sec, b, tol=self.tol, samples=self.samples) for b in brackets]
        self.spectra_ = [fourier_spectrum(c, self.max_harmonic) for c in self.cycles_]
        return self

    def predict(self, X=None) -> np.ndarray:
        """Section parameters ``x0*`` of the detected cycles."""
        check_is_fitted(self, "cycles_")
        return np.array([c.x0_star for c in self.cycles_])

    def report(self) -> list:
        check_is_fitted(self, "cycles_")
        return [
            {"x0_star": c.x0_star, "T": c.T, "kappa": c.kappa, "stability": c.stability}
            for c in self.cycles_
        ]


class TransversalCurveFitter(BaseEstimator, TransformerMixin):
    """Fit and certify one rational transversal curve beside a cycle.

    ``fit`` takes a :class:`CycleEstimate`; ``transform`` maps angles to
    points of the certified curve.
    """

    def __init__(self, epsilon=0.05, m=12, denominator_bound=DEFAULT_DENOMINATOR,
                 method="common", escalate=True):
        self.epsilon = epsilon
        self.m = m
        self.denominator_bound = denominator_bound
        self.method = method
        self.escalate = escalate

    def fit(self, X, y=None):
        if not isinstance(X, CycleEstimate):
            raise TypeError(f"expected a CycleEstimate, got {type(X).__name__}")
        if self.epsilon == 0:
            raise ValueError("epsilon must be nonzero")
        self.result_ = certify_band(X, self.epsilon, int(self.m), int(self.denominator_bound),
                                    self.method, escalate=self.escalate)
        self.curve_ = self.result_.curve
        self.certificate_ = self.result_.certificate
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "curve_")
        return self.curve_(np.asarray(X, dtype=float).ravel())

    def score(self, X=None, y=None) -> float:
        """1.0 when the curve is proved transversal and simple, else 0.0."""
        check_is_fitted(self, "certificate_")
        return float(self.certificate_.proved)
