"""Re-check certificate files using only their contents.

Every exact quantity is recomputed from the stored field, curve or
Lienard data and compared with the stored value; grid proofs are rerun
at the stored grid size.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .certify import (
    CertificationFailed,
    circle_resultant,
    contact_function,
    curve_distance_certificate,
    prove_simple,
    winding_number,
)
from .exactalg import SturmSequence
from .formats import FormatError, SystemSpec, _frac, _univariate_from, curve_from_dict, poly_from_records
from .nonexist import LienardSystem, cherkas_build, negativity_test, y_independence_residuals
from .trigcurve import CircleGrid

__all__ = ["VerificationReport", "verify_certificate"]


@dataclass
class VerificationReport:
    kind: str
    checks: list = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> bool:
        self.checks.append((name, bool(ok), detail))
        return bool(ok)

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(c[1] for c in self.checks)

    def lines(self) -> list:
        return [f"{'ok  ' if ok else 'FAIL'} {name}{': ' + d if d else ''}" for name, ok, d in self.checks]


def _transversality(d: dict, rep: VerificationReport, prefix: str = "") -> dict:
    V = SystemSpec(d["system"]).field
    curve = curve_from_dict(d["curve"])
    A, B = contact_function(V, curve)
    rep.add(prefix + "contact A matches", A == _univariate_from(d["contact"]["A"]))
    rep.add(prefix + "contact B matches", B == _univariate_from(d["contact"]["B"]))
    R_file = _univariate_from(d["resultant"]["coeffs"])
    R = circle_resultant(A, B)
    rep.add(prefix + "resultant matches A^2 + (u^2 - 1) B^2", R == R_file)
    bound = 2 * (V.degree + 1) * curve.degree
    rep.add(prefix + "resultant degree within bound", R.degree <= bound, f"{R.degree} <= {bound}")
    status = d["status"]
    proved = status == "PROVED_NONVANISHING"
    if R.degree >= 1:
        seq = SturmSequence(R)
        count = seq.count(Fraction(-1), Fraction(1)) + (1 if R.sign_at(Fraction(-1)) == 0 else 0)
        rep.add(prefix + "Sturm table reproduced",
                seq.table([Fraction(-1), Fraction(1)]) == d["sturm"]["table"])
    else:
        count = 0 if not R.is_zero() else -1
    rep.add(prefix + "root count on [-1, 1]", count == d["sturm"]["root_count"], str(count))
    if proved:
        rep.add(prefix + "no root of R on [-1, 1]", count == 0)
        s = A.sign_at(Fraction(1))
        rep.add(prefix + "global sign is sign A(1)", s == d["f_sign"] and s != 0, str(s))
    area = curve.signed_area_over_pi()
    rep.add(prefix + "signed area", area == _frac(d["area_over_pi"]) and area != 0)
    rep.add(prefix + "orientation label", d["orientation"] == ("ccw" if area > 0 else "cw"))
    if proved:
        rep.add(prefix + "flux sign", d["flux_sign"] == d["f_sign"] * (1 if area > 0 else -1))
    if d.get("simplicity"):
        N = int(d["simplicity"]["grid_N"])
        try:
            ev = prove_simple(curve, N=N, max_N=N)
            rep.add(prefix + "simplicity grid proof", True, f"N = {ev.N}")
        except CertificationFailed as exc:
            rep.add(prefix + "simplicity grid proof", False, str(exc))
    if d.get("refutation"):
        vals = []
        for w in d["refutation"]:
            u, v = _frac(w["u"]), _frac(w["v"])
            on = u * u + v * v == 1
            val = A(u) + v * B(u)
            vals.append(val)
            rep.add(prefix + "refutation point on circle", on)
            rep.add(prefix + "refutation value", val == _frac(w["f"]))
        rep.add(prefix + "refutation signs differ", min(vals) < 0 < max(vals))
    return {"V": V, "curve": curve, "flux": d["flux_sign"], "proved": proved}


def _annulus(d: dict, rep: VerificationReport) -> None:
    inner = _transversality(d["inner"], rep, "inner: ")
    outer = _transversality(d["outer"], rep, "outer: ")
    rep.add("both curves proved", inner["proved"] and outer["proved"])
    if inner["flux"] > 0 > outer["flux"]:
        direction = "inward-trapping"
    elif inner["flux"] < 0 < outer["flux"]:
        direction = "outward-repelling"
    else:
        direction = "mismatch"
    rep.add("crossing direction", direction == d["crossing_direction"], direction)
    c = d["containment"]
    N = int(c["disjoint_grid_N"])
    try:
        curve_distance_certificate(inner["curve"], outer["curve"], N, N)
        rep.add("curves disjoint", True, f"N = {N}")
    except CertificationFailed as exc:
        rep.add("curves disjoint", False, str(exc))
    p0 = tuple(_frac(x) for x in c["inner_point"])
    rep.add("inner point on inner curve", p0 == inner["curve"].exact_points(CircleGrid(1))[0])
    N = int(c["winding_grid_N"])
    try:
        w, _ = winding_number(outer["curve"], p0, 0, N, N)
    except CertificationFailed:
        w = 0
    rep.add("outer curve winds once around the inner curve", abs(w) == 1, str(w))
    for e in d["equilibrium_exclusions"]:
        center = tuple(_frac(x) for x in e["center"])
        r = _frac(e["radius"])
        N = int(e["grid_N"])
        try:
            wi, _ = winding_number(inner["curve"], center, r, N, N)
            wo, _ = winding_number(outer["curve"], center, r, N, N)
        except CertificationFailed as exc:
            rep.add(f"equilibrium {e['center']} excluded", False, str(exc))
            continue
        rep.add(f"equilibrium {e['center']} excluded", abs(wi) == 1 or wo == 0,
                f"winding inner {wi}, outer {wo}")


def _nonexistence(d: dict, rep: VerificationReport) -> None:
    L = LienardSystem(poly_from_records(d["system"]["F"], ("x", "d")), d["system"].get("name", ""))
    n = int(d["n"])
    delta = _frac(d["delta"])
    rep.add("n even", n % 2 == 0, str(n))
    res = cherkas_build(L, n)
    rep.add("B hashes", res.B_hashes() == d["B_hashes"])
    rep.add("derivative along the flow is free of y",
            all(r.is_zero() for r in y_independence_residuals(L, res)))
    R = res.R_at(delta)
    rep.add("R at delta matches", R == _univariate_from(d["R"], R.var))
    neg = negativity_test(R)
    rep.add("R(0) < 0", neg.value_at_zero < 0 and neg.value_at_zero == _frac(d["negativity"]["value_at_zero"]))
    rep.add("no sign change of R", neg.root_count == 0 == d["negativity"]["root_count"])
    rep.add("Sturm table reproduced", neg.sturm_table == d["negativity"]["table"])
    F0 = L.F_at(delta)(Fraction(0))
    rep.add("x = 0 is not invariant", F0 == _frac(d["F_at_zero"]))


def verify_certificate(d: dict) -> VerificationReport:
    kind = d.get("kind") if isinstance(d, dict) else None
    rep = VerificationReport(str(kind))
    try:
        if kind == "transversality":
            _transversality(d, rep)
            rep.add("status claims a proof", d["status"] == "PROVED_NONVANISHING")
        elif kind == "annulus":
            _annulus(d, rep)
        elif kind == "nonexistence":
            _nonexistence(d, rep)
        else:
            raise FormatError(f"unknown certificate kind {kind!r}")
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed certificate: missing or bad field {exc}") from exc
    return rep
