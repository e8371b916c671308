"""Plain-text file formats: system specs, curves, certificates, CSV plot data.

Rationals are written as ``"num/den"`` strings (or plain integers) so that
every certificate can be re-checked from the file alone.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from .certify import AnnulusCertificate, SimplicityEvidence, Status, TransversalityCertificate
from .exactalg import RatPoly1, RatPoly2, as_fraction
from .flow import Section
from .nonexist import LienardSystem, NonexistenceCertificate
from .sysmodel import PolyVectorField
from .trigcurve import TrigCurve, TrigPoly

__all__ = [
    "FORMAT_VERSION",
    "FormatError",
    "SystemSpec",
    "annulus_to_dict",
    "curve_from_dict",
    "curve_to_dict",
    "dump_json",
    "field_from_dict",
    "field_to_dict",
    "load_json",
    "load_system",
    "nonexistence_to_dict",
    "packaged_curve",
    "packaged_system",
    "poly_from_records",
    "poly_to_records",
    "q",
    "transversality_from_dict",
    "transversality_to_dict",
    "write_csv",
]

FORMAT_VERSION = "1"


class FormatError(ValueError):
    pass


def q(x) -> str:
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _frac(s) -> Fraction:
    try:
        if isinstance(s, float):
            raise FormatError(f"float {s!r} where an exact rational is required")
        return Fraction(s)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise FormatError(f"bad rational {s!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# polynomials


def poly_to_records(p: RatPoly2) -> list:
    """``[[i, j, num, den], ...]`` sorted by exponent."""
    return [[i, j, str(c.numerator), str(c.denominator)] for (i, j), c in sorted(p.terms.items())]


def _int(v) -> int:
    """Integer from an int or a decimal string; floats and bools are rejected."""
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise FormatError(f"expected an integer or integer string, got {v!r}")
    try:
        return int(v)
    except ValueError as exc:
        raise FormatError(f"bad integer {v!r}") from exc


def poly_from_records(records, vars=("x", "y")) -> RatPoly2:
    terms = {}
    for rec in records:
        if len(rec) != 4:
            raise FormatError(f"monomial record needs (i, j, num, den), got {rec!r}")
        i, j, num, den = map(_int, rec)
        if den == 0:
            raise FormatError("zero denominator in monomial record")
        if i < 0 or j < 0:
            raise FormatError("negative exponent in monomial record")
        terms[(i, j)] = terms.get((i, j), Fraction(0)) + Fraction(num, den)
    return RatPoly2(terms, tuple(vars))


def _univariate(p: RatPoly1) -> list:
    return [q(c) for c in p.coeffs]


def _univariate_from(lst, var="u") -> RatPoly1:
    return RatPoly1([_frac(c) for c in lst], var)


# ---------------------------------------------------------------------------
# systems


class SystemSpec:
    """Parsed system file.

    Either ``P``/``Q`` records or a Lienard ``F`` (records in ``x`` and the
    parameter ``d``) with a value ``delta``.  Optional keys: ``section``,
    ``scan`` (``[lo, hi, count]``), ``cycles`` (named brackets), ``curves``
    (per-curve ``eps``/``m``/``cycle``) and ``equilibria`` hints.
    """

    def __init__(self, data: dict):
        if not isinstance(data, dict):
            raise FormatError("system file must hold a JSON object")
        self.data = data
        self.name = str(data.get("name", "system"))
        self.lienard = None
        if "F" in data:
            self.lienard = LienardSystem(poly_from_records(data["F"], ("x", "d")), self.name)
            self.delta = _frac(data.get("delta", 0))
            self.field = self.lienard.vector_field(self.delta)
            self.field = PolyVectorField(self.field.P, self.field.Q, self.name, self.field.params)
        elif "P" in data and "Q" in data:
            self.delta = None
            self.field = PolyVectorField(
                poly_from_records(data["P"]), poly_from_records(data["Q"]), self.name,
                {k: _frac(v) for k, v in data.get("params", {}).items()},
            )
        else:
            raise FormatError("system file needs P and Q, or a Lienard F")
        self.section = _section_from(data.get("section"))
        self.scan = data.get("scan")
        self.cycles = {str(k): tuple(map(float, v)) for k, v in data.get("cycles", {}).items()}
        self.curves = list(data.get("curves", []))
        self.equilibria = [tuple(_frac(c) for c in e) for e in data.get("equilibria", [])]

    def to_dict(self) -> dict:
        return dict(self.data)


def _section_from(d) -> Section:
    if d is None:
        return Section()
    try:
        return Section(
            tuple(_frac(c) for c in d.get("anchor", ["0", "0"])),
            tuple(_frac(c) for c in d.get("direction", ["1", "0"])),
            _frac(d["r_min"]) if d.get("r_min") is not None else 0.0,
            _frac(d["r_max"]) if d.get("r_max") is not None else float("inf"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad section spec: {exc}") from exc


def field_to_dict(V: PolyVectorField) -> dict:
    return {
        "name": V.name,
        "P": poly_to_records(V.P),
        "Q": poly_to_records(V.Q),
        "params": {k: q(v) for k, v in V.params.items()},
    }


def field_from_dict(d: dict) -> PolyVectorField:
    return SystemSpec(d).field


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def dump_json(obj, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")
    return path


def load_system(path) -> SystemSpec:
    return SystemSpec(load_json(path))


# ---------------------------------------------------------------------------
# curves


def _trig_to_dict(p: TrigPoly) -> dict:
    return {"const": q(p.const), "cos": [q(c) for c in p.cos], "sin": [q(c) for c in p.sin]}


def _trig_from_dict(d: dict) -> TrigPoly:
    return TrigPoly(_frac(d["const"]), tuple(map(_frac, d["cos"])), tuple(map(_frac, d["sin"])))


def curve_to_dict(c: TrigCurve, name: str = "") -> dict:
    if c.mode != "rational":
        raise FormatError("only rational curves are serialized")
    out = {"kind": "curve", "degree": c.degree, "x": _trig_to_dict(c.x), "y": _trig_to_dict(c.y)}
    if name:
        out["name"] = name
    return out


def curve_from_dict(d: dict) -> TrigCurve:
    try:
        c = TrigCurve(_trig_from_dict(d["x"]), _trig_from_dict(d["y"]))
    except KeyError as exc:
        raise FormatError(f"curve is missing {exc}") from exc
    if "degree" in d and int(d["degree"]) != c.degree:
        raise FormatError("declared degree does not match the coefficient lists")
    return c


def packaged_system(name: str) -> SystemSpec:
    """A system file shipped in ``pbcert/data/systems`` (e.g. ``"vdp"``)."""
    res = resources.files("pbcert").joinpath("data", "systems", f"{name}.json")
    if not res.is_file():
        raise FormatError(f"no packaged system {name!r}")
    return SystemSpec(json.loads(res.read_text()))


def packaged_curve(name: str) -> TrigCurve:
    """A curve shipped in ``pbcert/data`` (e.g. ``"vdp_inner_printed"``)."""
    text = resources.files("pbcert").joinpath("data", f"{name}.json").read_text()
    return curve_from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# certificates


def transversality_to_dict(cert: TransversalityCertificate, extra: dict | None = None) -> dict:
    out = {
        "kind": "transversality",
        "version": FORMAT_VERSION,
        "system": field_to_dict(cert.system),
        "curve": curve_to_dict(cert.curve),
        "status": cert.status.value,
        "contact": {"A": _univariate(cert.contact_A), "B": _univariate(cert.contact_B)},
        "resultant": {
            "coeffs": _univariate(cert.resultant_R),
            "degree": cert.resultant_R.degree,
            "degree_bound": cert.degree_bound,
        },
        "sturm": {"interval": ["-1", "1"], "root_count": cert.root_count, "table": cert.sturm_table},
        "f_sign": cert.f_sign,
        "orientation": cert.orientation,
        "area_over_pi": q(cert.area_over_pi),
        "flux_sign": cert.flux_sign if cert.f_sign else 0,
        "simplicity": cert.simplicity.as_dict() if cert.simplicity is not None else None,
        "refutation": None if not cert.refutation else [
            {"u": q(u), "v": q(v), "f": q(val)} for (u, v), val in cert.refutation
        ],
    }
    if extra:
        out["run"] = extra
    return out


def transversality_from_dict(d: dict) -> TransversalityCertificate:
    """Rebuild a certificate object from its file (no recomputation)."""
    V = SystemSpec(d["system"]).field
    s = d.get("simplicity")
    simple = None if not s else SimplicityEvidence(
        int(s["grid_N"]), _frac(s["max_gap"]), _frac(s["speed_bound"]), _frac(s["accel_bound"]),
        _frac(s["min_cell_speed"]), int(s["far_pairs"]), int(s["exact_checks"]),
    )
    ref = d.get("refutation")
    if ref:
        ref = [((_frac(w["u"]), _frac(w["v"])), _frac(w["f"])) for w in ref]
    return TransversalityCertificate(
        curve_from_dict(d["curve"]), V, Status(d["status"]),
        _univariate_from(d["contact"]["A"]), _univariate_from(d["contact"]["B"]),
        _univariate_from(d["resultant"]["coeffs"]), int(d["sturm"]["root_count"]),
        int(d["f_sign"]), d["orientation"], _frac(d["area_over_pi"]), simple,
        d["sturm"]["table"], ref or None,
    )


def annulus_to_dict(ann: AnnulusCertificate, extra: dict | None = None) -> dict:
    out = {
        "kind": "annulus",
        "version": FORMAT_VERSION,
        "inner": transversality_to_dict(ann.inner),
        "outer": transversality_to_dict(ann.outer),
        "containment": ann.containment,
        "equilibrium_exclusions": ann.equilibrium_exclusions,
        "crossing_direction": ann.crossing_direction,
        "conclusion": ann.conclusion,
    }
    if extra:
        out["run"] = extra
    return out


def nonexistence_to_dict(cert: NonexistenceCertificate, extra: dict | None = None) -> dict:
    neg = cert.negativity
    out = {
        "kind": "nonexistence",
        "version": FORMAT_VERSION,
        "system": {"name": cert.system.name, "F": poly_to_records(cert.system.F)},
        "n": cert.n,
        "delta": q(cert.delta),
        "B_hashes": cert.cherkas.B_hashes(),
        "R": _univariate(cert.R_at_delta),
        "negativity": {
            "even": neg.even,
            "degree": neg.degree,
            "root_count": neg.root_count,
            "value_at_zero": q(neg.value_at_zero),
            "interval": ["0", "+inf"] if neg.even else ["-inf", "+inf"],
            "variable": "s = x^2" if neg.even else "x",
            "table": neg.sturm_table,
        },
        "F_at_zero": q(cert.F0),
        "statement": cert.statement,
    }
    if extra:
        out["run"] = extra
    return out


# ---------------------------------------------------------------------------
# CSV


def write_csv(path, header: list, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in np.asarray(rows):
            w.writerow([repr(float(v)) for v in r])
    return path
