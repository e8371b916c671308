"""``pbcert`` command line: detect, certify, annulus, nonexist, bound, plotdata, verify.

Exit codes: 0 proved, 2 inconclusive, 3 input error, 4 refuted (an exact
sign change of the contact function was found).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .certify import CertificationFailed, certify_curve
from .cycles import CycleError, find_cycle, fourier_spectrum, scan_displacement
from .flow import FlowError
from .formats import (
    FormatError,
    SystemSpec,
    annulus_to_dict,
    curve_from_dict,
    dump_json,
    load_json,
    load_system,
    nonexistence_to_dict,
    packaged_system,
    q,
    transversality_from_dict,
    transversality_to_dict,
    write_csv,
)
from .nonexist import Refusal, bound_bisection, nonexistence_certificate
from .pipeline import DEFAULT_DENOMINATOR, annuli_from_curves, certify_band, two_cycle_lower_bound
from .sysmodel import equilibria
from .trigcurve import TrigCurve
from .verify import verify_certificate

__all__ = ["main", "EXIT_PROVED", "EXIT_INCONCLUSIVE", "EXIT_INPUT", "EXIT_REFUTED"]

EXIT_PROVED = 0
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3
EXIT_REFUTED = 4

DESK_MAX_M = 60
DESK_MAX_N = 100
PLOT_SAMPLES = 1000


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


class InputError(Exception):
    pass


def _out(args) -> Path | None:
    return Path(args.out) if args.out else None


def _system(args) -> SystemSpec:
    if not args.system:
        raise InputError("--system is required")
    p = Path(args.system)
    if p.exists():
        return load_system(p)
    try:
        return packaged_system(args.system)
    except FormatError:
        raise InputError(f"no system file {args.system!r}") from None


def _cycles(spec: SystemSpec, args, names=None) -> dict:
    V, sec = spec.field, spec.section
    tol = float(args.tol) if args.tol else 1e-10
    if getattr(args, "bracket", None):
        brackets = {"cycle": tuple(map(float, args.bracket))}
    elif spec.cycles:
        brackets = {k: v for k, v in spec.cycles.items() if names is None or k in names}
    elif spec.scan:
        lo, hi, count = spec.scan
        found = scan_displacement(V, sec, np.linspace(float(lo), float(hi), int(count)))
        brackets = {f"{kind}{i}": (a, b) for i, (a, b, kind) in enumerate(found, start=1)}
    else:
        raise InputError("no bracket: pass --bracket or list cycles in the system file")
    if not brackets:
        raise InputError("no displacement sign change found")
    return {k: find_cycle(V, sec, b, tol=tol) for k, b in brackets.items()}


def _sample_curve(c: TrigCurve, n: int = PLOT_SAMPLES) -> np.ndarray:
    th = np.linspace(0.0, 2 * np.pi, n + 1)
    return np.column_stack([th, c(th)])


# ---------------------------------------------------------------------------
# verbs


def cmd_detect(args) -> int:
    spec = _system(args)
    ces = _cycles(spec, args)
    rows = []
    out = _out(args)
    for name, ce in ces.items():
        mags = fourier_spectrum(ce, 20).magnitudes
        rows.append({
            "name": name, "x0_star": ce.x0_star, "T": ce.T, "kappa": ce.kappa,
            "multiplier": float(np.exp(ce.kappa * ce.T)), "stability": ce.stability,
            "closure_error": ce.closure_error(),
            "spectrum": {"x": mags[0].tolist(), "y": mags[1].tolist()},
            "samples": ce.states[:: max(1, ce.samples // 512)].tolist(),
        })
        print(f"{name}: x0* = {ce.x0_star:.10f}  T = {ce.T:.10f}  kappa = {ce.kappa:.6f}  {ce.stability}")
        print("  harmonic  |x_k|        |y_k|")
        for k in range(20):
            print(f"  {k + 1:8d}  {mags[0, k]:.3e}    {mags[1, k]:.3e}")
        if out:
            write_csv(out / f"cycle_{name}.csv", ["t", "x", "y"],
                      np.column_stack([ce.ts, ce.states]))
    if out:
        dump_json({"kind": "cycles", "system": spec.name, "cycles": rows}, out / "detect.json")
    return EXIT_PROVED


def _code(cert) -> int:
    if cert.proved:
        return EXIT_PROVED
    return EXIT_REFUTED if cert.refutation else EXIT_INCONCLUSIVE


def _write_cert(out, label, cert, extra, band=None) -> None:
    if not out:
        return
    dump_json(transversality_to_dict(cert, extra), out / f"cert_{label}.json")
    write_csv(out / f"curve_{label}.csv", ["theta", "x", "y"], _sample_curve(cert.curve))
    if band is not None:
        t = np.linspace(0.0, band.T, PLOT_SAMPLES + 1)
        write_csv(out / f"band_{label}.csv", ["t", "x", "y"], np.column_stack([t, band(t)]))


def cmd_certify(args) -> int:
    spec = _system(args)
    out = _out(args)
    V = spec.field
    if args.curve:
        cert = certify_curve(V, curve_from_dict(load_json(args.curve)))
        label = args.label or Path(args.curve).stem
        print(f"{label}: {cert.status.value}  deg R = {cert.resultant_R.degree}  "
              f"roots in [-1,1] = {cert.root_count}  f_sign = {cert.f_sign}  {cert.orientation}")
        _write_cert(out, label, cert, {"source": str(args.curve)})
        return _code(cert)
    if args.eps is not None:
        if args.m is None:
            raise InputError("--m is required with --eps")
        entries = [{"label": args.label or "curve", "cycle": args.cycle, "eps": args.eps, "m": args.m}]
    else:
        entries = [e for e in spec.curves if args.label is None or e.get("label") == args.label]
        if not entries:
            raise InputError("no curves: pass --eps and --m or list curves in the system file")
    for e in entries:
        if int(e["m"]) > DESK_MAX_M and args.tier != "long":
            raise InputError(f"m = {e['m']} belongs to the long tier (--tier long)")
    wanted = {e.get("cycle") for e in entries} - {None}
    ces = _cycles(spec, args, wanted or None)
    codes = []
    for e in entries:
        ce = ces[e["cycle"]] if e.get("cycle") in ces else next(iter(ces.values()))
        D = int(args.denbound) if args.denbound else DEFAULT_DENOMINATOR
        res = certify_band(ce, float(e["eps"]), int(e["m"]), D, args.method,
                           escalate=not args.no_escalate)
        cert = res.certificate
        extra = {
            "cycle": {"x0_star": ce.x0_star, "T": ce.T, "kappa": ce.kappa, "stability": ce.stability},
            "epsilon": res.epsilon, "side": res.side, "m": res.m,
            "denominator_bound": res.denominator_bound, "rationalization": args.method,
            "section_crossings": res.crossings,
            "attempts": [{"m": a.m, "denominator_bound": a.denominator_bound, "status": a.status,
                          "root_count": a.root_count} for a in res.attempts],
        }
        label = e.get("label", "curve")
        print(f"{label}: {cert.status.value}{' + simple' if cert.proved else ''}  side = {res.side}  "
              f"m = {res.m}  D = {res.denominator_bound}  deg R = {cert.resultant_R.degree}  "
              f"crossings = {[round(r, 6) for r in res.crossings]}")
        _write_cert(out, label, cert, extra, res.band)
        codes.append(_code(cert))
    return max(codes)


def cmd_annulus(args) -> int:
    if len(args.files) < 2:
        raise InputError("annulus needs at least two transversality certificates")
    certs = []
    for f in args.files:
        d = load_json(f)
        if d.get("kind") != "transversality":
            raise InputError(f"{f} is not a transversality certificate")
        rep = verify_certificate(d)
        if not rep.ok:
            print(f"{f}: certificate does not verify")
            print("\n".join("  " + s for s in rep.lines()))
            return EXIT_INCONCLUSIVE
        certs.append(transversality_from_dict(d))
    V = certs[0].system
    if any(c.system.P != V.P or c.system.Q != V.Q for c in certs):
        raise InputError("certificates refer to different vector fields")
    if args.system:
        spec = _system(args)
        if spec.field.P != V.P or spec.field.Q != V.Q:
            raise InputError("certificates do not match the system file")
    try:
        annuli = annuli_from_curves(V, certs, equilibria(V))
    except CertificationFailed as exc:
        print(f"annulus not certified: {exc}")
        return EXIT_INCONCLUSIVE
    out = _out(args)
    for k, ann in enumerate(annuli, start=1):
        print(f"annulus {k}: {ann.crossing_direction}; {ann.conclusion}")
        if out:
            dump_json(annulus_to_dict(ann), out / f"annulus_{k}.json")
    lb = two_cycle_lower_bound(V, annuli)
    if lb is not None:
        print(f"{lb['claim']} (assumption: {lb['assumption']})")
    if out:
        dump_json({"kind": "annulus_report", "system": V.name,
                   "annuli": [a.crossing_direction for a in annuli], "lower_bound": lb},
                  out / "annulus_report.json")
    return EXIT_PROVED


def _lienard(args):
    spec = _system(args)
    if spec.lienard is None:
        raise InputError("system file has no Lienard F")
    return spec


def cmd_nonexist(args) -> int:
    spec = _lienard(args)
    if args.n is None:
        raise InputError("--n is required")
    delta = Fraction(args.delta) if args.delta else spec.delta
    if args.n > DESK_MAX_N and args.tier != "long":
        raise InputError(f"n = {args.n} belongs to the long tier (--tier long)")
    try:
        cert = nonexistence_certificate(spec.lienard, args.n, delta)
    except Refusal as exc:
        print(f"refused: {exc}")
        return EXIT_INCONCLUSIVE
    print(cert.statement)
    out = _out(args)
    if out:
        dump_json(nonexistence_to_dict(cert), out / f"nonexist_n{args.n}.json")
    return EXIT_PROVED


def cmd_bound(args) -> int:
    spec = _lienard(args)
    if args.n is None or not args.bracket:
        raise InputError("--n and --bracket are required")
    if args.n > DESK_MAX_N and args.tier != "long":
        raise InputError(f"n = {args.n} belongs to the long tier (--tier long)")
    lo, hi = (Fraction(b) for b in args.bracket)
    tol = Fraction(args.tol) if args.tol else Fraction(1, 10**7)
    try:
        res = bound_bisection(spec.lienard, args.n, lo, hi, tol)
    except (ValueError, Refusal) as exc:
        raise InputError(str(exc)) from exc
    print(f"n = {res.n}: delta* < {res.bound} = {float(res.bound):.9f}  "
          f"(not certified at {float(res.lower):.9f}, {res.steps} steps)")
    out = _out(args)
    if out:
        dump_json({"kind": "bound", "n": res.n, "bound": q(res.bound), "lower": q(res.lower),
                   "tol": q(tol), "steps": res.steps}, out / f"bound_n{args.n}.json")
        dump_json(nonexistence_to_dict(res.certificate), out / f"nonexist_n{args.n}.json")
    return EXIT_PROVED


def cmd_plotdata(args) -> int:
    out = _out(args) or Path(".")
    for f in args.files:
        d = load_json(f)
        stem = Path(f).stem
        kind = d.get("kind")
        if kind == "cycles":
            for c in d["cycles"]:
                write_csv(out / f"{stem}_{c['name']}.csv", ["x", "y"], c["samples"])
        elif kind == "transversality":
            write_csv(out / f"{stem}.csv", ["theta", "x", "y"], _sample_curve(curve_from_dict(d["curve"])))
        elif kind == "annulus":
            for side in ("inner", "outer"):
                c = curve_from_dict(d[side]["curve"])
                write_csv(out / f"{stem}_{side}.csv", ["theta", "x", "y"], _sample_curve(c))
        elif kind == "curve":
            write_csv(out / f"{stem}.csv", ["theta", "x", "y"], _sample_curve(curve_from_dict(d)))
        else:
            raise InputError(f"{f}: nothing to plot for kind {kind!r}")
    return EXIT_PROVED


def cmd_verify(args) -> int:
    if not args.files:
        raise InputError("verify needs certificate files")
    code = EXIT_PROVED
    for f in args.files:
        rep = verify_certificate(load_json(f))
        print(f"{f} [{rep.kind}]: {'VERIFIED' if rep.ok else 'NOT VERIFIED'}")
        for line in rep.lines():
            print("  " + line)
        if not rep.ok:
            code = EXIT_INCONCLUSIVE
    return code


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pbcert", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--system", help="system JSON file or a packaged name (vdp, brusselator, ...)")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--tol", help="cycle tolerance (detect/certify) or bisection width (bound)")
        sp.add_argument("--tier", choices=("desk", "long"), default="desk")
        return sp

    sp = common(sub.add_parser("detect", help="locate cycles and print their Fourier spectra"))
    sp.add_argument("--bracket", nargs=2, metavar=("LO", "HI"))
    sp.set_defaults(func=cmd_detect)

    sp = common(sub.add_parser("certify", help="fit and certify transversal curves"))
    sp.add_argument("--bracket", nargs=2, metavar=("LO", "HI"))
    sp.add_argument("--cycle", help="cycle name from the system file")
    sp.add_argument("--eps", type=float)
    sp.add_argument("--m", type=int)
    sp.add_argument("--denbound", type=int)
    sp.add_argument("--method", choices=("common", "best"), default="common")
    sp.add_argument("--no-escalate", action="store_true", help="single attempt, no retry ladder")
    sp.add_argument("--label")
    sp.add_argument("--curve", help="certify this rational curve JSON instead of fitting one")
    sp.set_defaults(func=cmd_certify)

    sp = common(sub.add_parser("annulus", help="assemble annuli from certificate files"))
    sp.add_argument("files", nargs="*")
    sp.set_defaults(func=cmd_annulus)

    sp = common(sub.add_parser("nonexist", help="Cherkas non-existence certificate"))
    sp.add_argument("--n", type=int)
    sp.add_argument("--delta")
    sp.set_defaults(func=cmd_nonexist)

    sp = common(sub.add_parser("bound", help="bisect for the smallest certified parameter"))
    sp.add_argument("--n", type=int)
    sp.add_argument("--bracket", nargs=2, metavar=("LO", "HI"))
    sp.set_defaults(func=cmd_bound)

    sp = common(sub.add_parser("plotdata", help="CSV files from reports and certificates"))
    sp.add_argument("files", nargs="*")
    sp.set_defaults(func=cmd_plotdata)

    sp = common(sub.add_parser("verify", help="re-check certificate files"))
    sp.add_argument("files", nargs="*")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, FormatError, FileNotFoundError, ValueError) as exc:
        print(f"pbcert: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CertificationFailed as exc:
        print(f"pbcert: not certified: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (CycleError, FlowError) as exc:
        print(f"pbcert: cycle detection failed: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
